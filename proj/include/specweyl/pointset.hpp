#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "specweyl/geometry.hpp"
#include "specweyl/parallel.hpp"

namespace specweyl::pts {

enum class SetKind { explicit_list, lattice, column_tiling, example1 };

// Norm ball {x : ||x - center||_K <= radius}; the inclusive filter makes
// points exactly on the sphere countable.
struct Window {
  geom::ConvexBody body;
  double radius = 0.0;
  std::vector<double> center;
};

Window make_window(geom::ConvexBody body, double radius,
                   std::vector<double> center);

using ColumnKey = std::vector<long long>;

// Exponent set: an explicit list, a (possibly sheared) integer lattice, a
// cube-tiling complement with per-column last-coordinate offsets, or the
// sharp spectrum built from a radius ladder.  Immutable after construction.
class PointSet {
 public:
  static PointSet explicit_list(int dim,
                                std::vector<std::vector<double>> points);
  static PointSet lattice(int dim);
  static PointSet lattice(int dim, std::vector<std::vector<double>> basis);
  static PointSet column_tiling(int dim, std::map<ColumnKey, double> offsets);
  static PointSet example1(int dim, std::vector<double> radii);

  int dim() const { return dim_; }
  SetKind kind() const { return kind_; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  const std::vector<std::vector<double>>& basis() const { return basis_; }
  const std::vector<std::vector<double>>& basis_inv() const {
    return basis_inv_;
  }
  const std::map<ColumnKey, double>& offsets() const { return offsets_; }
  const std::vector<double>& radii() const { return radii_; }
  bool identity_basis() const { return identity_basis_; }

  // Last-coordinate offset t(v) in [0,1) of column v (generator kinds).
  double column_offset(std::span<const long long> v) const;

 private:
  PointSet() = default;

  int dim_ = 0;
  SetKind kind_ = SetKind::explicit_list;
  std::vector<std::vector<double>> points_;
  std::vector<std::vector<double>> basis_;      // columns of B, row-major
  std::vector<std::vector<double>> basis_inv_;  // B^-1
  bool identity_basis_ = true;
  std::map<ColumnKey, double> offsets_;
  std::vector<double> radii_;
};

// Streaming candidate space covering a window: a flat index range whose
// entries decode to candidate points in deterministic lexicographic order.
// candidate() writes the point and reports whether it passes the norm
// filter; callers stream blocks of the flat range in parallel.
class WindowIteration {
 public:
  WindowIteration(const PointSet& ps, const Window& w);
  std::int64_t candidate_count() const { return total_; }
  bool candidate(std::int64_t flat, std::span<double> out) const;

 private:
  const PointSet* ps_;
  const Window* w_;
  std::int64_t total_ = 0;
  std::vector<long long> klo_, size_;
};

// All points with ||p - center||_K <= R, each exactly once; generator kinds
// in lexicographic integer-index order, explicit lists in lexicographic
// coordinate order.
std::vector<std::vector<double>> enumerate(const PointSet& ps,
                                           const Window& w);

std::int64_t count(const PointSet& ps, const Window& w,
                   par::exec ex = par::exec::par);

// Minimum pairwise Euclidean distance among the points in the window.
// All-pairs up to 10^4 points, grid-bucket neighbor search beyond.
double separation(const PointSet& ps, const Window& w);

// Lambda = {(v, k + t(v)) : v integer column, k integer}; always tiles space
// by unit cubes, hence a spectrum of the unit cube.
PointSet column_tiling_spectrum(int dim, std::map<ColumnKey, double> offsets);

// Sharp spectrum: column v is assigned the smallest ladder radius R_i with
// |v| <= R_i and shifted so one cube vertex per column lands exactly on the
// sphere of radius R_i.  The window argument only sizes materialization.
PointSet construct_example1(int dim, std::vector<double> radii,
                            const Window& w);

// Number of columns assigned to each ladder radius, i.e. the number of
// defining vertices lying exactly on each sphere.
std::vector<std::int64_t> example1_sphere_counts(int dim,
                                                 const std::vector<double>& radii);

// The defining vertices on sphere i (one per assigned column).
std::vector<std::vector<double>> example1_defining_vertices(
    int dim, const std::vector<double>& radii, std::size_t i);

struct LandauDensities {
  std::int64_t d_plus = 0;
  std::int64_t d_minus = 0;
  std::size_t centers = 0;
  double spacing = 0.0;  // 0 when centers were supplied explicitly
  bool empty_set = false;
};

// Max/min counts over sampled cube centers of Lambda in the closed cube of
// side 2R; inner approximations of the true sup/inf.
LandauDensities landau_density(const PointSet& ps, double R,
                               const geom::Box& search_box, double spacing,
                               par::exec ex = par::exec::par);
LandauDensities landau_density(const PointSet& ps, double R,
                               const std::vector<std::vector<double>>& centers,
                               par::exec ex = par::exec::par);

}  // namespace specweyl::pts
