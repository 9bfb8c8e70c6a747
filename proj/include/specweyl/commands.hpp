#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "specweyl/geometry.hpp"
#include "specweyl/io.hpp"

namespace specweyl::cmd {

// One batch run: a command name plus every knob any command reads.  Knobs a
// command ignores are harmless; reports embed the full config for replay.
struct RunConfig {
  std::string command;
  std::string domain_path;
  std::string body_path;
  std::string points_path;
  std::string generator_path;
  std::string out_path;    // empty -> stdout
  std::string radii_spec;  // "start:stop:step" or "r1,r2,..."
  double tol = 1e-9;
  double trunc = 100.0;  // truncation radius T for tiling sums
  double delta = 1e-3;   // empty-cube side tolerance
  double eta = 0.5;      // error-envelope floor for exponent fits
  std::uint64_t samples = std::uint64_t{1} << 16;
  std::uint64_t seed = 1;
  std::optional<double> alpha;  // Minkowski exponent; default d - 1
  double frame_a = 1.0;         // frame bounds fed to empty-cube bounds
  double frame_b = 1.0;
  double spacing = 0.1;  // density center-grid spacing
  double orth_radius = 16.0;
  std::optional<geom::Box> box;  // sampling / search box
  int dim = 2;                   // example1 dimension
  double window = 12.0;          // example1 materialization radius
};

// "start:stop:step" (inclusive endpoint, fp-tolerant) or a comma list; the
// result must be strictly increasing, positive, and finite.
std::vector<double> parse_radii(const std::string& spec);

// "lo:hi,lo:hi,..." one pair per axis.
geom::Box parse_box(const std::string& spec);

io::json config_to_json(const RunConfig& config);

// Dispatch on config.command, write the report (atomically when out_path is
// set, to `out` otherwise), and return the process exit code: 0 ok, 1
// verdict-fail, 2 input error, 3 internal error.  Error and warning JSON go
// to `err`.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace specweyl::cmd
