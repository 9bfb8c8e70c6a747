#include "specweyl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "specweyl/error.hpp"
#include "specweyl/qmc.hpp"

namespace specweyl::analysis {

namespace {

std::size_t nblocks(std::size_t n) {
  return n == 0 ? 0 : (n + par::kBlock - 1) / par::kBlock;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit lf;
  lf.slope = sxy / sxx;
  lf.intercept = my - lf.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (lf.intercept + lf.slope * xs[i]);
    ss += r * r;
  }
  lf.rms = std::sqrt(ss / static_cast<double>(n));
  return lf;
}

}  // namespace

OrthogonalityResult check_orthogonality(const pts::PointSet& ps,
                                        const geom::Domain& dom,
                                        const pts::Window& w, double tol,
                                        par::exec ex) {
  require(tol > 0.0 && std::isfinite(tol), errc::invalid_argument,
          "orthogonality tolerance must be positive");
  require(dom.dim() == ps.dim(), errc::invalid_argument,
          "domain and point set dimensions differ");
  const int d = ps.dim();
  const auto points = pts::enumerate(ps, w);
  const std::size_t n = points.size();

  OrthogonalityResult res;
  res.tol = tol;
  res.points_in_window = static_cast<std::int64_t>(n);
  if (n < 2) {
    res.vacuous = true;
    return res;
  }
  res.pairs_checked =
      static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;

  const fourier::PowerSpectrum f(dom);
  std::size_t wi = 0, wj = 1;
  double worst = -1.0;

  if (n <= 2048) {
    // Lattice-like windows repeat the same few difference vectors across
    // hundreds of thousands of pairs, so dedup differences (sign-canonical,
    // f is even) and evaluate each one once.
    std::vector<double> diffs;
    std::vector<std::pair<std::size_t, std::size_t>> first_pair;
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(4 * n);
    std::string key(static_cast<std::size_t>(d) * sizeof(double), '\0');
    std::vector<double> buf(d);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (int a = 0; a < d; ++a) buf[a] = points[j][a] - points[i][a];
        bool flip = false;
        for (int a = 0; a < d; ++a) {
          if (buf[a] != 0.0) {
            flip = buf[a] < 0.0;
            break;
          }
        }
        for (int a = 0; a < d; ++a) {
          const double v = flip ? -buf[a] : buf[a];
          buf[a] = (v == 0.0) ? 0.0 : v;  // normalize -0 so keys are unique
        }
        std::memcpy(key.data(), buf.data(), key.size());
        const auto ins = seen.emplace(key, first_pair.size());
        if (ins.second) {
          diffs.insert(diffs.end(), buf.begin(), buf.end());
          first_pair.emplace_back(i, j);
        }
      }
    }
    const std::size_t m = first_pair.size();
    res.unique_differences = static_cast<std::int64_t>(m);
    std::vector<double> val(m);
    par::for_blocks(m, ex,
                    [&](std::size_t, std::size_t lo, std::size_t hi) {
                      for (std::size_t k = lo; k < hi; ++k)
                        val[k] = f(std::span<const double>(
                            diffs.data() + k * static_cast<std::size_t>(d),
                            static_cast<std::size_t>(d)));
                    });
    std::size_t arg = 0;
    for (std::size_t k = 1; k < m; ++k)
      if (val[k] > val[arg]) arg = k;
    worst = val[arg];
    wi = first_pair[arg].first;
    wj = first_pair[arg].second;
  } else {
    // Direct pair scan, parallel over row blocks with a deterministic
    // in-order combine (ties resolve to the earliest pair).
    const std::size_t nb = nblocks(n);
    std::vector<double> bmax(nb, -1.0);
    std::vector<std::pair<std::size_t, std::size_t>> bpair(nb);
    par::for_blocks(
        n, ex, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
          std::vector<double> buf(d);
          double best = -1.0;
          std::pair<std::size_t, std::size_t> bp{0, 0};
          for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
              for (int a = 0; a < d; ++a) buf[a] = points[j][a] - points[i][a];
              const double v = f(buf);
              if (v > best) {
                best = v;
                bp = {i, j};
              }
            }
          }
          bmax[blk] = best;
          bpair[blk] = bp;
        });
    for (std::size_t b = 0; b < nb; ++b) {
      if (bmax[b] > worst) {
        worst = bmax[b];
        wi = bpair[b].first;
        wj = bpair[b].second;
      }
    }
  }

  res.max_residual = worst;
  res.worst_lambda = points[wj];
  res.worst_mu = points[wi];
  res.pass = res.max_residual <= tol;
  return res;
}

TilingSample tiling_residual(const pts::PointSet& ps, const geom::Domain& dom,
                             const geom::ConvexBody& body,
                             std::span<const double> x, double T,
                             const fourier::TailCertificate* tail,
                             std::uint64_t samples, std::uint64_t seed,
                             par::exec ex) {
  const int d = ps.dim();
  require(dom.dim() == d && body.dim() == d, errc::invalid_argument,
          "point set, domain, and body dimensions must agree");
  require(static_cast<int>(x.size()) == d, errc::invalid_argument,
          "evaluation point has the wrong dimension");
  require(T > 0.0 && std::isfinite(T), errc::invalid_argument,
          "truncation radius must be positive");
  if (tail != nullptr)
    require(std::abs(tail->threshold - T) <= 1e-12 * std::max(1.0, T),
            errc::invalid_argument,
            "precomputed tail certificate was built for a different radius");

  TilingSample out;
  out.x.assign(x.begin(), x.end());

  const pts::Window w = pts::make_window(body, T, out.x);
  const pts::WindowIteration it(ps, w);
  const fourier::PowerSpectrum f(dom);
  const std::size_t total = static_cast<std::size_t>(it.candidate_count());
  const std::size_t nb = nblocks(total);
  std::vector<double> bsum(nb, 0.0);
  std::vector<std::int64_t> bcnt(nb, 0);
  par::for_blocks(
      total, ex, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
        std::vector<double> pt(d), diff(d);
        double s = 0.0;
        std::int64_t c = 0;
        for (std::size_t k = lo; k < hi; ++k) {
          if (!it.candidate(static_cast<std::int64_t>(k), pt)) continue;
          for (int a = 0; a < d; ++a) diff[a] = out.x[a] - pt[a];
          s += f(diff);
          ++c;
        }
        bsum[blk] = s;
        bcnt[blk] = c;
      });
  out.sum = par::pairwise_sum(bsum);
  for (std::size_t b = 0; b < nb; ++b) out.points_used += bcnt[b];
  require(out.points_used >= 1, errc::invalid_argument,
          "truncation window contains no points of the set");

  const double vol = dom.volume();
  out.residual = std::abs(out.sum - vol * vol);

  fourier::TailCertificate local;
  if (tail == nullptr) {
    local = fourier::tail_certificate(f, body, T, samples, seed, ex);
    tail = &local;
  }
  const double cell = geom::body_volume(body) * ipow(T, d);
  const double rho = static_cast<double>(out.points_used) / cell;
  out.certificate = rho * tail->tail_bound;
  return out;
}

std::vector<std::vector<double>> frame_sample_centers(
    const pts::PointSet& ps, int n, std::uint64_t seed,
    const geom::Box* sample_box, std::uint64_t block) {
  require(n >= 1, errc::invalid_argument, "need at least one sample center");
  const int d = ps.dim();
  if (sample_box != nullptr)
    require(sample_box->dim() == d, errc::invalid_argument,
            "sample box dimension does not match the point set");
  else
    require(ps.kind() != pts::SetKind::explicit_list, errc::invalid_argument,
            "explicit point sets need a sampling box for center generation");

  const qmc::Sampler sampler(d, seed);
  std::vector<std::vector<double>> centers(n, std::vector<double>(d));
  std::vector<double> u(d);
  for (int i = 0; i < n; ++i) {
    sampler.point(block, static_cast<std::uint64_t>(i), u);
    auto& c = centers[i];
    if (sample_box != nullptr) {
      for (int j = 0; j < d; ++j)
        c[j] = sample_box->sides[j].lo + u[j] * sample_box->sides[j].width();
    } else if (ps.kind() == pts::SetKind::lattice && !ps.identity_basis()) {
      const auto& basis = ps.basis();
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += basis[j][k] * u[k];
        c[j] = s;
      }
    } else {
      c.assign(u.begin(), u.end());
    }
  }
  return centers;
}

FrameEstimate estimate_frame_bounds(
    const pts::PointSet& ps, const geom::Domain& dom,
    const geom::ConvexBody& body,
    const std::vector<std::vector<double>>& centers, double T,
    const fourier::TailCertificate* tail, std::uint64_t samples,
    std::uint64_t seed, par::exec ex) {
  require(centers.size() >= 32, errc::invalid_argument,
          "frame estimation needs at least 32 sample centers");
  fourier::TailCertificate local;
  if (tail == nullptr) {
    const fourier::PowerSpectrum f(dom);
    local = fourier::tail_certificate(f, body, T, samples, seed, ex);
    tail = &local;
  }

  FrameEstimate fe;
  fe.centers_used = static_cast<int>(centers.size());
  fe.samples.reserve(centers.size());
  const double inf = std::numeric_limits<double>::infinity();
  double mins = inf, maxs = -inf, amin = inf, bmax = -inf, cmax = 0.0;
  for (const auto& c : centers) {
    TilingSample s =
        tiling_residual(ps, dom, body, c, T, tail, samples, seed, ex);
    mins = std::min(mins, s.sum);
    maxs = std::max(maxs, s.sum);
    amin = std::min(amin, s.sum - s.certificate);
    bmax = std::max(bmax, s.sum + s.certificate);
    cmax = std::max(cmax, s.certificate);
    fe.samples.push_back(std::move(s));
  }
  const double v2 = dom.volume() * dom.volume();
  fe.min_sum = mins;
  fe.max_sum = maxs;
  fe.a_hat = amin / v2;
  fe.b_hat = bmax / v2;
  fe.cert_norm = cmax / v2;
  fe.degenerate = (maxs == 0.0);
  return fe;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::orthogonal_basis_consistent:
      return "orthogonal-basis-consistent";
    case Verdict::frame_consistent:
      return "frame-consistent";
    case Verdict::inconsistent:
      return "inconsistent";
  }
  return "inconsistent";
}

VerificationReport verify(const pts::PointSet& ps, const geom::Domain& dom,
                          const geom::ConvexBody& body,
                          const VerifyOptions& opt, par::exec ex) {
  const int d = ps.dim();
  require(dom.dim() == d && body.dim() == d, errc::invalid_argument,
          "point set, domain, and body dimensions must agree");
  require(opt.tol > 0.0 && opt.trunc > 0.0 && opt.orth_radius > 0.0,
          errc::invalid_argument, "verification knobs must be positive");
  require(opt.tiling_centers >= 1, errc::invalid_argument,
          "need at least one tiling center");

  VerificationReport rep;
  rep.options = opt;

  const geom::Box* boxp = opt.sample_box ? &*opt.sample_box : nullptr;
  std::vector<double> wcenter(d, 0.0);
  if (boxp != nullptr)
    for (int j = 0; j < d; ++j) wcenter[j] = boxp->sides[j].mid();

  const pts::Window orth_w =
      pts::make_window(geom::ConvexBody::cube(d), opt.orth_radius, wcenter);
  rep.orthogonality = check_orthogonality(ps, dom, orth_w, opt.tol, ex);
  if (rep.orthogonality.points_in_window >= 2)
    rep.separation = pts::separation(ps, orth_w);

  const fourier::PowerSpectrum f(dom);
  rep.tail =
      fourier::tail_certificate(f, body, opt.trunc, opt.samples, opt.seed, ex);

  const auto tiling_centers =
      frame_sample_centers(ps, opt.tiling_centers, opt.seed, boxp, 1);
  rep.tiling_samples.reserve(tiling_centers.size());
  for (const auto& c : tiling_centers)
    rep.tiling_samples.push_back(tiling_residual(
        ps, dom, body, c, opt.trunc, &rep.tail, opt.samples, opt.seed, ex));

  const auto frame_centers =
      frame_sample_centers(ps, opt.frame_centers, opt.seed, boxp, 0);
  rep.frame = estimate_frame_bounds(ps, dom, body, frame_centers, opt.trunc,
                                    &rep.tail, opt.samples, opt.seed, ex);

  bool tiling_ok = true;
  for (const auto& s : rep.tiling_samples) {
    if (s.residual > kTilingSafety * s.certificate + opt.tol) {
      tiling_ok = false;
      break;
    }
  }

  if (rep.orthogonality.pass && tiling_ok) {
    rep.verdict = Verdict::orthogonal_basis_consistent;
  } else if (!rep.frame.degenerate && rep.frame.a_hat > 0.0 &&
             rep.frame.a_hat > 2.0 * rep.frame.cert_norm &&
             rep.frame.b_hat < 1e6 * rep.frame.a_hat) {
    rep.verdict = Verdict::frame_consistent;
  } else {
    rep.verdict = Verdict::inconsistent;
  }
  return rep;
}

CountingCurve counting_curve(const pts::PointSet& ps, const geom::Domain& dom,
                             const geom::ConvexBody& body,
                             std::span<const double> radii,
                             std::span<const double> center, par::exec ex) {
  const int d = ps.dim();
  require(dom.dim() == d && body.dim() == d, errc::invalid_argument,
          "point set, domain, and body dimensions must agree");
  require(!radii.empty(), errc::invalid_argument, "radius list is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0 && std::isfinite(radii[i]), errc::invalid_argument,
            "radii must be positive and finite");
    if (i > 0)
      require(radii[i] > radii[i - 1], errc::invalid_argument,
              "radii must be strictly increasing");
  }
  std::vector<double> c(d, 0.0);
  if (!center.empty()) {
    require(static_cast<int>(center.size()) == d, errc::invalid_argument,
            "center has the wrong dimension");
    c.assign(center.begin(), center.end());
  }

  CountingCurve curve{body, dom, c, {}, {}};
  curve.samples.reserve(radii.size());
  const double main_coef = geom::body_volume(body) * dom.volume();
  for (const double r : radii) {
    CountSample s;
    s.r = r;
    s.n = pts::count(ps, pts::make_window(body, r, c), ex);
    s.e = static_cast<double>(s.n) - main_coef * ipow(r, d);
    curve.samples.push_back(s);
  }
  return curve;
}

FitResult fit_error_exponent(const CountingCurve& curve, double eta) {
  require(eta >= 0.0 && std::isfinite(eta), errc::invalid_argument,
          "eta must be nonnegative");
  FitResult fr;
  fr.eta = eta;

  // Per dyadic radius block keep the largest |E| (ties keep the earliest
  // sample); the envelope is what the growth exponent bounds.
  std::map<int, std::pair<double, double>> best;  // block -> (|E|, R)
  int usable = 0;
  for (const auto& s : curve.samples) {
    const double a = std::abs(s.e);
    if (!(s.r > 0.0) || !(a > eta)) continue;
    ++usable;
    const int j = static_cast<int>(std::floor(std::log2(s.r)));
    const auto it = best.find(j);
    if (it == best.end() || a > it->second.first) best[j] = {a, s.r};
  }
  fr.usable_samples = usable;
  require(usable >= 8, errc::fit_unavailable,
          "need at least 8 samples with |E| above eta");
  require(best.size() >= 2, errc::fit_unavailable,
          "error envelope collapses into a single dyadic block");

  std::vector<double> xs, ys;
  xs.reserve(best.size());
  ys.reserve(best.size());
  for (const auto& [j, be] : best) {
    (void)j;
    xs.push_back(std::log(be.second));
    ys.push_back(std::log(be.first));
  }
  const LineFit lf = fit_line(xs, ys);
  fr.alpha_hat = lf.slope;
  fr.c_hat = std::exp(lf.intercept);
  fr.fit_residual = lf.rms;
  fr.points_used = static_cast<int>(xs.size());
  fr.envelope_log_r = std::move(xs);
  fr.envelope_log_e = std::move(ys);
  return fr;
}

EmptyCubeResult largest_empty_cube(const pts::PointSet& ps,
                                   const geom::Box& search_box, double delta) {
  const int d = ps.dim();
  require(search_box.dim() == d, errc::invalid_argument,
          "search box dimension does not match the point set");
  for (const auto& s : search_box.sides)
    require(std::isfinite(s.lo) && std::isfinite(s.hi) && s.hi > s.lo,
            errc::invalid_argument,
            "search box sides must have positive width");
  require(delta > 0.0 && std::isfinite(delta), errc::invalid_argument,
          "side resolution delta must be positive");

  double min_side = std::numeric_limits<double>::infinity();
  std::vector<double> mid(d);
  double rad = 0.0;
  for (int j = 0; j < d; ++j) {
    min_side = std::min(min_side, search_box.sides[j].width());
    mid[j] = search_box.sides[j].mid();
    rad = std::max(rad, 0.5 * search_box.sides[j].width());
  }

  const auto all = pts::enumerate(
      ps, pts::make_window(geom::ConvexBody::cube(d), rad, mid));
  std::vector<std::vector<double>> pal;
  pal.reserve(all.size());
  for (const auto& p : all) {
    bool interior = true;
    for (int j = 0; j < d; ++j) {
      if (!(search_box.sides[j].lo < p[j] && p[j] < search_box.sides[j].hi)) {
        interior = false;
        break;
      }
    }
    if (interior) pal.push_back(p);
  }

  EmptyCubeResult res;
  res.points_considered = static_cast<std::int64_t>(pal.size());
  if (pal.empty()) {
    res.side = min_side;
    res.empty_search = true;
    res.corner.resize(d);
    for (int j = 0; j < d; ++j) res.corner[j] = search_box.sides[j].lo;
    return res;
  }

  // An empty open cube can always slide down each axis until its lower face
  // is pinned by a point coordinate or the box wall, so those values
  // (clipped to keep the cube inside the box) are a complete candidate set.
  std::vector<std::vector<double>> cand(d);
  auto feasible = [&](double s, std::vector<double>& witness) -> bool {
    double combos = 1.0;
    for (int j = 0; j < d; ++j) {
      auto& cs = cand[j];
      cs.clear();
      const double clo = search_box.sides[j].lo;
      const double chi = search_box.sides[j].hi - s;
      cs.push_back(clo);
      for (const auto& p : pal)
        cs.push_back(std::min(std::max(p[j], clo), chi));
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      combos *= static_cast<double>(cs.size());
    }
    require(combos <= 5e7, errc::invalid_argument,
            "search box holds too many candidate corners");
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> corner(d);
    while (true) {
      for (int j = 0; j < d; ++j) corner[j] = cand[j][idx[j]];
      bool blocked = false;
      for (const auto& p : pal) {
        bool inside = true;
        for (int j = 0; j < d; ++j) {
          if (!(corner[j] < p[j] && p[j] < corner[j] + s)) {
            inside = false;
            break;
          }
        }
        if (inside) {
          blocked = true;
          break;
        }
      }
      if (!blocked) {
        witness = corner;
        return true;
      }
      int ax = d - 1;
      while (ax >= 0) {
        if (++idx[ax] < cand[ax].size()) break;
        idx[ax] = 0;
        --ax;
      }
      if (ax < 0) break;
    }
    return false;
  };

  std::vector<double> wit;
  if (feasible(min_side, wit)) {
    res.side = min_side;
    res.corner = wit;
    return res;
  }
  double slo = 0.0, shi = min_side;
  std::vector<double> bestw;
  while (shi - slo > 0.5 * delta) {
    const double smid = 0.5 * (slo + shi);
    if (feasible(smid, wit)) {
      slo = smid;
      bestw = wit;
    } else {
      shi = smid;
    }
  }
  res.side = slo;
  res.corner = bestw;
  return res;
}

EmptyCubeReport check_empty_cube_bounds(const geom::Domain& dom,
                                        const pts::PointSet& ps, double alpha,
                                        double A, double B,
                                        const geom::Box& search_box,
                                        double delta, par::exec ex) {
  const int d = dom.dim();
  require(ps.dim() == d, errc::invalid_argument,
          "domain and point set dimensions differ");
  require(A > 0.0 && B >= A && std::isfinite(B), errc::invalid_argument,
          "frame bounds must satisfy 0 < A <= B");

  EmptyCubeReport rep;
  rep.alpha = alpha;
  rep.a = A;
  rep.b = B;
  rep.minkowski =
      geom::minkowski_content_estimate(dom, alpha, {0.1, 0.05, 0.02}, ex);
  rep.bound_minkowski =
      std::pow(B * rep.minkowski.content / (A * dom.volume()),
               1.0 / (static_cast<double>(d) - alpha));
  rep.epsilon = geom::inscribed_cube_side(dom);
  rep.bound_inscribed = (B / A) / rep.epsilon;
  rep.cube = largest_empty_cube(ps, search_box, delta);
  rep.r_star = 0.5 * rep.cube.side;
  rep.c1 = rep.r_star / rep.bound_minkowski;
  rep.c2 = rep.r_star / rep.bound_inscribed;
  if (dom.kind() == geom::DomainKind::polygon2d)
    rep.comparison_ratio = geom::polygon_isoperimetric_check(dom).constant_c;
  return rep;
}

}  // namespace specweyl::analysis
