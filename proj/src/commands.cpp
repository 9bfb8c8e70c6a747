#include "specweyl/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "specweyl/analysis.hpp"
#include "specweyl/error.hpp"
#include "specweyl/pointset.hpp"
#include "specweyl/version.hpp"

namespace specweyl::cmd {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

double parse_num(const std::string& tok, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  require(!tok.empty() && end == tok.c_str() + tok.size() && std::isfinite(v),
          errc::invalid_argument,
          std::string("bad ") + what + " \"" + tok + "\"");
  return v;
}

geom::Domain load_domain(const RunConfig& cfg) {
  require(!cfg.domain_path.empty(), errc::invalid_argument,
          "--domain is required for this command");
  return io::domain_from_json(io::parse_json_file(cfg.domain_path));
}

geom::ConvexBody load_body(const RunConfig& cfg, int fallback_dim) {
  if (cfg.body_path.empty()) return geom::ConvexBody::ball(fallback_dim, 1.0);
  return io::body_from_json(io::parse_json_file(cfg.body_path));
}

pts::PointSet load_pointset(const RunConfig& cfg) {
  require(cfg.points_path.empty() || cfg.generator_path.empty(),
          errc::invalid_argument,
          "--points and --generator are mutually exclusive");
  if (!cfg.points_path.empty()) {
    auto points = io::load_points(cfg.points_path);
    require(!points.empty(), errc::invalid_pointset,
            "point file \"" + cfg.points_path + "\" holds no points");
    const int d = static_cast<int>(points[0].size());
    return pts::PointSet::explicit_list(d, std::move(points));
  }
  require(!cfg.generator_path.empty(), errc::invalid_argument,
          "one of --points or --generator is required");
  return io::pointset_from_generator_json(
      io::parse_json_file(cfg.generator_path));
}

io::json make_envelope(const RunConfig& cfg) {
  io::json env;
  env["tool"]["name"] = kToolName;
  env["tool"]["version"] = kToolVersion;
  env["command"] = cfg.command;
  env["config"] = config_to_json(cfg);
  env["inputs"]["domain"] = io::json();
  env["inputs"]["body"] = io::json();
  env["inputs"]["generator"] = io::json();
  return env;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty())
    out << text;
  else
    io::write_text_file_atomic(cfg.out_path, text);
}

// CSV at --out; the fit report lands next to it with a .json suffix.
std::string json_sibling(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
    return path.substr(0, path.size() - 4) + ".json";
  return path + ".json";
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const geom::Domain dom = load_domain(cfg);
  const pts::PointSet ps = load_pointset(cfg);
  const geom::ConvexBody body = load_body(cfg, dom.dim());
  require(body.dim() == dom.dim(), errc::invalid_body,
          "body dimension does not match the domain");

  analysis::VerifyOptions opt;
  opt.tol = cfg.tol;
  opt.trunc = cfg.trunc;
  opt.orth_radius = cfg.orth_radius;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.sample_box = cfg.box;
  const analysis::VerificationReport report =
      analysis::verify(ps, dom, body, opt);

  io::json env = make_envelope(cfg);
  env["inputs"]["domain"] = io::domain_to_json(dom);
  env["inputs"]["body"] = io::body_to_json(body);
  env["inputs"]["generator"] = io::generator_to_json(ps);
  env["report"] = io::to_json(report);
  emit(cfg, io::dump_json(env), out);
  return report.verdict == analysis::Verdict::inconsistent ? 1 : 0;
}

int run_count(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const geom::Domain dom = load_domain(cfg);
  const pts::PointSet ps = load_pointset(cfg);
  const geom::ConvexBody body = load_body(cfg, dom.dim());
  require(body.dim() == dom.dim(), errc::invalid_body,
          "body dimension does not match the domain");
  const std::vector<double> radii = parse_radii(cfg.radii_spec);

  analysis::CountingCurve curve =
      analysis::counting_curve(ps, dom, body, radii);
  try {
    curve.fit = analysis::fit_error_exponent(curve, cfg.eta);
  } catch (const error& e) {
    if (e.code() != errc::fit_unavailable) throw;
    io::json w;
    w["warning"]["code"] = errc_name(e.code());
    w["warning"]["message"] = e.what();
    err << io::dump_json(w);
  }

  io::json env = make_envelope(cfg);
  env["inputs"]["domain"] = io::domain_to_json(dom);
  env["inputs"]["body"] = io::body_to_json(body);
  env["inputs"]["generator"] = io::generator_to_json(ps);
  env["report"] = io::to_json(curve);
  if (cfg.out_path.empty()) {
    out << io::dump_json(env);
  } else {
    io::write_text_file_atomic(cfg.out_path, io::counting_curve_csv(curve));
    io::write_text_file_atomic(json_sibling(cfg.out_path),
                               io::dump_json(env));
  }
  return 0;
}

int run_density(const RunConfig& cfg, std::ostream& out) {
  const pts::PointSet ps = load_pointset(cfg);
  const std::vector<double> radii = parse_radii(cfg.radii_spec);
  require(radii.size() == 1, errc::invalid_argument,
          "density takes a single radius in --radii");
  require(cfg.box.has_value(), errc::invalid_argument,
          "--box is required for density");
  require(std::isfinite(cfg.spacing) && cfg.spacing > 0.0,
          errc::invalid_argument, "--spacing must be positive");
  const double r = radii[0];
  const pts::LandauDensities ld =
      pts::landau_density(ps, r, *cfg.box, cfg.spacing);

  io::json rep;
  rep["R"] = r;
  rep["landau"] = io::to_json(ld);
  const double norm = std::pow(2.0 * r, ps.dim());
  rep["d_plus_normalized"] = static_cast<double>(ld.d_plus) / norm;
  rep["d_minus_normalized"] = static_cast<double>(ld.d_minus) / norm;

  io::json env = make_envelope(cfg);
  env["inputs"]["generator"] = io::generator_to_json(ps);
  env["report"] = std::move(rep);
  emit(cfg, io::dump_json(env), out);
  return 0;
}

int run_empty_cube(const RunConfig& cfg, std::ostream& out) {
  const pts::PointSet ps = load_pointset(cfg);
  require(cfg.box.has_value(), errc::invalid_argument,
          "--box is required for empty-cube");

  io::json env = make_envelope(cfg);
  env["inputs"]["generator"] = io::generator_to_json(ps);
  if (cfg.domain_path.empty()) {
    const analysis::EmptyCubeResult cube =
        analysis::largest_empty_cube(ps, *cfg.box, cfg.delta);
    env["report"] = io::to_json(cube);
  } else {
    const geom::Domain dom = load_domain(cfg);
    const double alpha = cfg.alpha.value_or(dom.dim() - 1.0);
    const analysis::EmptyCubeReport report = analysis::check_empty_cube_bounds(
        dom, ps, alpha, cfg.frame_a, cfg.frame_b, *cfg.box, cfg.delta);
    env["inputs"]["domain"] = io::domain_to_json(dom);
    env["report"] = io::to_json(report);
  }
  emit(cfg, io::dump_json(env), out);
  return 0;
}

int run_example1(const RunConfig& cfg, std::ostream& out) {
  std::vector<double> radii;
  if (!cfg.radii_spec.empty()) radii = parse_radii(cfg.radii_spec);
  require(std::isfinite(cfg.window) && cfg.window > 0.0,
          errc::invalid_argument, "--window must be positive");
  const pts::Window w =
      pts::make_window(geom::ConvexBody::cube(cfg.dim, 1.0), cfg.window,
                       std::vector<double>(cfg.dim, 0.0));
  const pts::PointSet ps = pts::construct_example1(cfg.dim, radii, w);
  const std::vector<std::vector<double>> points = pts::enumerate(ps, w);
  emit(cfg, io::format_points(points), out);
  return 0;
}

int run_domain_info(const RunConfig& cfg, std::ostream& out) {
  const geom::Domain dom = load_domain(cfg);

  io::json rep;
  rep["dimension"] = dom.dim();
  rep["kind"] = io::domain_to_json(dom)["kind"];
  rep["volume"] = dom.volume();
  rep["bounding_box"] = io::box_to_json(dom.bounding_box());
  rep["inscribed_cube_side"] = geom::inscribed_cube_side(dom);
  if (dom.kind() == geom::DomainKind::polygon2d) {
    rep["perimeter"] = dom.polygon_perimeter();
    rep["isoperimetric"] = io::to_json(geom::polygon_isoperimetric_check(dom));
  }
  if (cfg.alpha)
    rep["minkowski"] = io::to_json(
        geom::minkowski_content_estimate(dom, *cfg.alpha, {0.1, 0.05, 0.02}));

  io::json env = make_envelope(cfg);
  env["inputs"]["domain"] = io::domain_to_json(dom);
  env["report"] = std::move(rep);
  emit(cfg, io::dump_json(env), out);
  return 0;
}

int exit_code_for(errc code) {
  switch (code) {
    case errc::invalid_domain:
    case errc::invalid_body:
    case errc::invalid_argument:
    case errc::unsupported_domain:
    case errc::invalid_pointset:
    case errc::invalid_offsets:
    case errc::undefined_separation:
    case errc::io_error:
      return 2;
    case errc::certificate_unavailable:
    case errc::fit_unavailable:
      return 3;
  }
  return 3;
}

}  // namespace

std::vector<double> parse_radii(const std::string& spec) {
  require(!spec.empty(), errc::invalid_argument,
          "--radii is required for this command");
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    require(parts.size() == 3, errc::invalid_argument,
            "range radii take the form start:stop:step");
    const double start = parse_num(parts[0], "radii start");
    const double stop = parse_num(parts[1], "radii stop");
    const double step = parse_num(parts[2], "radii step");
    require(step > 0.0 && stop >= start, errc::invalid_argument,
            "radii range needs step > 0 and stop >= start");
    const auto n = static_cast<long long>(
        std::floor((stop - start) / step + 1e-9));
    require(n < 1000000, errc::invalid_argument, "radii range too large");
    for (long long i = 0; i <= n; ++i) out.push_back(start + i * step);
  } else {
    for (const auto& tok : split(spec, ','))
      out.push_back(parse_num(tok, "radius"));
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    require(out[i] > 0.0 && (i == 0 || out[i] > out[i - 1]),
            errc::invalid_argument,
            "radii must be positive and strictly increasing");
  return out;
}

geom::Box parse_box(const std::string& spec) {
  geom::Box b;
  for (const auto& side : split(spec, ',')) {
    const auto pair = split(side, ':');
    require(pair.size() == 2, errc::invalid_argument,
            "--box takes lo:hi pairs separated by commas");
    const double lo = parse_num(pair[0], "box lo");
    const double hi = parse_num(pair[1], "box hi");
    require(lo < hi, errc::invalid_argument, "--box needs lo < hi per axis");
    b.sides.push_back({lo, hi});
  }
  return b;
}

io::json config_to_json(const RunConfig& c) {
  const auto str_or_null = [](const std::string& s) {
    return s.empty() ? io::json() : io::json(s);
  };
  io::json j;
  j["command"] = c.command;
  j["domain"] = str_or_null(c.domain_path);
  j["body"] = str_or_null(c.body_path);
  j["points"] = str_or_null(c.points_path);
  j["generator"] = str_or_null(c.generator_path);
  j["out"] = str_or_null(c.out_path);
  j["radii"] = str_or_null(c.radii_spec);
  j["tol"] = c.tol;
  j["trunc"] = c.trunc;
  j["delta"] = c.delta;
  j["eta"] = c.eta;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["alpha"] = c.alpha ? io::json(*c.alpha) : io::json();
  j["frame_a"] = c.frame_a;
  j["frame_b"] = c.frame_b;
  j["spacing"] = c.spacing;
  j["orth_radius"] = c.orth_radius;
  j["box"] = c.box ? io::box_to_json(*c.box) : io::json();
  j["dim"] = c.dim;
  j["window"] = c.window;
  return j;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "verify") return run_verify(cfg, out);
    if (cfg.command == "count") return run_count(cfg, out, err);
    if (cfg.command == "density") return run_density(cfg, out);
    if (cfg.command == "empty-cube") return run_empty_cube(cfg, out);
    if (cfg.command == "example1") return run_example1(cfg, out);
    if (cfg.command == "domain-info") return run_domain_info(cfg, out);
    fail(errc::invalid_argument, "unknown command \"" + cfg.command + "\"");
  } catch (const error& e) {
    io::json j;
    j["error"]["code"] = errc_name(e.code());
    j["error"]["message"] = e.what();
    err << io::dump_json(j);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    io::json j;
    j["error"]["code"] = "internal";
    j["error"]["message"] = e.what();
    err << io::dump_json(j);
    return 3;
  }
}

}  // namespace specweyl::cmd
