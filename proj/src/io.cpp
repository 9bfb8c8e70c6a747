#include "specweyl/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "specweyl/error.hpp"

namespace specweyl::io {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const json& want(const json& j, const char* key, errc code) {
  const auto it = j.find(key);
  require(it != j.end() && !it->is_null(), code,
          std::string("missing field \"") + key + "\"");
  return *it;
}

int want_dim(const json& j, errc code) {
  const json& d = want(j, "dimension", code);
  require(d.is_number_integer(), code, "\"dimension\" must be an integer");
  const long long v = d.get<long long>();
  require(v >= 1 && v <= 16, code, "dimension out of range [1, 16]");
  return static_cast<int>(v);
}

double want_number(const json& v, errc code, const char* what) {
  require(v.is_number(), code, std::string(what) + " must be a number");
  const double x = v.get<double>();
  require(std::isfinite(x), code, std::string(what) + " must be finite");
  return x;
}

std::vector<double> number_vector(const json& v, errc code, const char* what) {
  require(v.is_array(), code, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(want_number(e, code, what));
  return out;
}

void dump_value(const json& j, std::string& out, int indent) {
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out.append(indent + 2, ' ');
      out += json(it.key()).dump();
      out += ": ";
      dump_value(it.value(), out, indent + 2);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    out.append(indent, ' ');
    out += '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.append(indent + 2, ' ');
      dump_value(j[i], out, indent + 2);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    out.append(indent, ' ');
    out += ']';
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    out += std::isfinite(v) ? fmt17(v) : "null";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_error, "cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  require(!in.bad(), errc::io_error, "read failed for \"" + path + "\"");
  return ss.str();
}

void write_text_file_atomic(const std::string& path,
                            const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), errc::io_error, "cannot open \"" + tmp + "\"");
    out << content;
    out.flush();
    require(out.good(), errc::io_error, "write failed for \"" + tmp + "\"");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(errc::io_error, "cannot rename \"" + tmp + "\" to \"" + path + "\"");
  }
}

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::io_error, "invalid JSON in \"" + path + "\": " + e.what());
  }
}

std::string dump_json(const json& j) {
  std::string out;
  dump_value(j, out, 0);
  out += '\n';
  return out;
}

geom::Box box_from_json(const json& j) {
  require(j.is_array() && !j.empty(), errc::invalid_argument,
          "a box must be a nonempty array of [lo, hi] pairs");
  geom::Box b;
  for (const auto& side : j) {
    require(side.is_array() && side.size() == 2, errc::invalid_argument,
            "each box side must be a [lo, hi] pair");
    b.sides.push_back({want_number(side[0], errc::invalid_argument, "box lo"),
                       want_number(side[1], errc::invalid_argument, "box hi")});
  }
  return b;
}

json box_to_json(const geom::Box& b) {
  json out = json::array();
  for (const auto& s : b.sides) out.push_back(json::array({s.lo, s.hi}));
  return out;
}

geom::Domain domain_from_json(const json& j) {
  require(j.is_object(), errc::invalid_domain,
          "domain spec must be a JSON object");
  const int d = want_dim(j, errc::invalid_domain);
  const json& kind = want(j, "kind", errc::invalid_domain);
  require(kind.is_string(), errc::invalid_domain, "\"kind\" must be a string");
  const std::string k = kind.get<std::string>();

  if (k == "box" || k == "box-union") {
    const json& boxes = want(j, "boxes", errc::invalid_domain);
    require(boxes.is_array() && !boxes.empty(), errc::invalid_domain,
            "\"boxes\" must be a nonempty array");
    if (k == "box")
      require(boxes.size() == 1, errc::invalid_domain,
              "kind \"box\" takes exactly one box");
    std::vector<geom::Box> bs;
    bs.reserve(boxes.size());
    for (const auto& bj : boxes) {
      geom::Box b = box_from_json(bj);
      require(b.dim() == d, errc::invalid_domain,
              "box dimension does not match \"dimension\"");
      bs.push_back(std::move(b));
    }
    return k == "box" ? geom::Domain::box(std::move(bs[0]))
                      : geom::Domain::box_union(std::move(bs));
  }
  if (k == "polygon2d") {
    require(d == 2, errc::invalid_domain, "polygon2d requires dimension 2");
    const json& poly = want(j, "polygon", errc::invalid_domain);
    require(poly.is_array() && poly.size() >= 3, errc::invalid_domain,
            "\"polygon\" must list at least 3 vertices");
    std::vector<geom::Point2> vs;
    vs.reserve(poly.size());
    for (const auto& vj : poly) {
      require(vj.is_array() && vj.size() == 2, errc::invalid_domain,
              "each polygon vertex must be an [x, y] pair");
      vs.push_back({want_number(vj[0], errc::invalid_domain, "vertex x"),
                    want_number(vj[1], errc::invalid_domain, "vertex y")});
    }
    return geom::Domain::polygon(std::move(vs));
  }
  fail(errc::invalid_domain, "unknown domain kind \"" + k + "\"");
}

json domain_to_json(const geom::Domain& dom) {
  json j;
  j["dimension"] = dom.dim();
  switch (dom.kind()) {
    case geom::DomainKind::box:
      j["kind"] = "box";
      break;
    case geom::DomainKind::box_union:
      j["kind"] = "box-union";
      break;
    case geom::DomainKind::polygon2d:
      j["kind"] = "polygon2d";
      break;
  }
  if (dom.kind() == geom::DomainKind::polygon2d) {
    json poly = json::array();
    for (const auto& v : dom.polygon_vertices())
      poly.push_back(json::array({v[0], v[1]}));
    j["polygon"] = std::move(poly);
  } else {
    json boxes = json::array();
    for (const auto& b : dom.boxes()) boxes.push_back(box_to_json(b));
    j["boxes"] = std::move(boxes);
  }
  return j;
}

geom::ConvexBody body_from_json(const json& j) {
  require(j.is_object(), errc::invalid_body, "body spec must be a JSON object");
  const int d = want_dim(j, errc::invalid_body);
  const json& kind = want(j, "kind", errc::invalid_body);
  require(kind.is_string(), errc::invalid_body, "\"kind\" must be a string");
  const std::string k = kind.get<std::string>();

  if (k == "ball" || k == "cube") {
    double r = 1.0;
    const auto it = j.find("radius");
    if (it != j.end() && !it->is_null())
      r = want_number(*it, errc::invalid_body, "\"radius\"");
    return k == "ball" ? geom::ConvexBody::ball(d, r)
                       : geom::ConvexBody::cube(d, r);
  }
  if (k == "polytope") {
    const json& hs = want(j, "halfspaces", errc::invalid_body);
    require(hs.is_array() && !hs.empty(), errc::invalid_body,
            "\"halfspaces\" must be a nonempty array");
    std::vector<std::vector<double>> normals;
    normals.reserve(hs.size());
    for (const auto& n : hs) {
      auto v = number_vector(n, errc::invalid_body, "halfspace normal");
      require(static_cast<int>(v.size()) == d, errc::invalid_body,
              "halfspace normal has the wrong dimension");
      normals.push_back(std::move(v));
    }
    return geom::ConvexBody::polytope(d, std::move(normals));
  }
  fail(errc::invalid_body, "unknown body kind \"" + k + "\"");
}

json body_to_json(const geom::ConvexBody& body) {
  json j;
  j["dimension"] = body.dim();
  switch (body.kind()) {
    case geom::BodyKind::ball:
      j["kind"] = "ball";
      j["radius"] = body.radius();
      break;
    case geom::BodyKind::cube:
      j["kind"] = "cube";
      j["radius"] = body.radius();
      break;
    case geom::BodyKind::polytope: {
      j["kind"] = "polytope";
      json hs = json::array();
      for (const auto& n : body.normals()) hs.push_back(json(n));
      j["halfspaces"] = std::move(hs);
      break;
    }
  }
  return j;
}

pts::PointSet pointset_from_generator_json(const json& j) {
  require(j.is_object(), errc::invalid_pointset,
          "generator spec must be a JSON object");
  const int d = want_dim(j, errc::invalid_pointset);
  const json& kind = want(j, "kind", errc::invalid_pointset);
  require(kind.is_string(), errc::invalid_pointset,
          "\"kind\" must be a string");
  const std::string k = kind.get<std::string>();

  if (k == "lattice") {
    const auto it = j.find("basis");
    if (it == j.end() || it->is_null()) return pts::PointSet::lattice(d);
    require(it->is_array() && static_cast<int>(it->size()) == d,
            errc::invalid_pointset, "\"basis\" must be a d x d matrix");
    std::vector<std::vector<double>> basis;
    basis.reserve(d);
    for (const auto& row : *it) {
      auto v = number_vector(row, errc::invalid_pointset, "basis row");
      require(static_cast<int>(v.size()) == d, errc::invalid_pointset,
              "\"basis\" must be a d x d matrix");
      basis.push_back(std::move(v));
    }
    return pts::PointSet::lattice(d, std::move(basis));
  }
  if (k == "column-tiling") {
    const json& offsets = want(j, "offsets", errc::invalid_offsets);
    require(offsets.is_array(), errc::invalid_offsets,
            "\"offsets\" must be an array of [v..., t] rows");
    std::map<pts::ColumnKey, double> map;
    for (const auto& row : offsets) {
      auto v = number_vector(row, errc::invalid_offsets, "offset row");
      require(static_cast<int>(v.size()) == d, errc::invalid_offsets,
              "each offset row needs d entries: column then offset");
      pts::ColumnKey key(d - 1);
      for (int a = 0; a + 1 < d; ++a) {
        require(v[a] == std::floor(v[a]) && std::abs(v[a]) <= 9e15,
                errc::invalid_offsets, "column coordinates must be integers");
        key[a] = static_cast<long long>(v[a]);
      }
      const bool fresh = map.emplace(std::move(key), v[d - 1]).second;
      require(fresh, errc::invalid_offsets, "duplicate column in \"offsets\"");
    }
    return pts::PointSet::column_tiling(d, std::move(map));
  }
  if (k == "example1") {
    std::vector<double> radii;
    const auto it = j.find("radii");
    if (it != j.end() && !it->is_null())
      radii = number_vector(*it, errc::invalid_pointset, "radii");
    return pts::PointSet::example1(d, std::move(radii));
  }
  if (k == "explicit") {
    const json& pj = want(j, "points", errc::invalid_pointset);
    require(pj.is_array(), errc::invalid_pointset,
            "\"points\" must be an array of points");
    std::vector<std::vector<double>> points;
    points.reserve(pj.size());
    for (const auto& row : pj) {
      auto v = number_vector(row, errc::invalid_pointset, "point");
      require(static_cast<int>(v.size()) == d, errc::invalid_pointset,
              "point has the wrong dimension");
      points.push_back(std::move(v));
    }
    return pts::PointSet::explicit_list(d, std::move(points));
  }
  fail(errc::invalid_pointset, "unknown generator kind \"" + k + "\"");
}

json generator_to_json(const pts::PointSet& ps) {
  json j;
  switch (ps.kind()) {
    case pts::SetKind::lattice:
      j["kind"] = "lattice";
      j["dimension"] = ps.dim();
      if (!ps.identity_basis()) {
        json basis = json::array();
        for (const auto& row : ps.basis()) basis.push_back(json(row));
        j["basis"] = std::move(basis);
      }
      break;
    case pts::SetKind::column_tiling: {
      j["kind"] = "column-tiling";
      j["dimension"] = ps.dim();
      json offsets = json::array();
      for (const auto& [key, t] : ps.offsets()) {
        json row = json::array();
        for (const long long v : key)
          row.push_back(static_cast<std::int64_t>(v));
        row.push_back(t);
        offsets.push_back(std::move(row));
      }
      j["offsets"] = std::move(offsets);
      break;
    }
    case pts::SetKind::example1:
      j["kind"] = "example1";
      j["dimension"] = ps.dim();
      j["radii"] = json(ps.radii());
      break;
    case pts::SetKind::explicit_list: {
      j["kind"] = "explicit";
      j["dimension"] = ps.dim();
      json points = json::array();
      for (const auto& p : ps.points()) points.push_back(json(p));
      j["points"] = std::move(points);
      break;
    }
  }
  return j;
}

std::vector<std::vector<double>> parse_points(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::size_t width = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> p;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      require(end == tok.c_str() + tok.size() && std::isfinite(v),
              errc::invalid_pointset,
              "bad coordinate \"" + tok + "\" on line " +
                  std::to_string(lineno));
      p.push_back(v);
    }
    if (p.empty()) continue;
    if (width == 0) width = p.size();
    require(p.size() == width, errc::invalid_pointset,
            "inconsistent dimension on line " + std::to_string(lineno));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::vector<double>> load_points(const std::string& path) {
  return parse_points(read_text_file(path));
}

std::string format_points(const std::vector<std::vector<double>>& points) {
  std::string out;
  for (const auto& p : points) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) out += ' ';
      out += fmt17(p[j]);
    }
    out += '\n';
  }
  return out;
}

std::string counting_curve_csv(const analysis::CountingCurve& curve) {
  std::string out = "R,N,E\n";
  char buf[96];
  for (const auto& s : curve.samples) {
    std::snprintf(buf, sizeof buf, "%.15g,%lld,%.15g\n", s.r,
                  static_cast<long long>(s.n), s.e);
    out += buf;
  }
  return out;
}

json to_json(const fourier::TailCertificate& t) {
  json j;
  j["threshold"] = t.threshold;
  j["tail_bound"] = t.tail_bound;
  j["method"] = t.method;
  json shells = json::array();
  for (std::size_t i = 0; i < t.shell_radius.size(); ++i) {
    json s;
    s["radius"] = t.shell_radius[i];
    s["value"] = t.shell_value[i];
    s["std_error"] = t.shell_std_error[i];
    shells.push_back(std::move(s));
  }
  j["shells"] = std::move(shells);
  j["remainder"] = t.remainder;
  j["samples"] = t.samples;
  j["seed"] = t.seed;
  return j;
}

json to_json(const analysis::OrthogonalityResult& o) {
  json j;
  j["max_residual"] = o.max_residual;
  j["pass"] = o.pass;
  j["vacuous"] = o.vacuous;
  j["tol"] = o.tol;
  j["points_in_window"] = o.points_in_window;
  j["pairs_checked"] = o.pairs_checked;
  j["unique_differences"] = o.unique_differences;
  if (!o.vacuous) {
    j["worst_lambda"] = json(o.worst_lambda);
    j["worst_mu"] = json(o.worst_mu);
  }
  return j;
}

json to_json(const analysis::TilingSample& s) {
  json j;
  j["x"] = json(s.x);
  j["sum"] = s.sum;
  j["residual"] = s.residual;
  j["certificate"] = s.certificate;
  j["points_used"] = s.points_used;
  return j;
}

json to_json(const analysis::FrameEstimate& f) {
  json j;
  j["a_hat"] = f.a_hat;
  j["b_hat"] = f.b_hat;
  j["min_sum"] = f.min_sum;
  j["max_sum"] = f.max_sum;
  j["cert_norm"] = f.cert_norm;
  j["centers_used"] = f.centers_used;
  j["degenerate"] = f.degenerate;
  json samples = json::array();
  for (const auto& s : f.samples) samples.push_back(to_json(s));
  j["samples"] = std::move(samples);
  return j;
}

json to_json(const analysis::VerifyOptions& o) {
  json j;
  j["tol"] = o.tol;
  j["trunc"] = o.trunc;
  j["orth_radius"] = o.orth_radius;
  j["tiling_centers"] = o.tiling_centers;
  j["frame_centers"] = o.frame_centers;
  j["samples"] = o.samples;
  j["seed"] = o.seed;
  j["sample_box"] = o.sample_box ? box_to_json(*o.sample_box) : json();
  return j;
}

json to_json(const analysis::VerificationReport& r) {
  json j;
  j["verdict"] = analysis::verdict_name(r.verdict);
  j["options"] = to_json(r.options);
  j["orthogonality"] = to_json(r.orthogonality);
  j["separation"] = r.separation ? json(*r.separation) : json();
  json samples = json::array();
  for (const auto& s : r.tiling_samples) samples.push_back(to_json(s));
  j["tiling_samples"] = std::move(samples);
  j["tail_certificate"] = to_json(r.tail);
  j["frame"] = to_json(r.frame);
  return j;
}

json to_json(const analysis::FitResult& f) {
  json j;
  j["alpha_hat"] = f.alpha_hat;
  j["c_hat"] = f.c_hat;
  j["fit_residual"] = f.fit_residual;
  j["points_used"] = f.points_used;
  j["usable_samples"] = f.usable_samples;
  j["eta"] = f.eta;
  json env = json::array();
  for (std::size_t i = 0; i < f.envelope_log_r.size(); ++i) {
    json e;
    e["log_r"] = f.envelope_log_r[i];
    e["log_e"] = f.envelope_log_e[i];
    env.push_back(std::move(e));
  }
  j["envelope"] = std::move(env);
  return j;
}

json to_json(const analysis::CountingCurve& c) {
  json j;
  j["body"] = body_to_json(c.body);
  j["domain"] = domain_to_json(c.domain);
  j["center"] = json(c.center);
  json samples = json::array();
  for (const auto& s : c.samples) {
    json e;
    e["R"] = s.r;
    e["N"] = s.n;
    e["E"] = s.e;
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  j["fit"] = c.fit ? to_json(*c.fit) : json();
  return j;
}

json to_json(const analysis::EmptyCubeResult& r) {
  json j;
  j["side"] = r.side;
  j["corner"] = json(r.corner);
  j["empty_search"] = r.empty_search;
  j["points_considered"] = r.points_considered;
  return j;
}

json to_json(const analysis::EmptyCubeReport& r) {
  json j;
  j["r_star"] = r.r_star;
  j["bound_minkowski"] = r.bound_minkowski;
  j["bound_inscribed"] = r.bound_inscribed;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["alpha"] = r.alpha;
  j["a"] = r.a;
  j["b"] = r.b;
  j["epsilon"] = r.epsilon;
  j["comparison_ratio"] = r.comparison_ratio ? json(*r.comparison_ratio) : json();
  j["minkowski"] = to_json(r.minkowski);
  j["cube"] = to_json(r.cube);
  return j;
}

json to_json(const pts::LandauDensities& l) {
  json j;
  j["d_plus"] = l.d_plus;
  j["d_minus"] = l.d_minus;
  j["centers"] = l.centers;
  j["spacing"] = l.spacing;
  j["empty_set"] = l.empty_set;
  return j;
}

json to_json(const geom::MinkowskiEstimate& m) {
  json j;
  j["alpha"] = m.alpha;
  j["content"] = m.content;
  j["scales"] = json(m.scales);
  j["ratios"] = json(m.ratios);
  j["scale_instability"] = m.scale_instability;
  return j;
}

json to_json(const geom::IsoperimetricRecord& r) {
  json j;
  j["perimeter"] = r.perimeter;
  j["volume"] = r.volume;
  j["epsilon"] = r.epsilon;
  j["constant_c"] = r.constant_c;
  return j;
}

json to_json(const geom::NeighborhoodMeasure& m) {
  json j;
  j["value"] = m.value;
  j["method"] = m.method;
  j["resolution"] = m.resolution;
  return j;
}

}  // namespace specweyl::io
