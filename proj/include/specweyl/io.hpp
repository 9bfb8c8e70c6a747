#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "specweyl/analysis.hpp"
#include "specweyl/geometry.hpp"
#include "specweyl/pointset.hpp"

namespace specweyl::io {

using json = nlohmann::ordered_json;

// ---- files ----

std::string read_text_file(const std::string& path);
// Write via a temp file in the same directory plus rename, so readers never
// observe a partial report.
void write_text_file_atomic(const std::string& path,
                            const std::string& content);
json parse_json_file(const std::string& path);

// Deterministic serialization: two-space indent, insertion-order keys,
// doubles printed with %.17g so every real round-trips exactly and carries
// full precision.
std::string dump_json(const json& j);

// ---- spatial objects ----
// Domain JSON: {"dimension": d, "kind": "box|box-union|polygon2d",
//               "boxes": [[[a1,b1],...,[ad,bd]], ...], "polygon": [[x,y],...]}
// Body JSON:   {"dimension": d, "kind": "ball|cube|polytope", "radius": r,
//               "halfspaces": [[n1,...,nd], ...]}
// Generator JSON: {"kind": "lattice|column-tiling|example1|explicit",
//                  "dimension": d, "radii": [...], "offsets": [[v..., t],...],
//                  "points": [...], "basis": [[...],...]}

geom::Box box_from_json(const json& j);
json box_to_json(const geom::Box& b);

geom::Domain domain_from_json(const json& j);
json domain_to_json(const geom::Domain& dom);

geom::ConvexBody body_from_json(const json& j);
json body_to_json(const geom::ConvexBody& body);

pts::PointSet pointset_from_generator_json(const json& j);
json generator_to_json(const pts::PointSet& ps);

// ---- point list files: one point per line, space-separated coordinates,
// "#" starts a comment ----

std::vector<std::vector<double>> parse_points(const std::string& text);
std::vector<std::vector<double>> load_points(const std::string& path);
std::string format_points(const std::vector<std::vector<double>>& points);

// ---- curves ----

// Header "R,N,E"; R and E with 15 significant digits, N as an integer.
std::string counting_curve_csv(const analysis::CountingCurve& curve);

// ---- report fragments ----

json to_json(const fourier::TailCertificate& t);
json to_json(const analysis::OrthogonalityResult& o);
json to_json(const analysis::TilingSample& s);
json to_json(const analysis::FrameEstimate& f);
json to_json(const analysis::VerifyOptions& o);
json to_json(const analysis::VerificationReport& r);
json to_json(const analysis::FitResult& f);
json to_json(const analysis::CountingCurve& c);
json to_json(const analysis::EmptyCubeResult& r);
json to_json(const analysis::EmptyCubeReport& r);
json to_json(const pts::LandauDensities& l);
json to_json(const geom::MinkowskiEstimate& m);
json to_json(const geom::IsoperimetricRecord& r);
json to_json(const geom::NeighborhoodMeasure& m);

}  // namespace specweyl::io
