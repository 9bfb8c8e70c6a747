#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specweyl/commands.hpp"
#include "specweyl/error.hpp"
#include "specweyl/io.hpp"
#include "specweyl/version.hpp"

namespace {

// Every subcommand writes into the same RunConfig; only the parsed
// subcommand's bindings fire, and run_command reads just what it needs.
struct Flags {
  specweyl::cmd::RunConfig cfg;
  std::string box_spec;
  double alpha = 0.0;
};

void add_output(CLI::App* sub, Flags& f) {
  sub->add_option("--out", f.cfg.out_path, "output path (default: stdout)");
}

void add_pointset(CLI::App* sub, Flags& f) {
  sub->add_option("--points", f.cfg.points_path,
                  "point list file, one point per line");
  sub->add_option("--generator", f.cfg.generator_path, "generator spec JSON");
}

void add_domain_body(CLI::App* sub, Flags& f) {
  sub->add_option("--domain", f.cfg.domain_path, "domain JSON")->required();
  sub->add_option("--body", f.cfg.body_path,
                  "norm body JSON (default: Euclidean unit ball)");
}

}  // namespace

int main(int argc, char** argv) {
  Flags f;
  CLI::App app{"spectrum, frame, and lattice-count checks for exponent sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(specweyl::kToolName) + " " +
                                        specweyl::kToolVersion);

  CLI::App* verify =
      app.add_subcommand("verify", "orthogonality, tiling, and frame checks");
  add_domain_body(verify, f);
  add_pointset(verify, f);
  verify->add_option("--tol", f.cfg.tol, "residual tolerance");
  verify->add_option("--trunc", f.cfg.trunc, "truncation radius T");
  verify->add_option("--orth-radius", f.cfg.orth_radius,
                     "orthogonality window radius");
  verify->add_option("--samples", f.cfg.samples, "QMC sample budget");
  verify->add_option("--seed", f.cfg.seed, "QMC scramble seed");
  verify->add_option("--box", f.box_spec,
                     "center sampling box lo:hi,lo:hi,...");
  add_output(verify, f);

  CLI::App* count = app.add_subcommand(
      "count", "counting curve N(R), error term, and exponent fit");
  add_domain_body(count, f);
  add_pointset(count, f);
  count->add_option("--radii", f.cfg.radii_spec,
                    "start:stop:step or comma list")
      ->required();
  count->add_option("--eta", f.cfg.eta, "envelope floor for the exponent fit");
  add_output(count, f);

  CLI::App* density =
      app.add_subcommand("density", "Landau-type counting densities");
  add_pointset(density, f);
  density->add_option("--radii", f.cfg.radii_spec, "single cube half-side R")
      ->required();
  density->add_option("--box", f.box_spec, "center grid box lo:hi,lo:hi,...")
      ->required();
  density->add_option("--spacing", f.cfg.spacing, "center grid spacing");
  add_output(density, f);

  CLI::App* empty = app.add_subcommand(
      "empty-cube", "largest empty cube and constant-free bounds");
  add_pointset(empty, f);
  empty->add_option("--box", f.box_spec, "search box lo:hi,lo:hi,...")
      ->required();
  empty->add_option("--domain", f.cfg.domain_path,
                    "domain JSON (enables the bound comparison)");
  empty->add_option("--delta", f.cfg.delta, "side-length tolerance");
  empty->add_option("--alpha", f.alpha, "Minkowski exponent (default d-1)");
  empty->add_option("--frame-a", f.cfg.frame_a, "lower frame bound A");
  empty->add_option("--frame-b", f.cfg.frame_b, "upper frame bound B");
  add_output(empty, f);

  CLI::App* example1 = app.add_subcommand(
      "example1", "materialize the sharp-spectrum construction");
  example1->add_option("--dim", f.cfg.dim, "ambient dimension");
  example1->add_option("--radii", f.cfg.radii_spec,
                       "ladder radii (empty: plain integer lattice)");
  example1->add_option("--window", f.cfg.window,
                       "materialization window radius");
  add_output(example1, f);

  CLI::App* info =
      app.add_subcommand("domain-info", "volume, boundary, and content facts");
  info->add_option("--domain", f.cfg.domain_path, "domain JSON")->required();
  info->add_option("--alpha", f.alpha, "also estimate Minkowski content");
  add_output(info, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  f.cfg.command = sub->get_name();
  try {
    if (const CLI::Option* o = sub->get_option_no_throw("--box");
        o && o->count())
      f.cfg.box = specweyl::cmd::parse_box(f.box_spec);
    if (const CLI::Option* o = sub->get_option_no_throw("--alpha");
        o && o->count())
      f.cfg.alpha = f.alpha;
  } catch (const specweyl::error& e) {
    specweyl::io::json j;
    j["error"]["code"] = specweyl::errc_name(e.code());
    j["error"]["message"] = e.what();
    std::cerr << specweyl::io::dump_json(j);
    return 2;
  }
  return specweyl::cmd::run_command(f.cfg, std::cout, std::cerr);
}
