#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "annulus/cli.hpp"

using namespace annulus;

int main(int argc, char** argv) {
  cli::RunConfig cfg;
  std::string lambda_s, grid_s, budget_s;

  CLI::App app{"Annulus-constrained shape optimizer: minimize lambda*area - perimeter between two disks"};
  app.require_subcommand(1);

  auto ring_opts = [&](CLI::App* s) {
    s->add_option("--a", cfg.a, "inner radius")->capture_default_str();
    s->add_option("--b", cfg.b, "outer radius")->capture_default_str();
  };
  auto lambda_opts = [&](CLI::App* s) {
    auto* l = s->add_option("--lambda", lambda_s, "lambda value or comma-separated list");
    auto* g = s->add_option("--lambda-grid", grid_s, "uniform grid lo:hi:n");
    l->excludes(g);
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--out", cfg.out, "output file (default stdout)");
    s->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "solve at a single lambda, JSON output");
  ring_opts(solve);
  lambda_opts(solve);
  common(solve);
  solve->add_option("--variant", cfg.variant, "ring, inner (no outer disk) or outer (no inner disk)")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "regime table over a lambda grid");
  ring_opts(sweep);
  lambda_opts(sweep);
  common(sweep);
  sweep->add_option("--format", cfg.format, "csv or json");

  auto* beta = app.add_subcommand("beta-table", "CSV of n, beta_n, betahat_n");
  beta->add_option("--n-max", cfg.n_max, "last n")->capture_default_str();
  common(beta);

  auto* render = app.add_subcommand("render", "SVG of the optimal body");
  ring_opts(render);
  lambda_opts(render);
  common(render);
  render->add_option("--solution", cfg.solution_path, "render a saved solution JSON instead of solving");
  render->add_option("--member", cfg.member, "body index for families (0 = canonical)")->capture_default_str();
  render->add_option("--variant", cfg.variant, "ring or outer")->capture_default_str();
  render->add_option("--format", cfg.format, "svg");

  auto* certify = app.add_subcommand("certify", "check solutions against the numerical oracles");
  ring_opts(certify);
  lambda_opts(certify);
  common(certify);
  certify->add_option("--solution", cfg.solution_path, "certify a saved solution JSON");
  certify->add_option("--oracle-budget", budget_s, "enumeration limits p:q:grid (p=-1: ring maximum)");
  certify->add_flag("!--no-descent", cfg.descent, "skip the support-function descent oracle");
  certify->add_option("--descent-m", cfg.descent_M, "support directions for the descent oracle")->capture_default_str();
  certify->add_option("--restarts", cfg.restarts, "descent restarts")->capture_default_str();
  certify->add_flag("--timing", cfg.timing, "include wall time (output no longer byte-stable)");
  certify->add_option("--format", cfg.format, "json");

  auto* fuzz = app.add_subcommand("fuzz", "inequality fuzzing on random convex polygons");
  fuzz->add_option("--n", cfg.fuzz_n, "number of polygons")->capture_default_str();
  common(fuzz);
  fuzz->add_option("--format", cfg.format, "json summary or csv of witnesses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::BadParameter;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (!lambda_s.empty()) cfg.lambdas = cli::parse_lambda_list(lambda_s);
    if (!grid_s.empty()) cfg.grid = cli::parse_grid(grid_s);
    if (!budget_s.empty()) cfg.budget = cli::parse_budget(budget_s);
    if ((cfg.command == "render" && !cfg.format.empty() && cfg.format != "svg") ||
        (cfg.command == "certify" && !cfg.format.empty() && cfg.format != "json"))
      throw ParameterError("unsupported --format for " + cfg.command);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::BadParameter;
  }
  return cli::run(cfg, std::cout, std::cerr);
}
