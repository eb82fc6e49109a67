#include <iostream>

#include <CLI11.hpp>

#include "qvolterra/cli.hpp"
#include "qvolterra/version.hpp"

namespace {

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--emptiness", "expected FROM:TO");
  return {std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qvolterra::cli;
  CLI::App app{"Quadratic Volterra operators on the infinite simplex"};
  app.set_version_flag("--version", std::string(qvolterra::kVersion));
  app.require_subcommand(1);

  RunOptions opts;
  std::string config, scenario, out = ".", emptiness;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON config file (merged over the scenario)");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed for random generators");
    sub->add_option("--scenario", scenario, "built-in scenario")->check(CLI::IsMember(scenario_names()));
  };
  auto* apply = app.add_subcommand("apply", "apply an operator once");
  auto* iter = app.add_subcommand("iterate", "iterate and classify the trajectory");
  auto* qset = app.add_subcommand("qset", "solve for a point of Q on a face");
  auto* study = app.add_subcommand("truncation-study", "truncation gap grid and tail checks");
  for (auto* s : {apply, iter, qset, study}) add_common(s);
  qset->add_option("--emptiness", emptiness, "certify Q empty for face sizes FROM:TO");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  if (!config.empty()) opts.config_path = config;
  if (!scenario.empty()) opts.scenario = scenario;
  opts.out_dir = out;
  for (auto* s : {apply, iter, qset, study}) {
    if (s->parsed() && s->count("--seed") > 0) opts.seed = seed;
  }
  if (!emptiness.empty()) {
    try {
      opts.emptiness = parse_range(emptiness);
    } catch (const std::exception&) {
      std::cerr << "error: --emptiness: expected FROM:TO\n";
      return kExitConfigError;
    }
  }
  if (!opts.config_path && !opts.scenario) {
    std::cerr << "error: one of --config or --scenario is required\n";
    return kExitConfigError;
  }
  return run(app.get_subcommands().front()->get_name(), opts, std::cout, std::cerr);
}
