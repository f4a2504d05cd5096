#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "dispersl/dispersl.hpp"

namespace {

namespace h = dispersl::harness;

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

std::vector<dispersl::WeightShift> parse_pairs(const std::string& text) {
  // "w:s, w:s, ..." with fractions allowed in either slot
  std::vector<dispersl::WeightShift> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (h::detail::trim(item).empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw dispersl::ConfigError("--inject-lambda: expected weight:shift, got '" + item + "'");
    pairs.push_back({h::detail::parse_number(item.substr(0, colon), "inject-lambda"),
                     h::detail::parse_number(item.substr(colon + 1), "inject-lambda")});
  }
  if (pairs.empty()) throw dispersl::ConfigError("--inject-lambda: no pairs");
  return pairs;
}

void emit_table(const h::ConvergenceTable& table, const h::ExperimentSpec& spec,
                h::Column x, std::size_t tail, const std::string& plot_path) {
  if (spec.output_path.empty()) {
    h::write_csv(std::cout, table);
  } else {
    std::ofstream out(spec.output_path);
    if (!out) throw dispersl::ConfigError("cannot write '" + spec.output_path + "'");
    h::write_csv(out, table);
    std::cout << "wrote " << spec.output_path << '\n';
  }
  if (!plot_path.empty()) {
    std::ofstream py(plot_path);
    if (!py) throw dispersl::ConfigError("cannot write '" + plot_path + "'");
    py << h::plot_script(spec.output_path.empty() ? "table.csv" : spec.output_path, x);
  }
  const auto slope = h::try_fit_slope(table, x, h::Column::rel_l2_error, tail);
  std::cout << "slope (tail " << tail << "): "
            << (slope ? h::format_double(*slope) : std::string("absent")) << '\n';
}

int finish(const h::ConvergenceTable& table) {
  for (const auto& row : table)
    if (!row.ok()) {
      std::cerr << "row h=" << row.h << " dt=" << row.dt << ": " << row.status << '\n';
      return exit_numerical;
    }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Lagrangian solver for u_t + f(u) u_x + nu u_xxx = 0 on the torus"};
  app.require_subcommand(1);

  std::string config;
  std::string plot_path;
  std::size_t tail = 2;

  auto* run_cmd = app.add_subcommand("run", "single run at the configured dt and nx");
  run_cmd->add_option("--config", config, "key=value experiment file")->required();

  auto* sweep_dt = app.add_subcommand("sweep-dt", "fixed-h convergence in dt");
  sweep_dt->add_option("--config", config, "key=value experiment file")->required();
  sweep_dt->add_option("--tail", tail, "rows used by the slope fit")->check(CLI::Range(2, 1000));
  sweep_dt->add_option("--plot-script", plot_path, "write a matplotlib script here");

  auto* sweep_h = app.add_subcommand("sweep-h", "coupled h refinement, dt = coeff h^exp");
  sweep_h->add_option("--config", config, "key=value experiment file")->required();
  sweep_h->add_option("--tail", tail, "rows used by the slope fit")->check(CLI::Range(2, 1000));
  sweep_h->add_option("--plot-script", plot_path, "write a matplotlib script here");

  std::uint64_t seed = h::default_seed;
  std::string inject;
  auto* verify = app.add_subcommand("verify", "run the property suite");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--inject-lambda", inject,
                     "extra pair list to certify, e.g. \"-1/4:-1.5874, 1/4:0, ...\"");

  double nu = 1e-3;
  int points = 100;
  auto* residual = app.add_subcommand("residual", "PDE residual of the reference waves");
  residual->add_option("--nu", nu, "dispersion coefficient")->required();
  residual->add_option("--points", points, "random sample points")->check(CLI::PositiveNumber);
  residual->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run_cmd) {
      const auto spec = h::load_experiment(config);
      if (spec.sweep != h::SweepKind::none)
        throw dispersl::ConfigError("run: config describes a sweep");
      const h::ConvergenceTable table{h::run_single(spec)};
      h::write_csv(std::cout, table);
      return finish(table);
    }
    if (*sweep_dt || *sweep_h) {
      const auto spec = h::load_experiment(config);
      const bool in_dt = static_cast<bool>(*sweep_dt);
      const auto table = in_dt ? h::convergence_in_dt(spec) : h::convergence_in_h(spec);
      emit_table(table, spec, in_dt ? h::Column::dt : h::Column::h, tail, plot_path);
      return finish(table);
    }
    if (*verify) {
      h::VerifyOptions opts{seed, std::nullopt};
      if (!inject.empty()) opts.injected_pairs = parse_pairs(inject);
      const auto report = h::verify_properties(opts);
      std::printf("seed %llu\n", static_cast<unsigned long long>(report.seed));
      for (const auto& c : report.checks)
        std::printf("%-4s %-34s measured %-24s threshold %-24s %s\n",
                    c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL"), c.name.c_str(),
                    h::format_double(c.measured).c_str(),
                    h::format_double(c.threshold).c_str(), c.detail.c_str());
      return report.all_passed() ? exit_ok : exit_numerical;
    }
    if (*residual) {
      if (!(nu > 0.0)) throw dispersl::ConfigError("--nu must be positive");
      std::mt19937_64 rng(seed);
      const auto g = h::checks::pde_residual_gate(rng, nu, points);
      std::printf("corrected wave: max |residual| %s (bound %s)\n",
                  h::format_double(g.corrected_max).c_str(),
                  h::format_double(g.corrected_bound).c_str());
      std::printf("uncorrected profile: max |residual| %s (ratio %s)\n",
                  h::format_double(g.uncorrected_max).c_str(),
                  h::format_double(g.uncorrected_max / g.corrected_max).c_str());
      return g.corrected_max <= g.corrected_bound ? exit_ok : exit_numerical;
    }
  } catch (const dispersl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const dispersl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_ok;
}
