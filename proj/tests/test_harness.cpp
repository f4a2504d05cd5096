#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "dispersl/harness/config.hpp"
#include "dispersl/harness/csv.hpp"
#include "dispersl/harness/experiments.hpp"
#include "dispersl/harness/verify.hpp"

using namespace dispersl;
using namespace dispersl::harness;

namespace {

ExperimentSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment(in);
}

// reference h-sweep errors
const std::vector<double> ref_h{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
const std::vector<double> ref_err{0.00864922, 0.00391716, 0.00146543,
                                   0.000501557, 0.000167431, 5.54486e-05};

bool same_numbers(const ConvergenceTable& a, const ConvergenceTable& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ConvergenceRow x = a[i], y = b[i];
    x.wall_seconds = y.wall_seconds = 0.0;
    if (!(x == y)) return false;
  }
  return true;
}

}  // namespace

TEST(Config, ParsesFullFile) {
  const auto spec = parse(R"(# dt sweep
nu = 1e-3
flux = kdv
lambda = L4        # corrected set
interp = hermite
nx = 1000
t_end = 1
sweep = dt
sweep_values = 1/100, 1/200, 1/400
output = out.csv
)");
  EXPECT_EQ(spec.scheme.nu, 1e-3);
  EXPECT_EQ(spec.scheme.lambda_set.name(), LambdaName::L4);
  EXPECT_EQ(spec.scheme.interpolation, InterpolationKind::hermite);
  EXPECT_EQ(spec.nx, 1000u);
  EXPECT_EQ(spec.sweep, SweepKind::dt);
  ASSERT_EQ(spec.sweep_values.size(), 3u);
  EXPECT_DOUBLE_EQ(spec.sweep_values[2], 0.0025);
  EXPECT_EQ(spec.output_path, "out.csv");
  EXPECT_EQ(spec.reference, Reference::cnoidal);
}

TEST(Config, HSweepWithRule) {
  const auto spec = parse(
      "lambda = L5\nsweep = h\nsweep_values = 1/16, 1/32\ndt_rule_coeff = 100\ndt_rule_exp = 12/5\n");
  EXPECT_DOUBLE_EQ(*spec.dt_rule_exp, 2.4);
  EXPECT_EQ(*spec.dt_rule_coeff, 100.0);
}

TEST(Config, PolynomialFlux) {
  const auto spec = parse("flux = polynomial\nflux_coeffs = 0.5, 0, 2\nnx = 8\ndt = 0.1\n");
  EXPECT_EQ(spec.scheme.flux.coeffs(), (std::vector<double>{0.5, 0.0, 2.0}));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("nx = 8\ndt = 0.1\ncolour = blue\n"), ConfigError);
  EXPECT_THROW(parse("nx = 8\nnx = 9\ndt = 0.1\n"), ConfigError);
  EXPECT_THROW(parse("nx = eight\ndt = 0.1\n"), ConfigError);
  EXPECT_THROW(parse("nx 8\n"), ConfigError);
  EXPECT_THROW(parse("nx = 8\ndt = 0.1\nflux = polynomial\n"), ConfigError);
  EXPECT_THROW(parse("nx = 8\ndt = 0.1\nflux = kdv\nflux_coeffs = 1\n"), ConfigError);
  EXPECT_THROW(parse("sweep = h\nsweep_values = 1/16\ndt_rule_coeff = 100\ndt_rule_exp = 0\n"),
               ConfigError);
  EXPECT_THROW(parse("nx = 8\nsweep = dt\n"), ConfigError);
  EXPECT_THROW(parse("nx = 8\ndt = 1/0\n"), ConfigError);
  EXPECT_THROW(parse("nx = 8\ndt = 2\n"), ConfigError);
  EXPECT_THROW(parse("nx = 8\ndt = 0.1\nlambda = L3\n"), ConfigError);
  EXPECT_THROW(parse("nx = 8\ndt = 0.1\ninitial = sine\n"), ConfigError);
  EXPECT_THROW(load_experiment("/nonexistent/file.cfg"), ConfigError);
}

TEST(FitSlope, ExactPowerLaws) {
  EXPECT_NEAR(fit_slope({1, 2, 4}, {1, 2, 4}), 1.0, 1e-15);
  std::vector<double> x{0.1, 0.05, 0.025, 0.0125}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 2.0 / 3.0));
  EXPECT_NEAR(fit_slope(x, y, 4), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(fit_slope(x, y), 2.0 / 3.0, 1e-12);
}

TEST(FitSlope, ReferenceHSweepErrors) {
  EXPECT_NEAR(fit_slope(ref_h, ref_err, 2), std::log2(1.67431e-4 / 5.54486e-5), 1e-12);
  EXPECT_NEAR(fit_slope(ref_h, ref_err, 2), 1.594, 1e-3);
  // equally spaced log h: the three-point fit is the end-to-end ratio
  EXPECT_NEAR(fit_slope(ref_h, ref_err, 3), std::log2(0.000501557 / 5.54486e-05) / 2, 1e-12);
  EXPECT_NEAR(fit_slope(ref_h, ref_err, 3), 1.589, 1e-3);
  EXPECT_NEAR(fit_slope(ref_h, ref_err, 4), 1.57, 0.01);
}

TEST(FitSlope, Errors) {
  EXPECT_THROW(fit_slope({1, 2}, {1, 0}), DomainError);
  EXPECT_THROW(fit_slope({1, 2}, {1, -1}), DomainError);
  EXPECT_THROW(fit_slope({1, 2}, {1, 2}, 1), InvalidInput);
  EXPECT_THROW(fit_slope({1}, {1}), InvalidInput);
  EXPECT_THROW(fit_slope({1, 1}, {1, 2}), DomainError);
}

TEST(Csv, RoundTrip) {
  ConvergenceTable t(3);
  t[0] = {0.001, 0.01, 1.0, 0.0023603806123456789, 1.5, 2.5e-300, 0.25, 7, "ok"};
  t[1] = {1.0 / 3.0, 1e-5, 0.99999, std::nullopt, std::nullopt, std::nullopt, 0.0, 0,
          "failed: no convergence, node 3 \"x\""};
  t[2] = {0.1, 0.2, 0.3, 1e-17, 0.0, 0.0, 1e3, 100, "line\nbreak"};
  std::stringstream ss;
  write_csv(ss, t);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), csv_header);
  const ConvergenceTable back = read_csv(ss);
  EXPECT_EQ(back, t);
}

TEST(Csv, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, RejectsBadInput) {
  std::stringstream wrong("a,b\n");
  EXPECT_THROW(read_csv(wrong), InvalidInput);
  std::stringstream short_row(std::string(csv_header) + "\n1,2\n");
  EXPECT_THROW(read_csv(short_row), InvalidInput);
}

TEST(Sweeps, ZeroFluxWithoutReference) {
  const auto spec = parse(
      "flux = zero\nreference = none\ninitial = sine\nnx = 16\nsweep = dt\n"
      "sweep_values = 0.01, 0.05, 0.02\nt_end = 0.1\n");
  const auto table = convergence_in_dt(spec);
  ASSERT_EQ(table.size(), 3u);
  EXPECT_EQ(table[0].dt, 0.05);
  EXPECT_EQ(table[2].dt, 0.01);
  for (const auto& r : table) {
    EXPECT_TRUE(r.ok());
    EXPECT_FALSE(r.rel_l2_error);
    EXPECT_FALSE(r.weighted_error);
    EXPECT_NEAR(r.final_time, 0.1, 1e-15);
  }
  EXPECT_FALSE(try_fit_slope(table, Column::dt, Column::rel_l2_error));
}

TEST(Sweeps, DeterministicTables) {
  const std::string cfg =
      "nx = 64\nsweep = dt\nsweep_values = 1/10, 1/20\nt_end = 0.2\nlambda = L4\n";
  const auto a = convergence_in_dt(parse(cfg)), b = convergence_in_dt(parse(cfg));
  EXPECT_TRUE(same_numbers(a, b));
  for (const auto& r : a) {
    ASSERT_TRUE(r.rel_l2_error);
    EXPECT_GE(*r.rel_l2_error, 0.0);
    EXPECT_GE(*r.hs_star_error, 0.0);
    EXPECT_GE(*r.weighted_error, 0.0);
  }
}

TEST(Sweeps, HRuleAndFloorConvention) {
  const auto spec = parse(
      "sweep = h\nsweep_values = 1/16\ndt_rule_coeff = 100\ndt_rule_exp = 12/5\n");
  const auto table = convergence_in_h(spec);
  ASSERT_EQ(table.size(), 1u);
  const double dt = 100.0 * std::pow(1.0 / 16.0, 2.4);
  EXPECT_DOUBLE_EQ(table[0].dt, dt);
  EXPECT_DOUBLE_EQ(table[0].final_time, std::floor(1.0 / dt) * dt);
  EXPECT_NEAR(*table[0].rel_l2_error, 8.65e-3, 8.65e-3 * 0.5);
  EXPECT_FALSE(try_fit_slope(table, Column::h, Column::rel_l2_error));
}

TEST(Sweeps, RejectsNonDyadicH) {
  const auto spec = parse("sweep = h\nsweep_values = 0.3\ndt_rule_coeff = 1\ndt_rule_exp = 2\n");
  EXPECT_THROW(convergence_in_h(spec), ConfigError);
}

TEST(Sweeps, FailedRowIsMarked) {
  const auto spec = parse("nx = 32\nsweep = dt\nsweep_values = 0.1\nfp_max_iter = 1\n");
  const auto table = convergence_in_dt(spec);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_FALSE(table[0].ok());
  EXPECT_EQ(table[0].status.rfind("failed:", 0), 0u);
  EXPECT_FALSE(table[0].rel_l2_error);
}

TEST(Sweeps, WrongKindRejected) {
  const auto spec = parse("nx = 16\nsweep = dt\nsweep_values = 0.1\n");
  EXPECT_THROW(convergence_in_h(spec), ConfigError);
}

TEST(Verify, DefaultSeedPasses) {
  const auto report = verify_properties();
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.measured;
  EXPECT_TRUE(report.all_passed());
}

TEST(Verify, FlippedLambdaFourIsCaught) {
  const double c = cube_root_of_four();
  VerifyOptions opts;
  opts.injected_pairs = std::vector<WeightShift>{{-0.25, c}, {0.25, 0.0}, {0.75, c}, {-0.25, 2 * c}};
  const auto report = verify_properties(opts);
  EXPECT_FALSE(report.all_passed());
  bool found = false;
  for (const auto& ch : report.checks) {
    if (ch.name != "moments/custom") {
      EXPECT_TRUE(ch.passed) << ch.name;
      continue;
    }
    found = true;
    EXPECT_FALSE(ch.passed);
    EXPECT_NE(ch.detail.find("k=0 value 0.5"), std::string::npos) << ch.detail;
  }
  EXPECT_TRUE(found);
}

TEST(Verify, SeedsGiveSamePattern) {
  const auto base = verify_properties({1, std::nullopt});
  for (std::uint64_t seed : {2u, 3u, 4u, 5u}) {
    const auto r = verify_properties({seed, std::nullopt});
    ASSERT_EQ(r.checks.size(), base.checks.size());
    for (std::size_t i = 0; i < r.checks.size(); ++i)
      EXPECT_EQ(r.checks[i].passed, base.checks[i].passed) << r.checks[i].name;
  }
}

TEST(Verify, SameSeedSameReport) {
  const auto a = verify_properties({7, std::nullopt}), b = verify_properties({7, std::nullopt});
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i)
    EXPECT_EQ(a.checks[i].measured, b.checks[i].measured) << a.checks[i].name;
}
