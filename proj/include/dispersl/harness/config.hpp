#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dispersl/dispersive_operator.hpp"
#include "dispersl/errors.hpp"
#include "dispersl/flux.hpp"
#include "dispersl/interpolation.hpp"
#include "dispersl/sl_stepper.hpp"

namespace dispersl::harness {

enum class SweepKind { none, dt, h };
enum class Reference { cnoidal, none };
enum class InitialCondition { cnoidal, sine };

/// One experiment read from a key=value file.
///
///   nu = 1e-3              dispersion coefficient
///   flux = kdv             kdv | zero | polynomial (with flux_coeffs = c0, c1, ...)
///   lambda = L5            L4 | L5
///   interp = hermite       hermite | spline
///   nx = 1000              cells (fixed-h sweeps and single runs)
///   dt = 1/100             time step (single runs)
///   t_end = 1
///   fp_tol = 1e-13
///   fp_max_iter = 100
///   sweep = dt             none | dt | h
///   sweep_values = 1/100, 1/200
///   dt_rule_coeff = 100    h sweeps: dt = coeff * h^exp
///   dt_rule_exp = 12/5
///   initial = cnoidal      cnoidal | sine
///   reference = cnoidal    cnoidal | none
///   output = out.csv
///   threads = 0
///
/// Numbers accept the forms 1e-3, 0.01 and 1/100.
struct ExperimentSpec {
  ExperimentSpec(SchemeConfig scheme_template, std::size_t cells)
      : scheme(std::move(scheme_template)), nx(cells) {}

  SchemeConfig scheme;
  std::size_t nx = 0;
  SweepKind sweep = SweepKind::none;
  std::vector<double> sweep_values;
  std::optional<double> dt_rule_coeff;
  std::optional<double> dt_rule_exp;
  InitialCondition initial = InitialCondition::cnoidal;
  Reference reference = Reference::cnoidal;
  std::string output_path;
  unsigned threads = 0;

  void validate() const {
    scheme.validate();
    if (sweep != SweepKind::h && nx < TorusGrid::min_cells)
      throw ConfigError("nx must be at least 4");
    if (sweep != SweepKind::none && sweep_values.empty())
      throw ConfigError("sweep_values must not be empty");
    for (double v : sweep_values)
      if (!(v > 0.0)) throw ConfigError("sweep_values must be positive");
    if (sweep == SweepKind::h) {
      if (!dt_rule_coeff || !dt_rule_exp)
        throw ConfigError("h sweeps need dt_rule_coeff and dt_rule_exp");
      if (!(*dt_rule_exp > 0.0)) throw ConfigError("dt_rule_exp must be positive");
      if (!(*dt_rule_coeff > 0.0)) throw ConfigError("dt_rule_coeff must be positive");
    }
    if (reference == Reference::cnoidal && initial != InitialCondition::cnoidal)
      throw ConfigError("the cnoidal reference requires the cnoidal initial condition");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& raw, const std::string& key) {
  const std::string text = trim(raw);
  auto parse_plain = [&](const std::string& t) {
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
      throw ConfigError("'" + key + "': cannot parse number '" + text + "'");
    return v;
  };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const double num = parse_plain(trim(text.substr(0, slash)));
    const double den = parse_plain(trim(text.substr(slash + 1)));
    if (den == 0.0) throw ConfigError("'" + key + "': division by zero");
    return num / den;
  }
  return parse_plain(text);
}

inline std::vector<double> parse_list(const std::string& raw, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_number(item, key));
  return out;
}

}  // namespace detail

inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

inline ExperimentSpec parse_experiment(std::istream& in) {
  auto kv = parse_key_values(in);
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto number = [&](const std::string& key, double fallback) {
    auto v = take(key);
    return v ? detail::parse_number(*v, key) : fallback;
  };

  FluxSpec flux = FluxSpec::kdv();
  const std::string flux_kind = take("flux").value_or("kdv");
  const auto coeffs = take("flux_coeffs");
  if (flux_kind == "kdv") {
    flux = FluxSpec::kdv();
  } else if (flux_kind == "zero") {
    flux = FluxSpec::zero();
  } else if (flux_kind == "polynomial") {
    if (!coeffs) throw ConfigError("flux = polynomial needs flux_coeffs");
    flux = FluxSpec::polynomial(detail::parse_list(*coeffs, "flux_coeffs"));
  } else {
    throw ConfigError("unknown flux '" + flux_kind + "'");
  }
  if (coeffs && flux_kind != "polynomial")
    throw ConfigError("flux_coeffs is only valid with flux = polynomial");

  const std::string lambda_name = take("lambda").value_or("L5");
  if (lambda_name != "L4" && lambda_name != "L5")
    throw ConfigError("unknown lambda '" + lambda_name + "'");

  const std::string interp = take("interp").value_or("hermite");
  if (interp != "hermite" && interp != "spline")
    throw ConfigError("unknown interp '" + interp + "'");

  const double nu = number("nu", 1e-3);
  const double nx = number("nx", 0.0);
  if (nx < 0.0 || nx != std::floor(nx)) throw ConfigError("nx must be a whole number");
  const double fp_max_iter = number("fp_max_iter", 100.0);
  if (fp_max_iter < 1.0 || fp_max_iter != std::floor(fp_max_iter))
    throw ConfigError("fp_max_iter must be a positive whole number");
  const std::string sweep = take("sweep").value_or("none");
  const auto values = take("sweep_values");
  const double t_end = number("t_end", 1.0);
  // Sweeps set dt per row; the template carries a placeholder.
  const auto dt_text = take("dt");
  if (dt_text && sweep != "none") throw ConfigError("dt is only valid with sweep = none");
  const double dt =
      dt_text ? detail::parse_number(*dt_text, "dt") : (sweep == "none" ? 0.0 : std::min(0.5, t_end));

  ExperimentSpec spec{
      SchemeConfig{nu, flux, lambda_name == "L4" ? lambda4() : lambda5(),
                   interp == "spline" ? InterpolationKind::spline
                                      : InterpolationKind::hermite,
                   dt, t_end, number("fp_tol", 1e-13),
                   static_cast<int>(fp_max_iter)},
      static_cast<std::size_t>(nx)};

  if (sweep == "dt") spec.sweep = SweepKind::dt;
  else if (sweep == "h") spec.sweep = SweepKind::h;
  else if (sweep != "none") throw ConfigError("unknown sweep '" + sweep + "'");
  if (values) spec.sweep_values = detail::parse_list(*values, "sweep_values");
  if (auto v = take("dt_rule_coeff")) spec.dt_rule_coeff = detail::parse_number(*v, "dt_rule_coeff");
  if (auto v = take("dt_rule_exp")) spec.dt_rule_exp = detail::parse_number(*v, "dt_rule_exp");

  const std::string initial = take("initial").value_or("cnoidal");
  if (initial == "cnoidal") spec.initial = InitialCondition::cnoidal;
  else if (initial == "sine") spec.initial = InitialCondition::sine;
  else throw ConfigError("unknown initial '" + initial + "'");

  const std::string reference = take("reference").value_or("cnoidal");
  if (reference == "cnoidal") spec.reference = Reference::cnoidal;
  else if (reference == "none") spec.reference = Reference::none;
  else throw ConfigError("unknown reference '" + reference + "'");

  spec.output_path = take("output").value_or("");
  const double threads = number("threads", 0.0);
  if (threads < 0.0 || threads != std::floor(threads))
    throw ConfigError("threads must be a nonnegative whole number");
  spec.threads = static_cast<unsigned>(threads);

  if (!kv.empty()) throw ConfigError("unknown key '" + kv.begin()->first + "'");
  try {
    spec.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

inline ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_experiment(in);
}

}  // namespace dispersl::harness
