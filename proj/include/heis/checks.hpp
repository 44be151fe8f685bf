#pragma once

#include <optional>
#include <string>

#include "heis/theta.hpp"

namespace heis {

// Shared settings of the check runners; unset fields fall back to each
// runner's own defaults.
struct CheckConfig {
  std::optional<std::string> theta;  // builtin name or path to a JSON profile
  std::optional<int> n;
  std::optional<int> k_max;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  std::optional<int> lambda_nodes;
  std::optional<int> max_power;
  int threads = 1;
  std::string fixtures_dir;
};

struct CheckResult {
  bool pass = false;
  std::string json;  // deterministic: no timings, no paths
  std::string csv;   // only for row-shaped reports
};

ThetaProfile resolve_theta(const std::string& name_or_path);

// One runner per CLI subcommand.
CheckResult run_laguerre_check(const CheckConfig& cfg);    // orthonormality + envelope
CheckResult run_plancherel_check(const CheckConfig& cfg);  // Gaussian and box round trips on H^1
CheckResult run_convolve_check(const CheckConfig& cfg);    // F_1 * F_2 against the coefficient product
CheckResult run_dilate_check(const CheckConfig& cfg);      // dilation covariance and commutation
CheckResult run_ingham_plan(const CheckConfig& cfg);       // plan, factor envelope, Cauchy gaps
CheckResult run_ingham_verify(const CheckConfig& cfg);     // decay certification
CheckResult run_carleman(const CheckConfig& cfg);          // compact-spectrum norm growth
CheckResult run_gamma_bound_check(const CheckConfig& cfg);
CheckResult run_symmdiff_check(const CheckConfig& cfg);

}  // namespace heis
