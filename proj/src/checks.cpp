#include "heis/checks.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include <json.hpp>

#include "heis/chernoff.hpp"
#include "heis/error.hpp"
#include "heis/fixtures.hpp"
#include "heis/ingham.hpp"
#include "heis/laguerre.hpp"
#include "heis/oracle.hpp"
#include "heis/spectral.hpp"

namespace heis {

namespace {

using nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fixtures(const CheckConfig& cfg) {
  return cfg.fixtures_dir.empty() ? default_fixtures_dir() : cfg.fixtures_dir;
}

std::vector<double> log_nodes(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("lambda range needs 0 < min < max and >= 2 nodes");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  out.back() = hi;
  return out;
}

double sinc_half(double tau, double lambda) {
  const double x = 0.5 * tau * tau * lambda;
  return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

SequencePlan frozen_plan(const CheckConfig& cfg, const ThetaProfile& theta, int n, int J) {
  return plan_sequences(theta, n, J, load_cn(fixtures(cfg), n));
}

}  // namespace

ThetaProfile resolve_theta(const std::string& name_or_path) {
  for (const auto& name : ThetaProfile::builtin_names())
    if (name_or_path == name) return ThetaProfile::builtin(name_or_path);
  if (std::filesystem::exists(name_or_path)) return ThetaProfile::from_json(read_text_file(name_or_path));
  throw DomainError("'" + name_or_path + "' is neither a builtin decay profile nor a readable JSON file");
}

CheckResult run_laguerre_check(const CheckConfig& cfg) {
  ordered_json ortho;
  const int ortho_k = 40;
  double worst = 0.0;
  auto defects = ordered_json::array();
  for (int delta = 0; delta <= 3; ++delta) {
    const double d = orthonormality_defect(ortho_k, delta);
    defects.push_back(d);
    worst = std::max(worst, d);
  }
  ortho["k_max"] = ortho_k;
  ortho["deltas"] = {0, 1, 2, 3};
  ortho["defects"] = defects;
  ortho["max_defect"] = worst;
  ortho["tolerance"] = 1e-8;
  ortho["pass"] = worst <= 1e-8;

  EnvelopeGrid grid;
  if (cfg.k_max) grid.k_max = *cfg.k_max;
  if (cfg.n) grid.dims = {*cfg.n};
  if (cfg.lambda_min || cfg.lambda_max || cfg.lambda_nodes) {
    grid.lambdas = log_nodes(cfg.lambda_min.value_or(0.01), cfg.lambda_max.value_or(100.0), cfg.lambda_nodes.value_or(5));
  }
  const auto fx = load_laguerre_envelope(fixtures(cfg));
  const auto chk = check_envelope(grid, fx.constants);
  ordered_json env;
  env["C_fit"] = fx.constants.C_fit;
  env["gamma_fit"] = fx.constants.gamma_fit;
  env["fixture_grid_hash"] = fx.grid_hash;
  env["grid"] = grid.describe();
  env["grid_hash"] = grid.hash();
  env["points"] = chk.points;
  env["violations"] = chk.violations;
  env["worst_ratio"] = chk.worst_ratio;
  env["worst"] = {{"k", chk.worst_k}, {"n", chk.worst_n}, {"lambda", chk.worst_lambda}, {"r", chk.worst_r}};
  env["per_region"] = {{"core", chk.per_region[0]},
                       {"oscillatory", chk.per_region[1]},
                       {"turning", chk.per_region[2]},
                       {"exponential", chk.per_region[3]}};
  env["pass"] = chk.violations == 0;

  ordered_json out;
  out["orthonormality"] = ortho;
  out["envelope"] = env;
  const bool pass = ortho["pass"].get<bool>() && env["pass"].get<bool>();
  out["pass"] = pass;
  return {pass, dump(out), {}};
}

CheckResult run_plancherel_check(const CheckConfig& cfg) {
  ForwardOptions opt;
  opt.threads = cfg.threads;
  auto cases = ordered_json::array();
  bool pass = true;
  const double tol = 1e-4;

  {
    // e^(-alpha |z|^2) e^(-beta t^2); t-factor sqrt(pi/beta) e^(-lambda^2 / (4 beta))
    const double alpha = 0.05, beta = 4.0;
    const int K = cfg.k_max.value_or(400);
    const auto f = RadialFunction::separable_gaussian(
        1, [=](double l) { return std::sqrt(kPi / beta) * std::exp(-l * l / (4.0 * beta)); },
        [=](double r) { return std::exp(-alpha * r * r); }, alpha);
    const auto grid = QuadratureGrid::log_gauss(1e-7, std::sqrt(160.0 * beta), 24, 16, K);
    const double spectral = plancherel_norm(forward_radial(f, grid, opt));
    const double spatial = std::sqrt(kPi / (2.0 * alpha) * std::sqrt(kPi / (2.0 * beta)));
    const double rel = std::abs(spectral - spatial) / spatial;
    pass = pass && rel <= tol;
    cases.push_back({{"name", "gaussian"},
                     {"alpha", alpha},
                     {"beta", beta},
                     {"k_max", K},
                     {"lambda_range", {grid.lambda_min(), grid.lambda_max()}},
                     {"spectral", spectral},
                     {"spatial", spatial},
                     {"rel_error", rel},
                     {"pass", rel <= tol}});
  }
  {
    // rho^-2 chi(|z| <= a rho) tau^-2 chi(|t| <= tau^2 / 2): ||F||_2 = 1 / (rho tau)
    const double rho = 1.0, tau = 0.5;
    const int K = 1600;
    const double a = box_radius_constant(1);
    const auto f = RadialFunction::separable(
        1, [=](double l) { return sinc_half(tau, l); }, [=](double) { return 1.0 / (rho * rho); }, a * rho);
    const auto grid = QuadratureGrid::log_gauss(1e-6, 1e4, 40, 16, K);
    ForwardOptions box_opt = opt;
    box_opt.refine_check = false;
    const double spectral = plancherel_norm(forward_radial(f, grid, box_opt));
    const double spatial = 1.0 / (rho * tau);
    const double rel = std::abs(spectral - spatial) / spatial;
    pass = pass && rel <= tol;
    cases.push_back({{"name", "box"},
                     {"rho", rho},
                     {"tau", tau},
                     {"k_max", K},
                     {"lambda_range", {grid.lambda_min(), grid.lambda_max()}},
                     {"spectral", spectral},
                     {"spatial", spatial},
                     {"rel_error", rel},
                     {"pass", rel <= tol}});
  }
  ordered_json out;
  out["tolerance"] = tol;
  out["cases"] = cases;
  out["pass"] = pass;
  return {pass, dump(out), {}};
}

CheckResult run_convolve_check(const CheckConfig& cfg) {
  const auto theta = resolve_theta(cfg.theta.value_or("inv-sqrt"));
  if (cfg.n.value_or(1) != 1) throw IncompatibleError("convolve-check runs on H^1 only");
  const auto plan = frozen_plan(cfg, theta, 1, 2);
  const int K = cfg.k_max.value_or(32);
  const auto lambdas = log_nodes(cfg.lambda_min.value_or(0.01), cfg.lambda_max.value_or(1.0), cfg.lambda_nodes.value_or(16));
  const auto chk = convolution_theorem_check(plan, K, lambdas, cfg.threads);
  const double tol = 1e-3;
  ordered_json out;
  out["theta"] = theta.name();
  out["k_max"] = K;
  out["lambda_range"] = {lambdas.front(), lambdas.back()};
  out["lambda_nodes"] = lambdas.size();
  out["samples"] = chk.samples;
  out["worst"] = chk.worst;
  out["worst_cell"] = {{"k", chk.worst_k}, {"lambda", chk.worst_lambda}};
  out["max_abs_product"] = chk.max_abs_product;
  out["tolerance"] = tol;
  out["pass"] = chk.worst <= tol;
  return {chk.worst <= tol, dump(out), {}};
}

CheckResult run_dilate_check(const CheckConfig& cfg) {
  const double tol = 1e-3;
  ordered_json out;
  bool pass = true;
  {
    // heat data: exact covariance r^-4 e^(-a (2k+1) lambda / r^2)
    const double a = 0.3;
    const auto g = QuadratureGrid::log_trapezoid(1e-3, 1e3, 601, cfg.k_max.value_or(8));
    const auto heat = SpectralCoefficients::tabulate(1, g, heat_multiplier(1, a));
    auto rows = ordered_json::array();
    for (double r : {0.5, 0.8}) {
      const auto d = dilate_coeffs(heat, r);
      double worst = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (g.lambdas[j] / (r * r) < g.lambda_min()) continue;
        for (int k = 0; k <= g.k_max; ++k) {
          const double exact = std::pow(r, -4.0) * std::exp(-a * (2.0 * k + 1) * g.lambdas[j] / (r * r));
          worst = std::max(worst, std::abs(d.at(k, j) - exact) * std::pow(r, 4.0));
        }
      }
      pass = pass && worst <= tol;
      rows.push_back({{"r", r}, {"worst_scaled_error", worst}});
    }
    out["heat"] = rows;
  }
  {
    // forward(delta_r f) against dilate_coeffs(forward(f)) for a Gaussian
    const double alpha = 0.5, r = 0.625;
    const auto f = RadialFunction::separable_gaussian(
        1, [](double lam) { return std::exp(-lam * lam / 8.0); }, [=](double x) { return std::exp(-alpha * x * x); },
        alpha);
    const auto g = QuadratureGrid::log_trapezoid(1e-3, 1e2, 1001, 16);
    ForwardOptions opt;
    opt.threads = cfg.threads;
    const auto lhs = forward_radial(dilate_function(f, r), g, opt);
    const auto rhs = dilate_coeffs(forward_radial(f, g, opt), r);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      for (int k = 0; k <= g.k_max; ++k)
        worst = std::max(worst, std::abs(lhs.at(k, j) - rhs.at(k, j)) / (1.0 + std::abs(lhs.at(k, j))));
    pass = pass && worst <= tol;
    out["gaussian"] = {{"r", r}, {"worst", worst}};
  }
  {
    // L o delta_r = r^2 delta_r o L
    const auto g = QuadratureGrid::log_trapezoid(1e-3, 1e3, 1201, 8);
    auto heat = SpectralCoefficients::tabulate(1, g, heat_multiplier(1, 0.01));
    heat = apply_multiplier(heat, [](int, double lam) { return lam < 2e-3 ? 0.0 : std::exp(-1.0 / (lam * 1e3)); });
    const double r = 1.5;
    const auto lhs = apply_multiplier(dilate_coeffs(heat, r), sublaplacian_multiplier(1));
    const auto rhs = dilate_coeffs(apply_multiplier(heat, sublaplacian_multiplier(1)), r);
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.values.size(); ++i)
      worst = std::max(worst, std::abs(lhs.values[i] - r * r * rhs.values[i]) / (1.0 + std::abs(lhs.values[i])));
    pass = pass && worst <= tol;
    out["commutation"] = {{"r", r}, {"worst", worst}};
  }
  out["tolerance"] = tol;
  out["pass"] = pass;
  return {pass, dump(out), {}};
}

CheckResult run_ingham_plan(const CheckConfig& cfg) {
  const auto theta = resolve_theta(cfg.theta.value_or("inv-sqrt"));
  const int n = cfg.n.value_or(1);
  const int J = 64;
  const auto plan = frozen_plan(cfg, theta, n, J);
  ordered_json out;
  out["theta"] = theta.name();
  out["declared_class"] = to_string(theta.declared_class());
  out["advisory_log_integral_1e8"] = advisory_log_integral(theta);
  out["n"] = n;
  out["c_n"] = plan.c_n;
  out["a"] = plan.a;
  out["c"] = plan.c;
  out["rho"] = plan.rho;
  out["tau"] = plan.tau;
  double rs = 0.0, ts = 0.0;
  for (int j = 1; j <= J; ++j) {
    rs += plan.rho_at(j);
    ts += plan.tau_at(j);
  }
  out["rho_partial_sum"] = rs;
  out["tau_partial_sum"] = ts;
  out["tau_tail"] = std::ldexp(1.0, -J);
  auto radii = ordered_json::array();
  for (int N = 1; N <= J; ++N) radii.push_back(support_radius(plan, N));
  out["support_radius"] = radii;

  // factor envelope on the calibration axes, with the frozen c_n
  bool pass = true;
  const auto lambdas = log_nodes(1e-3, 1e3, 61);
  const auto rhos = log_nodes(1e-3, 1.0, 31);
  const int K = cfg.k_max.value_or(200);
  const auto chk = check_box_decay(n, plan.c_n, K, lambdas, rhos, 1e-12, cfg.threads);
  pass = pass && chk.envelope_violations == 0 && chk.trivial_violations == 0;
  out["factor_envelope"] = {{"k_max", K},
                            {"lambda_range", {1e-3, 1e3}},
                            {"lambda_nodes", lambdas.size()},
                            {"rho_range", {1e-3, 1.0}},
                            {"rho_nodes", rhos.size()},
                            {"points", chk.points},
                            {"trivial_violations", chk.trivial_violations},
                            {"envelope_violations", chk.envelope_violations},
                            {"max_abs", chk.max_abs},
                            {"worst_envelope_ratio", chk.worst_envelope_ratio}};

  if (n == 1 && theta.name() == "inv-sqrt") {
    // the frozen Cauchy constant belongs to this plan and grid
    const auto cf = load_cauchy(fixtures(cfg));
    const auto grid = QuadratureGrid::log_gauss(1e-4, 1e3, 24, 16, 64);
    const auto gaps = cauchy_gaps(plan, 12, grid, cf.c3, cfg.threads);
    auto rows = ordered_json::array();
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const bool ok = gaps[i].measured <= cf.C * gaps[i].bound;
      pass = pass && ok;
      rows.push_back({{"k", i + 1}, {"measured", gaps[i].measured}, {"bound", gaps[i].bound}, {"ok", ok}});
    }
    out["cauchy"] = {{"C", cf.C}, {"c3", cf.c3}, {"rows", rows}};
  }
  out["pass"] = pass;
  return {pass, dump(out), {}};
}

CheckResult run_ingham_verify(const CheckConfig& cfg) {
  const auto theta = resolve_theta(cfg.theta.value_or("inv-sqrt"));
  if (theta.declared_class() != IntegrabilityClass::convergent) {
    throw RefusalError("decay profile '" + theta.name() + "' is declared divergent; the construction needs a convergent "
                       "int_1^inf Theta(t)/t dt");
  }
  const int n = cfg.n.value_or(1);
  DecayGrid grid;
  grid.k_max = cfg.k_max.value_or(64);
  grid.lambda_min = cfg.lambda_min.value_or(0.01);
  grid.lambda_max = cfg.lambda_max.value_or(100.0);
  grid.lambda_nodes = cfg.lambda_nodes.value_or(64);
  // N <= floor(sqrt((2k+n) lambda)) over the refined grid
  const int J = static_cast<int>(std::sqrt((4.0 * grid.k_max + n) * grid.lambda_max)) + 1;
  const auto plan = frozen_plan(cfg, theta, n, J);
  const auto report = verify_decay(plan, theta, grid, cfg.threads);
  return {report.pass, to_json(report), {}};
}

CheckResult run_carleman(const CheckConfig& cfg) {
  // R_k = 1_{k=0} on lambda in [1, 2]
  const double edges[] = {1.0, 2.0};
  auto c = SpectralCoefficients::tabulate(1, QuadratureGrid::gauss(edges, 32, 4),
                                          [](int k, double) { return k == 0 ? 1.0 : 0.0; }, LambdaSymmetry::one_sided);
  c.compact_spectrum = true;
  const int M = cfg.max_power.value_or(30);
  if (M < 20) throw DomainError("carleman needs --max-power >= 20");
  const auto profile = sublaplacian_norms(c, M);
  const auto sums = carleman_partial_sums(profile);
  const double term20 = profile.carleman_terms[19];
  int first_above_5 = 0;
  for (std::size_t i = 0; i < profile.partial_sums.size() && first_above_5 == 0; ++i)
    if (profile.partial_sums[i] > 5.0) first_above_5 = static_cast<int>(i) + 1;
  bool monotone = true;
  for (std::size_t i = 1; i < sums.normalized_terms.size(); ++i)
    monotone = monotone && sums.normalized_terms[i] <= sums.normalized_terms[i - 1];
  const bool window = term20 >= 0.45 && term20 <= 0.5;
  const bool early = first_above_5 > 0 && first_above_5 <= 12;
  ordered_json out;
  out["example"] = "R_k = 1_{k=0} on lambda in [1, 2], n = 1";
  out["rows"] = nlohmann::ordered_json::parse(to_json(profile));
  out["term_20"] = term20;
  out["term_20_window"] = {0.45, 0.5};
  out["term_20_in_window"] = window;
  out["first_m_partial_sum_above_5"] = first_above_5;
  out["normalized_terms_nonincreasing"] = monotone;
  out["pass"] = window && early && monotone;
  return {window && early && monotone, dump(out), to_csv(profile)};
}

CheckResult run_gamma_bound_check(const CheckConfig& cfg) {
  const auto theta = resolve_theta(cfg.theta.value_or("hyp-inv-sqrt"));
  const int n = cfg.n.value_or(1);
  const int M = cfg.max_power.value_or(10);
  const auto r = ingham_norm_bound_check(theta, n, M);
  ordered_json out;
  out["theta"] = r.theta;
  out["n"] = r.n;
  out["k_sum"] = {{"partial", r.k_sum.partial}, {"lower", r.k_sum.lower}, {"upper", r.k_sum.upper}};
  auto rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"m", row.m},
                    {"log_I", row.log_I},
                    {"log_first", row.log_first},
                    {"log_second", row.log_second},
                    {"bound_ratio", row.ratio},
                    {"second_over_first", row.second_over_first}});
  }
  out["rows"] = rows;
  out["pass"] = r.pass;
  return {r.pass, dump(out), {}};
}

CheckResult run_symmdiff_check(const CheckConfig&) {
  const double Rs[] = {0.5, 1.0, 2.0, 3.5, 5.0};
  const double fractions[] = {0.0, 0.01, 0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 2.5};
  bool pass = true;
  auto dims = ordered_json::array();
  for (int dim : {2, 4}) {
    double worst_ratio = 0.0, worst_lens = 0.0;
    int pairs = 0;
    for (double R : Rs) {
      for (double f : fractions) {
        const double d = f * R;
        const double v = ball_shift_symmdiff(dim, R, d);
        const double cap = d * sphere_surface(dim, R);
        ++pairs;
        if (cap > 0.0) worst_ratio = std::max(worst_ratio, v / cap);
        // rounding slack relative to the ball volume (d = 0 gives 0 <= 0)
        pass = pass && v <= cap + 1e-12 * ball_volume(dim, R);
        if (dim == 2) {
          const double lens = d >= 2.0 * R ? 0.0
                                           : 2.0 * R * R * std::acos(d / (2.0 * R)) -
                                                 0.5 * d * std::sqrt(4.0 * R * R - d * d);
          const double closed = 2.0 * (kPi * R * R - lens);
          worst_lens = std::max(worst_lens, std::abs(v - closed));
        }
      }
    }
    if (dim == 2) pass = pass && worst_lens <= 1e-10;
    ordered_json row{{"dim", dim}, {"pairs", pairs}, {"max_ratio_to_bound", worst_ratio}};
    if (dim == 2) row["max_lens_deviation"] = worst_lens;
    dims.push_back(row);
  }
  ordered_json out;
  out["dims"] = dims;
  out["pass"] = pass;
  return {pass, dump(out), {}};
}

}  // namespace heis
