#include "heis/ingham.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "heis/error.hpp"
#include "heis/parallel.hpp"

namespace heis {

namespace {

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = i + 1 == count ? hi : (i == 0 ? lo : std::exp(a + (b - a) * i / (count - 1)));
  return out;
}

double sinc_half(double tau, double lambda) {
  const double x = 0.5 * tau * tau * lambda;
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void check_plan_index(const SequencePlan& plan, int j) {
  if (j < 1 || j > plan.length()) {
    throw DomainError("plan index " + std::to_string(j) + " outside 1.." + std::to_string(plan.length()));
  }
}

// int_0^alpha sin^m(theta) d theta
double sin_power_integral(int m, double alpha) {
  const double s = std::sin(alpha);
  const double c = std::cos(alpha);
  double prev = alpha;     // m = 0
  double cur = 1.0 - c;    // m = 1
  if (m == 0) return prev;
  for (int p = 2; p <= m; ++p) {
    const double next = -std::pow(s, p - 1) * c / p + (p - 1.0) / p * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

struct DecayRun {
  double max_log_q = -std::numeric_limits<double>::infinity();
  int argmax_k = 0;
  double argmax_lambda = 0.0;
  int max_N = 0;
};

DecayRun decay_run(const SequencePlan& plan, const ThetaProfile& theta, int k_max,
                   const std::vector<double>& lambdas, int threads) {
  const int n = plan.n;
  const std::size_t K = static_cast<std::size_t>(k_max) + 1;
  const std::size_t L = lambdas.size();
  std::vector<int> Ns(K * L);
  DecayRun run;
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < L; ++i) {
      Ns[k * L + i] = adaptive_N(theta, static_cast<int>(k), lambdas[i], n);
      run.max_N = std::max(run.max_N, Ns[k * L + i]);
    }
  if (run.max_N > plan.length()) {
    throw DomainError("plan has " + std::to_string(plan.length()) + " factors but the grid needs " +
                      std::to_string(run.max_N));
  }
  const std::size_t J = static_cast<std::size_t>(run.max_N);
  // log|g_j-hat| + log|R_k(lambda, f_j)| per (j, lambda, k); -inf marks an exact zero
  std::vector<double> table(J * L * K);
  parallel_for(J * L, threads, [&](std::size_t idx) {
    const std::size_t j = idx / L;
    const std::size_t i = idx % L;
    const int jj = static_cast<int>(j) + 1;
    const double rho = plan.rho_at(jj);
    const double lt = std::log(std::abs(sinc_half(plan.tau_at(jj), lambdas[i])));
    const auto col = box_coefficients(lambdas[i] * rho * rho, n, k_max);
    for (std::size_t k = 0; k < K; ++k) table[(j * L + i) * K + k] = lt + std::log(std::abs(col[k]));
  });
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < L; ++i) {
      const int N = Ns[k * L + i];
      double log_chain = 0.0;
      for (int j = 0; j < N; ++j) log_chain += table[(static_cast<std::size_t>(j) * L + i) * K + k];
      if (std::isinf(log_chain)) continue;  // exact zero: q = 0
      const double s = std::sqrt((2.0 * static_cast<double>(k) + n) * lambdas[i]);
      const double log_q = 2.0 * log_chain + 2.0 * theta(s) * s;
      if (log_q > run.max_log_q) {
        run.max_log_q = log_q;
        run.argmax_k = static_cast<int>(k);
        run.argmax_lambda = lambdas[i];
      }
    }
  }
  return run;
}

}  // namespace

double box_radius_constant(int n) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
  return std::exp((std::lgamma(n + 1.0) - n * std::log(std::numbers::pi)) / (2.0 * n));
}

double box_time_constant() { return std::pow(4.0, -0.25); }

SequencePlan plan_sequences(const ThetaProfile& theta, int n, int J, double c_n) {
  if (theta.declared_class() != IntegrabilityClass::convergent) {
    throw RefusalError("decay profile '" + theta.name() +
                       "' is declared divergent: the compactly supported construction needs "
                       "int_1^inf Theta(t)/t dt < inf");
  }
  if (n < 1 || J < 1) throw DomainError("plan needs n >= 1 and J >= 1");
  if (!(c_n > 0.0)) throw DomainError("plan needs c_n > 0");
  SequencePlan p;
  p.n = n;
  p.theta_name = theta.name();
  p.c_n = c_n;
  p.a = box_radius_constant(n);
  p.c = box_time_constant();
  const double lead = c_n * c_n * std::exp(2.0);
  for (int j = 1; j <= J; ++j) {
    p.rho.push_back(lead * theta(j) / j + std::ldexp(1.0, -j));
    p.tau.push_back(std::ldexp(1.0, -j));
  }
  return p;
}

double factor_t_hat(int j, double lambda, const SequencePlan& plan) {
  check_plan_index(plan, j);
  return sinc_half(plan.tau_at(j), lambda);
}

std::vector<double> box_coefficients(double mu, int n, int k_max) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("box coefficients need mu > 0");
  const double a = box_radius_constant(n);
  RadialFunction unit;
  unit.n = n;
  unit.support_radius = a;
  unit.value = [](double, double) { return 1.0; };
  return forward_radial_column(unit, mu, k_max);
}

double factor_coeff(int j, int k, double lambda, const SequencePlan& plan) {
  check_plan_index(plan, j);
  if (k < 0) throw DomainError("k must be >= 0");
  const double rho = plan.rho_at(j);
  return box_coefficients(std::abs(lambda) * rho * rho, plan.n, k)[static_cast<std::size_t>(k)];
}

double box_decay_envelope(int k, double mu, int n, double c_n) {
  return c_n * std::pow((2.0 * k + n) * mu, -0.5 * (n - 0.5));
}

CnCalibration calibrate_cn(int n, const CnGrid& grid, double safety, int threads) {
  const auto mus = log_spaced(grid.mu_min, grid.mu_max, grid.mu_points);
  struct Best {
    double ratio = 0.0;
    int k = 0;
  };
  std::vector<Best> best(mus.size());
  parallel_for(mus.size(), threads, [&](std::size_t i) {
    const auto col = box_coefficients(mus[i], n, grid.k_max);
    for (int k = 0; k <= grid.k_max; ++k) {
      const double ratio = std::abs(col[k]) * std::pow((2.0 * k + n) * mus[i], 0.5 * (n - 0.5));
      if (ratio > best[i].ratio) best[i] = {ratio, k};
    }
  });
  CnCalibration out;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (best[i].ratio > out.sup_ratio) {
      out.sup_ratio = best[i].ratio;
      out.argmax_k = best[i].k;
      out.argmax_mu = mus[i];
    }
  }
  out.c_n = safety * out.sup_ratio;
  return out;
}

BoxDecayCheck check_box_decay(int n, double c_n, int k_max, const std::vector<double>& lambdas,
                           const std::vector<double>& rhos, double slack, int threads) {
  const std::size_t cells = lambdas.size() * rhos.size();
  std::vector<BoxDecayCheck> part(cells);
  parallel_for(cells, threads, [&](std::size_t idx) {
    const double lambda = lambdas[idx / rhos.size()];
    const double rho = rhos[idx % rhos.size()];
    const double mu = std::abs(lambda) * rho * rho;
    const auto col = box_coefficients(mu, n, k_max);
    auto& c = part[idx];
    for (int k = 0; k <= k_max; ++k) {
      const double v = std::abs(col[k]);
      const double env = box_decay_envelope(k, mu, n, c_n);
      ++c.points;
      if (v > 1.0 + slack) ++c.trivial_violations;
      if (v > std::min(1.0 + slack, env)) ++c.envelope_violations;
      c.max_abs = std::max(c.max_abs, v);
      c.worst_envelope_ratio = std::max(c.worst_envelope_ratio, v / env);
    }
  });
  BoxDecayCheck total;
  for (const auto& c : part) {
    total.points += c.points;
    total.trivial_violations += c.trivial_violations;
    total.envelope_violations += c.envelope_violations;
    total.max_abs = std::max(total.max_abs, c.max_abs);
    total.worst_envelope_ratio = std::max(total.worst_envelope_ratio, c.worst_envelope_ratio);
  }
  return total;
}

int adaptive_N(const ThetaProfile& theta, int k, double lambda, int n) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("adaptive_N needs a finite non-zero lambda");
  if (k < 0 || n < 1) throw DomainError("adaptive_N needs k >= 0 and n >= 1");
  const double s = std::sqrt((2.0 * k + n) * std::abs(lambda));
  const double N = std::floor(theta(s) * s);
  return static_cast<int>(std::min(N, std::floor(s)));
}

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

SignedLog chain_coeff(const SequencePlan& plan, int N, int k, double lambda) {
  if (N < 0) throw DomainError("chain length must be >= 0");
  if (N > plan.length()) throw DomainError("chain length exceeds the plan");
  SignedLog out;
  for (int j = 1; j <= N; ++j) {
    const double v = factor_t_hat(j, lambda, plan) * factor_coeff(j, k, lambda, plan);
    if (v == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    if (v < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(v));
  }
  return out;
}

DecayReport verify_decay(const SequencePlan& plan, const ThetaProfile& theta, const DecayGrid& grid, int threads) {
  if (theta.declared_class() != IntegrabilityClass::convergent) {
    throw RefusalError("decay profile '" + theta.name() + "' is declared divergent");
  }
  if (grid.k_max < 0 || grid.lambda_nodes < 1 || !(grid.lambda_min > 0.0) || !(grid.lambda_max >= grid.lambda_min)) {
    throw DomainError("decay grid needs k_max >= 0, lambda nodes >= 1 and 0 < lambda_min <= lambda_max");
  }
  const auto lambdas = log_spaced(grid.lambda_min, grid.lambda_max, grid.lambda_nodes);
  const auto base = decay_run(plan, theta, grid.k_max, lambdas, threads);
  const auto refined = decay_run(plan, theta, 2 * grid.k_max, lambdas, threads);
  DecayReport r;
  r.theta = theta.name();
  r.n = plan.n;
  r.k_max = grid.k_max;
  r.lambda_min = grid.lambda_min;
  r.lambda_max = grid.lambda_max;
  r.lambda_nodes = grid.lambda_nodes;
  r.max_log_q = base.max_log_q;
  r.argmax_k = base.argmax_k;
  r.argmax_lambda = base.argmax_lambda;
  r.C = std::exp(base.max_log_q);
  r.refined_max_log_q = refined.max_log_q;
  r.max_N = std::max(base.max_N, refined.max_N);
  r.pass = std::isfinite(base.max_log_q) && std::isfinite(refined.max_log_q) &&
           std::abs(refined.max_log_q - base.max_log_q) <= 0.1;
  return r;
}

std::string to_json(const DecayReport& r) {
  nlohmann::ordered_json j;
  j["theta"] = r.theta;
  j["n"] = r.n;
  j["k_max"] = r.k_max;
  j["lambda_range"] = {r.lambda_min, r.lambda_max};
  j["max_log_q"] = r.max_log_q;
  j["argmax"] = {{"k", r.argmax_k}, {"lambda", r.argmax_lambda}};
  j["C"] = r.C;
  j["pass"] = r.pass;
  j["refined_max_log_q"] = r.refined_max_log_q;
  j["lambda_nodes"] = r.lambda_nodes;
  j["max_N"] = r.max_N;
  return j.dump(2) + "\n";
}

double support_radius(const SequencePlan& plan, int N) {
  check_plan_index(plan, N);
  double rs = 0.0;
  double ts = 0.0;
  for (int j = 1; j <= N; ++j) {
    rs += plan.rho_at(j);
    ts += plan.tau_at(j);
  }
  return plan.a * rs + plan.c * ts;
}

double ball_volume(int dim, double R) {
  if (dim < 1 || !(R >= 0.0)) throw DomainError("ball volume needs dim >= 1 and R >= 0");
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0) * std::pow(R, dim);
}

double sphere_surface(int dim, double R) {
  if (dim < 1 || !(R >= 0.0)) throw DomainError("sphere surface needs dim >= 1 and R >= 0");
  return dim * ball_volume(dim, 1.0) * std::pow(R, dim - 1);
}

double ball_shift_symmdiff(int dim, double R, double xi_norm) {
  if (dim < 2 || dim % 2 != 0) throw DomainError("ball_shift_symmdiff needs an even dimension >= 2");
  if (!(R > 0.0) || !(xi_norm >= 0.0) || !std::isfinite(R) || !std::isfinite(xi_norm)) {
    throw DomainError("ball_shift_symmdiff needs R > 0 and |xi| >= 0");
  }
  const double V = ball_volume(dim, R);
  if (xi_norm >= 2.0 * R) return 2.0 * V;
  // the intersection is two caps of height R - |xi|/2, half-angle acos(|xi| / 2R)
  const double alpha = std::acos(xi_norm / (2.0 * R));
  const double cap = ball_volume(dim - 1, 1.0) * std::pow(R, dim) * sin_power_integral(dim, alpha);
  return 2.0 * (V - 2.0 * cap);
}

std::vector<CauchyGap> cauchy_gaps(const SequencePlan& plan, int k_last, const QuadratureGrid& grid, double c3,
                                   int threads) {
  if (k_last < 1) throw DomainError("cauchy_gap needs k >= 1");
  check_plan_index(plan, k_last + 1);
  const std::size_t L = grid.size();
  const std::size_t K = static_cast<std::size_t>(grid.k_max) + 1;
  std::vector<SpectralCoefficients> diffs(static_cast<std::size_t>(k_last),
                                          SpectralCoefficients(plan.n, grid, LambdaSymmetry::even));
  parallel_for(L, threads, [&](std::size_t i) {
    const double lambda = grid.lambdas[i];
    std::vector<double> chain(K, 1.0);  // G_j coefficients, built in increasing j
    for (int j = 1; j <= k_last + 1; ++j) {
      const double t = factor_t_hat(j, lambda, plan);
      const auto col = box_coefficients(lambda * plan.rho_at(j) * plan.rho_at(j), plan.n, grid.k_max);
      for (std::size_t q = 0; q < K; ++q) {
        const double next = chain[q] * (t * col[q]);
        if (j >= 2) diffs[static_cast<std::size_t>(j) - 2].values[q * L + i] = next - chain[q];
        chain[q] = next;
      }
    }
  });
  std::vector<CauchyGap> out;
  for (int k = 1; k <= k_last; ++k) {
    const double tau = plan.tau_at(k + 1);
    out.push_back({tau * tau + c3 * plan.rho_at(k + 1), plancherel_norm(diffs[static_cast<std::size_t>(k) - 1])});
  }
  return out;
}

CauchyGap cauchy_gap(const SequencePlan& plan, int k, const QuadratureGrid& grid, double c3, int threads) {
  return cauchy_gaps(plan, k, grid, c3, threads).back();
}

}  // namespace heis
