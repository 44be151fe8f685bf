#pragma once

#include <string>
#include <vector>

#include "heis/spectral.hpp"
#include "heis/theta.hpp"

namespace heis {

// a = (n! / pi^n)^(1/(2n)): the ball B(0, a rho) in C^n has volume rho^(2n), so
// f_j = rho_j^(-2n) chi_B(0, a rho_j) has unit mass.
double box_radius_constant(int n);
// c = 4^(-1/4): points (0, t) with |t| <= tau^2 / 2, the support of the
// t-factor g_j = tau^-2 chi_[-tau^2/2, tau^2/2], have Koranyi norm <= c tau.
double box_time_constant();

// rho_j = c_n^2 e^2 Theta(j) / j + 2^-j and tau_j = 2^-j for j = 1..J.
struct SequencePlan {
  int n = 1;
  std::string theta_name;
  double c_n = 0.0;
  double a = 0.0;
  double c = 0.0;
  std::vector<double> rho;  // rho[j-1] = rho_j
  std::vector<double> tau;

  int length() const noexcept { return static_cast<int>(rho.size()); }
  double rho_at(int j) const { return rho.at(static_cast<std::size_t>(j) - 1); }
  double tau_at(int j) const { return tau.at(static_cast<std::size_t>(j) - 1); }
};

// Throws RefusalError for a profile declared divergent.
SequencePlan plan_sequences(const ThetaProfile& theta, int n, int J, double c_n);

// g_j-hat(lambda) = sin(tau_j^2 lambda / 2) / (tau_j^2 lambda / 2)
double factor_t_hat(int j, double lambda, const SequencePlan& plan);

// R_k(lambda, f_j) for k = 0..k_max. It depends on mu = lambda rho_j^2 only,
// so this takes mu directly.
std::vector<double> box_coefficients(double mu, int n, int k_max);
double factor_coeff(int j, int k, double lambda, const SequencePlan& plan);

// c_n ((2k+n) mu)^(-(n - 1/2)/2): the decay envelope for box factor coefficients.
double box_decay_envelope(int k, double mu, int n, double c_n);

struct CnGrid {
  int k_max = 200;
  double mu_min = 1e-9;  // lambda in [1e-3, 1e3] times rho^2 in [1e-6, 1]
  double mu_max = 1e3;
  int mu_points = 400;
};

struct CnCalibration {
  double c_n = 0.0;
  double sup_ratio = 0.0;  // before the safety factor
  int argmax_k = 0;
  double argmax_mu = 0.0;
};

CnCalibration calibrate_cn(int n, const CnGrid& grid, double safety = 1.1, int threads = 1);

struct BoxDecayCheck {
  std::size_t points = 0;
  std::size_t trivial_violations = 0;   // |R| > 1 + slack
  std::size_t envelope_violations = 0;  // |R| > min(1, envelope)
  double max_abs = 0.0;
  double worst_envelope_ratio = 0.0;
};

// Every (k, lambda, rho) of the given axes; `slack` absorbs rounding in |R| <= 1.
BoxDecayCheck check_box_decay(int n, double c_n, int k_max, const std::vector<double>& lambdas,
                           const std::vector<double>& rhos, double slack = 1e-12, int threads = 1);

// floor(Theta(sqrt(nu)) sqrt(nu)) with nu = (2k+n)|lambda|, clamped to floor(sqrt(nu)).
int adaptive_N(const ThetaProfile& theta, int k, double lambda, int n);

struct SignedLog {
  int sign = 1;  // 0 for an exact zero
  double log_abs = 0.0;
  double value() const;
};

// prod_{j<=N} g_j-hat(lambda) R_k(lambda, f_j), accumulated in log space in increasing j.
SignedLog chain_coeff(const SequencePlan& plan, int N, int k, double lambda);

struct DecayGrid {
  int k_max = 64;
  double lambda_min = 0.01;
  double lambda_max = 100.0;
  int lambda_nodes = 64;
};

struct DecayReport {
  std::string theta;
  int n = 1;
  int k_max = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int lambda_nodes = 0;
  double max_log_q = 0.0;
  int argmax_k = 0;
  double argmax_lambda = 0.0;
  double C = 0.0;
  double refined_max_log_q = 0.0;  // with k_max doubled
  int max_N = 0;
  bool pass = false;
};

// q(k, lambda) = chain_coeff(plan, adaptive_N, k, lambda)^2 exp(2 Theta(sqrt nu) sqrt nu),
// maximized over the grid in log space; pass means finite and moving by at most
// 0.1 in log when k_max doubles.
DecayReport verify_decay(const SequencePlan& plan, const ThetaProfile& theta, const DecayGrid& grid, int threads = 1);
std::string to_json(const DecayReport& report);

// a sum_{j<=N} rho_j + c sum_{j<=N} tau_j
double support_radius(const SequencePlan& plan, int N);

double ball_volume(int dim, double R);
double sphere_surface(int dim, double R);
// |B(0,R) symmetric-difference (B(0,R) + xi)| in R^dim for |xi| = xi_norm, dim even.
double ball_shift_symmdiff(int dim, double R, double xi_norm);

struct CauchyGap {
  double bound = 0.0;     // tau_{k+1}^2 + c3 rho_{k+1}
  double measured = 0.0;  // Plancherel norm of the coefficients of G_{k+1} - G_k
};

// Gaps for k = 1..k_last in one pass.
std::vector<CauchyGap> cauchy_gaps(const SequencePlan& plan, int k_last, const QuadratureGrid& grid, double c3,
                                   int threads = 1);
CauchyGap cauchy_gap(const SequencePlan& plan, int k, const QuadratureGrid& grid, double c3, int threads = 1);

}  // namespace heis
