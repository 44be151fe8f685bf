#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace heis {

// Raw Laguerre polynomial L_k^delta(r) by the three-term recurrence. Overflows
// for large k; only meant for small degrees and as a reference.
double laguerre_poly(int k, double delta, double r);

// Orthonormal Laguerre function on (0, inf):
//   (k! / Gamma(k + delta + 1))^(1/2) L_k^delta(r) e^(-r/2) r^(delta/2).
double std_laguerre_fn(int k, double delta, double r);

// max_{k,m <= k_max} |<L_k^delta, L_m^delta> - delta_km| for the orthonormal
// functions above, by composite Gauss-Legendre on a truncated half-line.
double orthonormality_defect(int k_max, double delta);

// phi_{k,lambda}^{n-1}(r) = L_k^{n-1}(|lambda| r^2 / 2) e^(-|lambda| r^2 / 4)
double laguerre_fn(int k, double lambda, int n, double r);

// C_{k,n} phi_{k,lambda}^{n-1}(r), bounded in modulus by 1 / C_{k,n}.
double normalized_laguerre_fn(int k, double lambda, int n, double r);

// C_{k,n} = (k! (n-1)! / (k+n-1)!)^(1/2), via log-gamma.
double laguerre_norm_constant(int k, int n);

// log of (k + n - 1)! / (k! (n - 1)!), the multiplicity of the k-th eigenspace.
double log_multiplicity(int k, int n);

// Writes ell_k(u) = C L_k^delta(u) e^(-u/2) * exp(log_extra) for k = 0..out.size()-1,
// where C = (k! Gamma(delta+1) / Gamma(k+delta+1))^(1/2). The recurrence runs on
// the normalized polynomials with periodic rescaling, so neither the polynomial
// nor the exponential is formed on its own and nothing overflows.
void laguerre_sequence(double delta, double u, std::span<double> out, double log_extra = 0.0);

enum class EnvelopeRegion { core, oscillatory, turning, exponential };

std::string to_string(EnvelopeRegion region);

struct EnvelopeBound {
  EnvelopeRegion region = EnvelopeRegion::core;
  std::array<double, 3> breakpoints{};
  double value = 0.0;
};

struct EnvelopeConstants {
  double C_fit = 0.0;
  double gamma_fit = 0.0;
};

// Radii separating the four regimes of the scaled Laguerre function.
std::array<double, 3> envelope_breakpoints(int k, double lambda, int n);

// Piecewise envelope for C_{k,n} |phi_{k,lambda}^{n-1}(r)|. At r = 0 the core
// bound is returned in its r -> 0 limit.
EnvelopeBound bound_envelope(int k, double lambda, int n, double r, double C_fit, double gamma_fit);

// The sampling grid used both to calibrate and to validate the envelope constants.
struct EnvelopeGrid {
  std::vector<int> dims{1, 2, 3};
  int k_max = 200;
  std::vector<double> lambdas{0.01, 0.1, 1.0, 10.0, 100.0};
  int radii = 400;
  // radii are log-spaced on [lo * b1, hi * b3]
  double lo = 0.25;
  double hi = 2.0;

  std::vector<double> radii_for(int k, double lambda, int n) const;
  std::string describe() const;
  std::string hash() const;
  std::size_t point_count() const;
};

struct EnvelopeCalibration {
  EnvelopeConstants constants;
  double max_ratio_inner = 0.0;  // core/oscillatory/turning regions, before safety factor
  double gamma_limit = 0.0;      // largest gamma keeping the exponential region under max_ratio_inner
  std::string grid_hash;
};

EnvelopeCalibration calibrate_envelope(const EnvelopeGrid& grid, double safety = 1.1);

struct EnvelopeCheck {
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max over the grid of value / envelope
  int worst_k = 0;
  int worst_n = 0;
  double worst_lambda = 0.0;
  double worst_r = 0.0;
  std::array<std::size_t, 4> per_region{};
};

EnvelopeCheck check_envelope(const EnvelopeGrid& grid, const EnvelopeConstants& constants);

}  // namespace heis
