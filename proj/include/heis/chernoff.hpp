#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heis/spectral.hpp"
#include "heis/theta.hpp"

namespace heis {

// ||L^m f||_2 for m = 0..M with the Carleman terms ||L^m f||_2^(-1/(2m)), m >= 1.
// Norms are carried as logs; -inf marks a zero norm.
struct NormGrowthProfile {
  std::vector<double> log_norms;
  std::vector<double> carleman_terms;  // index m - 1; +inf for a zero norm
  std::vector<double> partial_sums;

  int max_power() const noexcept { return static_cast<int>(log_norms.size()) - 1; }
  double norm(int m) const;
};

// Tail dominance: unless the coefficients declare a compact spectrum, the share of
// ||L^m f||^2 carried by the last lambda column or by row k_max must stay below
// tail_tol; otherwise TailError names the smallest failing m.
NormGrowthProfile sublaplacian_norms(const SpectralCoefficients& c, int M, double tail_tol = 1e-4);

struct CarlemanSums {
  bool degenerate = false;  // f = 0: nothing to sum
  std::vector<double> terms;
  std::vector<double> partial_sums;
  // with ||f||_2 scaled to 1
  std::vector<double> normalized_terms;
  std::vector<double> normalized_partial_sums;
};

CarlemanSums carleman_partial_sums(const NormGrowthProfile& profile);

// sum_{k>=0} (2k+n)^-2 as a partial sum with integral tail bounds.
struct KSum {
  double partial = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};
KSum k_sum_prefactor(int n, int terms = 1000000);

struct GammaBoundRow {
  int m = 0;
  double log_I = 0.0;      // log int_0^inf lambda^(2m+n) exp(-Theta(sqrt lambda) sqrt lambda) d lambda
  double log_first = 0.0;  // log 2 m^(8(n+1)) Gamma(4m) Theta(m^4)^(-4m)
  double log_second = 0.0; // log 4 e^(-m^2) Gamma(8m + 4(n+1))
  double ratio = 0.0;      // I / (first + second)
  double second_over_first = 0.0;
};

struct GammaBoundReport {
  std::string theta;
  int n = 1;
  KSum k_sum;
  std::vector<GammaBoundRow> rows;
  bool pass = false;  // every ratio <= 1
};

// Requires Theta(y) >= 2 y^(-1/2) for y >= 1 (sampled on [1, 1e8]); a violation
// is a RefusalError naming the sample. 1 <= M <= 12.
GammaBoundReport ingham_norm_bound_check(const ThetaProfile& theta, int n, int M);

// log of the integral in GammaBoundRow::log_I.
double log_moment_integral(const ThetaProfile& theta, int n, int m);

struct TransferRow {
  int index = 0;
  double m_term = 0.0;  // M_n^(-1/n)
  double k_term = 0.0;  // K_n^(-1/n)
  double lower = 0.0;   // min((2a M_n)^(-1/n), (2 b^n)^(-1/n))
  double m_partial = 0.0;
  double k_partial = 0.0;
};

// Inputs as logs so that sequences like n^n stay representable. Throws
// DomainError naming the first index where 0 <= K_n <= a M_n + b^n fails.
std::vector<TransferRow> sequence_transfer_check(const std::function<double(int)>& log_M, double a, double b,
                                                 const std::function<double(int)>& log_K, int terms);

// Rows {m, norm, carleman_term, partial_sum, bound_ratio}; bound_ratio is null
// where no gamma-bound row exists.
std::string to_json(const NormGrowthProfile& profile, const GammaBoundReport* bounds = nullptr);
std::string to_csv(const NormGrowthProfile& profile, const GammaBoundReport* bounds = nullptr);

}  // namespace heis
