#pragma once

#include <functional>
#include <vector>

#include "heis/group.hpp"
#include "heis/ingham.hpp"

namespace heis {

// f(z, t) = z_profile(|z|) t_profile(t) for |z| <= z_radius and |t| <= t_radius,
// zero outside. Profiles must be smooth on their supports.
struct SeparableProfile {
  std::function<double(double)> z_profile;
  double z_radius = 0.0;
  std::function<double(double)> t_profile;
  double t_radius = 0.0;

  double operator()(const HeisenbergPoint& x) const;
  // integral over H^1
  double mass(int nodes = 32) const;

  static SeparableProfile box(double z_radius, double t_radius, double height = 1.0);
};

// F_j = f_j(z) g_j(t) of the chain on H^1.
SeparableProfile box_factor(const SequencePlan& plan, int j);

// (f * g)(x) = int f(x y^-1) g(y) dy on H^1 by tensor Gauss-Legendre. In the frame
// w = (p + iq) z/|z| the twist Im(z conj w)/2 = -|z| q / 2 depends on q alone,
// so the p and s integrals factor for each q; q is split at every point where
// either inner interval changes shape. Throws IncompatibleError for n != 1.
double direct_convolution_oracle(const SeparableProfile& f, const SeparableProfile& g, const HeisenbergPoint& x,
                                 int nodes = 24);

// Koranyi radius containing supp f.
double koranyi_support(const SeparableProfile& f);

// Samples of h = f * g on H^1 with quadrature weights for int_0^inf int_0^inf dt dr.
// h is radial in z and even in t. The r axis is split at |Rf - Rg| and ends at
// Rf + Rg; each r node gets t panels cut at every kink of h(r, .), with a cosine
// grading that absorbs square-root edges.
struct ConvolutionSamples {
  std::vector<double> r;
  std::vector<double> t;
  std::vector<double> w;
  std::vector<double> h;
  std::size_t size() const noexcept { return h.size(); }
};

ConvolutionSamples sample_convolution(const SeparableProfile& f, const SeparableProfile& g, int r_nodes = 12,
                                      int t_nodes = 7, int oracle_nodes = 16, int threads = 1);

// R_k(lambda, h) for k = 0..k_max from the samples (n = 1).
std::vector<double> sampled_forward(const ConvolutionSamples& s, double lambda, int k_max);

struct ConvolutionCheck {
  std::size_t samples = 0;
  double worst = 0.0;  // max |sampled - product| / (1 + |product|)
  int worst_k = 0;
  double worst_lambda = 0.0;
  double max_abs_product = 0.0;
};

// Compares sampled_forward(F_1 * F_2) with the product of the factor coefficients.
ConvolutionCheck convolution_theorem_check(const SequencePlan& plan, int k_max, const std::vector<double>& lambdas,
                                           int threads = 1);

}  // namespace heis
