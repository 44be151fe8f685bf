#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace heis {

// Nodes lambda > 0 with plain d(lambda) weights. The |lambda|^n factor of the
// Plancherel measure is applied where it is used, so the same grid serves
// every dimension.
struct QuadratureGrid {
  std::vector<double> lambdas;  // ascending, > 0
  std::vector<double> weights;  // > 0
  int k_max = 256;
  int radial_nodes = 64;  // Gauss-Legendre nodes per radial panel

  // Trapezoid rule in log(lambda) on [lo, hi]: `count` equispaced nodes in log scale.
  static QuadratureGrid log_trapezoid(double lo, double hi, int count, int k_max, int radial_nodes = 64);
  // Gauss-Legendre in log(lambda): `panels` equal log panels with `nodes` each.
  static QuadratureGrid log_gauss(double lo, double hi, int panels, int nodes, int k_max, int radial_nodes = 64);
  // Gauss-Legendre in lambda itself on consecutive panels [edges[i], edges[i+1]].
  static QuadratureGrid gauss(std::span<const double> edges, int nodes, int k_max, int radial_nodes = 64);
  // Nodes only, for pointwise comparisons; the weights are unit.
  static QuadratureGrid points(std::vector<double> lambdas, int k_max, int radial_nodes = 64);
  // The default grid: [1e-3, 1e3], 256 nodes, k_max = 256.
  static QuadratureGrid standard();

  std::size_t size() const noexcept { return lambdas.size(); }
  double lambda_min() const { return lambdas.front(); }
  double lambda_max() const { return lambdas.back(); }
  void validate() const;
};

bool operator==(const QuadratureGrid& a, const QuadratureGrid& b);

// How the positive-lambda samples stand for the whole real line.
//   even:      R_k(-lambda) = R_k(lambda) (functions even in t)
//   one_sided: R_k(lambda) = 0 for lambda < 0
enum class LambdaSymmetry { even, one_sided };

std::string to_string(LambdaSymmetry s);
LambdaSymmetry lambda_symmetry_from_string(const std::string& s);

// Laguerre coefficients R_k(lambda) on a grid, stored row-major in k.
struct SpectralCoefficients {
  int n = 1;
  QuadratureGrid grid;
  LambdaSymmetry symmetry = LambdaSymmetry::even;
  // The data vanish outside the grid (beyond lambda range and k_max), so
  // moments need no tail check.
  bool compact_spectrum = false;
  std::vector<double> values;

  SpectralCoefficients() = default;
  SpectralCoefficients(int n, QuadratureGrid grid, LambdaSymmetry symmetry = LambdaSymmetry::even);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(grid.k_max) + 1; }
  std::size_t cols() const noexcept { return grid.size(); }
  double& at(int k, std::size_t j) { return values[static_cast<std::size_t>(k) * cols() + j]; }
  double at(int k, std::size_t j) const { return values[static_cast<std::size_t>(k) * cols() + j]; }

  // Fills R_k(lambda_j) = f(k, lambda_j).
  template <class F>
  static SpectralCoefficients tabulate(int n, const QuadratureGrid& grid, F&& f,
                                       LambdaSymmetry symmetry = LambdaSymmetry::even) {
    SpectralCoefficients c(n, grid, symmetry);
    for (int k = 0; k <= grid.k_max; ++k)
      for (std::size_t j = 0; j < grid.size(); ++j) c.at(k, j) = f(k, grid.lambdas[j]);
    return c;
  }
};

// A radial function through its partial Fourier transform in t:
// f^lambda(r) = value(lambda, r). Either the support in |z| is finite, or the
// caller declares a Gaussian decay rate alpha(lambda) with |f^lambda(r)| <~ e^(-alpha r^2).
struct RadialFunction {
  int n = 1;
  std::function<double(double lambda, double r)> value;
  double support_radius = std::numeric_limits<double>::infinity();
  std::function<double(double lambda)> gaussian_rate;
  // Radii where the profile has kinks or jumps; radial panels are split there.
  std::vector<double> breaks;

  // f^lambda(r) = t_hat(lambda) * profile(r)
  static RadialFunction separable(int n, std::function<double(double)> t_hat,
                                  std::function<double(double)> profile, double support_radius);
  static RadialFunction separable_gaussian(int n, std::function<double(double)> t_hat,
                                           std::function<double(double)> profile, double alpha);
};

// F o delta_r, i.e. (z, t) -> F(r z, r^2 t), for a separable-or-not radial function.
RadialFunction dilate_function(const RadialFunction& f, double r);

struct ForwardOptions {
  int threads = 1;
  // Compare against a run on bisected radial panels and throw QuadratureError
  // when |difference| exceeds rel_tol times the column scale ||f^lambda||_1.
  bool refine_check = true;
  double rel_tol = 1e-9;
};

// R_k(lambda) = (2 pi^n / Gamma(n)) C_{k,n}^2 int_0^inf f^lambda(r) phi_{k,lambda}^{n-1}(r) r^(2n-1) dr
SpectralCoefficients forward_radial(const RadialFunction& f, const QuadratureGrid& grid,
                                    const ForwardOptions& options = {},
                                    LambdaSymmetry symmetry = LambdaSymmetry::even);

// One coefficient column with the same radial panels forward_radial uses.
std::vector<double> forward_radial_column(const RadialFunction& f, double lambda, int k_max,
                                          int radial_nodes = 64, bool refine_check = true,
                                          double rel_tol = 1e-9);

// ||P_k(lambda)||_HS^2 = (k+n-1)! / (k! (n-1)!)
double projection_hs_norm_sq(int k, int n);

// ( (2 pi)^-(n+1) int sum_k R_k^2 ||P_k||^2 |lambda|^n d lambda )^(1/2)
double plancherel_norm(const SpectralCoefficients& c);

using Multiplier = std::function<double(int k, double lambda)>;

// Entrywise R_k(lambda) * m(k, lambda); throws NonFiniteError naming the cell.
SpectralCoefficients apply_multiplier(const SpectralCoefficients& c, const Multiplier& m);
// Applies the multipliers one after another per entry, in order; bit-identical
// to nested apply_multiplier calls.
SpectralCoefficients apply_multipliers(const SpectralCoefficients& c, std::span<const Multiplier> ms);

// Common multipliers, H(lambda) acting as (2k+n)|lambda| on the k-th eigenspace.
Multiplier sublaplacian_multiplier(int n, int power = 1);
Multiplier heat_multiplier(int n, double a);

// Entrywise product: the radial convolution theorem.
SpectralCoefficients multiply_coeffs(const SpectralCoefficients& a, const SpectralCoefficients& b);

// R_k(lambda) -> r^-(2n+2) R_k(lambda / r^2), linear in log(lambda).
SpectralCoefficients dilate_coeffs(const SpectralCoefficients& c, double r);

// Plancherel norm after the multiplier (1 + (2k+n)|lambda|)^(s/2).
double sobolev_norm(const SpectralCoefficients& c, double s);

// Columnar CSV "k,lambda,R" plus a JSON header carrying the grid; together
// they round-trip bit-exactly.
std::string coefficients_csv(const SpectralCoefficients& c);
std::string coefficients_header_json(const SpectralCoefficients& c);
SpectralCoefficients coefficients_from_text(const std::string& header_json, const std::string& csv);

}  // namespace heis
