#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heis/error.hpp"
#include "heis/spectral.hpp"

using namespace heis;

namespace {

constexpr double kPi = std::numbers::pi;

// R_k for e^(-alpha r^2) on H^1 with unit t-factor.
double gaussian_coeff(int k, double lambda, double alpha) {
  const double l4 = std::abs(lambda) / 4.0;
  return kPi / (alpha + l4) * std::pow((alpha - l4) / (alpha + l4), k);
}

SpectralCoefficients box_spectrum(int k_max, double lambda_lo, double lambda_hi) {
  const double edges[] = {1.0, 2.0};
  auto g = QuadratureGrid::gauss(edges, 32, k_max);
  auto c = SpectralCoefficients::tabulate(1, g, [&](int k, double lam) {
    return (k == 0 && lam >= lambda_lo && lam <= lambda_hi) ? 1.0 : 0.0;
  }, LambdaSymmetry::one_sided);
  c.compact_spectrum = true;
  return c;
}

}  // namespace

TEST_CASE("grids") {
  const auto g = QuadratureGrid::standard();
  CHECK(g.size() == 256);
  CHECK(g.k_max == 256);
  CHECK(g.lambda_min() == 1e-3);
  CHECK(g.lambda_max() == 1e3);
  // int lambda d lambda on [1e-3, 1e3] by the log-trapezoid weights
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += g.weights[j] * g.lambdas[j];
  CHECK(s == doctest::Approx(0.5 * (1e6 - 1e-6)).epsilon(1e-3));

  const auto lg = QuadratureGrid::log_gauss(1e-2, 1e2, 8, 16, 10);
  double t = 0.0;
  for (std::size_t j = 0; j < lg.size(); ++j) t += lg.weights[j] / lg.lambdas[j];
  CHECK(t == doctest::Approx(std::log(1e4)).epsilon(1e-13));

  CHECK_THROWS_AS(QuadratureGrid::log_trapezoid(0.0, 1.0, 10, 4), DomainError);
  CHECK_THROWS_AS(QuadratureGrid::log_trapezoid(1.0, 2.0, 10, 0), DomainError);
  CHECK_THROWS_AS(QuadratureGrid::points({2.0, 1.0}, 3), DomainError);
}

TEST_CASE("projection norms") {
  for (int k : {0, 1, 7, 100}) CHECK(projection_hs_norm_sq(k, 1) == 1.0);
  for (int k : {0, 1, 7, 100}) CHECK(projection_hs_norm_sq(k, 2) == doctest::Approx(k + 1.0));
  for (int n : {1, 2, 5, 30}) CHECK(projection_hs_norm_sq(0, n) == doctest::Approx(1.0));
  CHECK(projection_hs_norm_sq(3, 3) == doctest::Approx(10.0));
}

TEST_CASE("ground state gaussian") {
  // f^lambda(r) = e^(-|lambda| r^2 / 4): R_0 = 2 pi / lambda, the rest vanish
  RadialFunction f;
  f.n = 1;
  f.value = [](double lambda, double r) { return std::exp(-std::abs(lambda) * r * r / 4.0); };
  f.gaussian_rate = [](double lambda) { return std::abs(lambda) / 4.0; };
  const auto g = QuadratureGrid::log_trapezoid(1e-3, 1e3, 41, 64);
  const auto c = forward_radial(f, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double lam = g.lambdas[j];
    CHECK(c.at(0, j) == doctest::Approx(2.0 * kPi / lam).epsilon(1e-12));
    for (int k = 1; k <= g.k_max; ++k) CHECK(std::abs(c.at(k, j)) <= 1e-12 * 2.0 * kPi / lam);
  }
}

TEST_CASE("separable gaussian against its closed form, n = 1") {
  const double alpha = 0.7;
  const auto f = RadialFunction::separable_gaussian(
      1, [](double) { return 1.0; }, [alpha](double r) { return std::exp(-alpha * r * r); }, alpha);
  const auto g = QuadratureGrid::log_trapezoid(1e-2, 1e2, 21, 128);
  const auto c = forward_radial(f, g);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (int k = 0; k <= g.k_max; ++k)
      worst = std::max(worst, std::abs(c.at(k, j) - gaussian_coeff(k, g.lambdas[j], alpha)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("zero function and missing decay declaration") {
  const auto g = QuadratureGrid::log_trapezoid(0.1, 10.0, 5, 8);
  const auto zero = RadialFunction::separable(2, [](double) { return 1.0; }, [](double) { return 0.0; }, 1.0);
  const auto c = forward_radial(zero, g);
  for (double v : c.values) CHECK(v == 0.0);

  RadialFunction unbounded;
  unbounded.n = 1;
  unbounded.value = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(forward_radial(unbounded, g), DomainError);
}

TEST_CASE("grid refinement changes gaussian coefficients by <= 1e-8 relative") {
  const double alpha = 0.3;
  const auto f = RadialFunction::separable_gaussian(
      2, [](double lam) { return std::exp(-lam * lam); }, [alpha](double r) { return std::exp(-alpha * r * r); }, alpha);
  auto g = QuadratureGrid::log_trapezoid(1e-2, 10.0, 9, 64, 32);
  auto g2 = g;
  g2.radial_nodes = 64;
  ForwardOptions opt;
  opt.refine_check = false;
  const auto a = forward_radial(f, g, opt);
  const auto b = forward_radial(f, g2, opt);
  // relative to the column's largest coefficient: the far tail is rounding noise
  for (std::size_t j = 0; j < g.size(); ++j) {
    double top = 0.0;
    for (int k = 0; k <= g.k_max; ++k) top = std::max(top, std::abs(b.at(k, j)));
    for (int k = 0; k <= g.k_max; ++k)
      CHECK(std::abs(a.at(k, j) - b.at(k, j)) <= 1e-8 * std::max(std::abs(b.at(k, j)), 1e-6 * top));
  }
}

TEST_CASE("quadrature failure is reported with its cell") {
  // a profile oscillating far faster than the panels resolve
  const auto f = RadialFunction::separable(1, [](double) { return 1.0; },
                                           [](double r) { return std::cos(4000.0 * r); }, 1.0);
  const auto g = QuadratureGrid::points({0.5}, 4, 16);
  try {
    forward_radial(f, g);
    FAIL("expected a quadrature error");
  } catch (const QuadratureError& e) {
    CHECK(e.lambda() == 0.5);
    CHECK(e.k() >= 0);
    CHECK(e.k() <= 4);
    CHECK(e.discrepancy() > 1e-9);
  }
}

TEST_CASE("forward transform is independent of the thread count") {
  const double alpha = 0.2;
  const auto f = RadialFunction::separable_gaussian(
      1, [](double lam) { return 1.0 / (1.0 + lam * lam); }, [alpha](double r) { return std::exp(-alpha * r * r); }, alpha);
  const auto g = QuadratureGrid::log_trapezoid(1e-2, 1e2, 33, 40);
  ForwardOptions one;
  ForwardOptions many;
  many.threads = 7;
  const auto a = forward_radial(f, g, one);
  const auto b = forward_radial(f, g, many);
  CHECK(a.values == b.values);
}

TEST_CASE("plancherel on the compact box spectrum") {
  const auto c = box_spectrum(4, 1.0, 2.0);
  CHECK(plancherel_norm(c) * plancherel_norm(c) == doctest::Approx(3.0 / (8.0 * kPi * kPi)).epsilon(1e-14));
  SpectralCoefficients z(1, c.grid);
  CHECK(plancherel_norm(z) == 0.0);
}

TEST_CASE("plancherel of a separable gaussian against its spatial norm") {
  // F = e^(-alpha |z|^2) e^(-beta t^2): ||F||^2 = pi / (2 alpha) * sqrt(pi / (2 beta))
  // the k-tail lost at small lambda is about alpha / (k_max sqrt(pi beta / 2)) relative
  const double alpha = 0.05;
  const double beta = 4.0;
  const auto g = QuadratureGrid::log_gauss(1e-6, 40.0, 32, 16, 400);
  const auto c = SpectralCoefficients::tabulate(1, g, [&](int k, double lam) {
    return std::sqrt(kPi / beta) * std::exp(-lam * lam / (4 * beta)) * gaussian_coeff(k, lam, alpha);
  });
  const double spatial = std::sqrt(kPi / (2 * alpha) * std::sqrt(kPi / (2 * beta)));
  CHECK(plancherel_norm(c) == doctest::Approx(spatial).epsilon(1e-4));
}

TEST_CASE("multipliers") {
  const auto g = QuadratureGrid::log_trapezoid(0.1, 10.0, 11, 6);
  const auto heat = SpectralCoefficients::tabulate(2, g, [](int k, double lam) { return std::exp(-(2.0 * k + 2) * lam); });
  const auto same = apply_multiplier(heat, [](int, double) { return 1.0; });
  CHECK(same.values == heat.values);

  const auto L = apply_multiplier(heat, sublaplacian_multiplier(2));
  for (int k = 0; k <= g.k_max; ++k)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double nu = (2.0 * k + 2) * g.lambdas[j];
      CHECK(L.at(k, j) == doctest::Approx(nu * std::exp(-nu)).epsilon(1e-15));
    }

  const Multiplier m1 = heat_multiplier(2, 0.3);
  const Multiplier m2 = heat_multiplier(2, 0.45);
  const Multiplier both[] = {m1, m2};
  CHECK(apply_multiplier(apply_multiplier(heat, m1), m2).values == apply_multipliers(heat, both).values);
  const auto ab = apply_multiplier(heat, heat_multiplier(2, 0.75));
  const auto seq = apply_multiplier(apply_multiplier(heat, m1), m2);
  for (std::size_t i = 0; i < ab.values.size(); ++i) CHECK(seq.values[i] == doctest::Approx(ab.values[i]).epsilon(1e-14));

  try {
    apply_multiplier(heat, [](int k, double lam) { return k == 3 && lam > 5.0 ? INFINITY : 1.0; });
    FAIL("expected non-finite error");
  } catch (const NonFiniteError& e) {
    CHECK(e.k() == 3);
    CHECK(e.lambda() > 5.0);
  }
}

TEST_CASE("coefficient products") {
  const auto g = QuadratureGrid::log_trapezoid(0.1, 10.0, 11, 6);
  const auto h1 = SpectralCoefficients::tabulate(1, g, [](int k, double lam) { return std::exp(-0.2 * (2.0 * k + 1) * lam); });
  const auto h2 = SpectralCoefficients::tabulate(1, g, [](int k, double lam) { return std::exp(-0.5 * (2.0 * k + 1) * lam); });
  const auto h3 = SpectralCoefficients::tabulate(1, g, [](int k, double lam) { return std::exp(-0.7 * (2.0 * k + 1) * lam); });
  const auto ones = SpectralCoefficients::tabulate(1, g, [](int, double) { return 1.0; });
  CHECK(multiply_coeffs(h1, ones).values == h1.values);
  const auto p = multiply_coeffs(h1, h2);
  for (std::size_t i = 0; i < p.values.size(); ++i) CHECK(p.values[i] == doctest::Approx(h3.values[i]).epsilon(1e-14));

  auto other = g;
  other.k_max = 5;
  CHECK_THROWS_AS(multiply_coeffs(h1, SpectralCoefficients(1, other)), IncompatibleError);
  CHECK_THROWS_AS(multiply_coeffs(h1, SpectralCoefficients(2, g)), IncompatibleError);
  CHECK_THROWS_AS(multiply_coeffs(h1, SpectralCoefficients(1, g, LambdaSymmetry::one_sided)), IncompatibleError);
}

TEST_CASE("dilation of coefficients") {
  const double a = 0.3;
  const auto g = QuadratureGrid::log_trapezoid(1e-3, 1e3, 601, 8);
  const auto heat = SpectralCoefficients::tabulate(1, g, heat_multiplier(1, a));
  CHECK(dilate_coeffs(heat, 1.0).values == heat.values);

  for (double r : {0.5, 0.8}) {
    const auto d = dilate_coeffs(heat, r);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double lam = g.lambdas[j];
      if (lam / (r * r) < g.lambda_min()) continue;
      for (int k = 0; k <= g.k_max; ++k) {
        const double exact = std::pow(r, -4.0) * std::exp(-a * (2.0 * k + 1) * lam / (r * r));
        CHECK(std::abs(d.at(k, j) - exact) <= 1e-3 * std::pow(r, -4.0));
      }
    }
  }
  // shrinking pulls in lambda below the grid, where heat coefficients are not small
  CHECK_THROWS_AS(dilate_coeffs(heat, 2.0), DomainError);
}

TEST_CASE("dilation commutes with the sublaplacian up to r^2") {
  const auto g = QuadratureGrid::log_trapezoid(1e-3, 1e3, 1201, 8);
  auto heat = SpectralCoefficients::tabulate(1, g, heat_multiplier(1, 0.01));
  // push the data off the bottom of the grid so the dilation is defined everywhere
  heat = apply_multiplier(heat, [](int, double lam) { return lam < 2e-3 ? 0.0 : std::exp(-1.0 / (lam * 1e3)); });
  const double r = 1.5;
  const auto lhs = apply_multiplier(dilate_coeffs(heat, r), sublaplacian_multiplier(1));
  const auto rhs = dilate_coeffs(apply_multiplier(heat, sublaplacian_multiplier(1)), r);
  for (std::size_t i = 0; i < lhs.values.size(); ++i)
    CHECK(std::abs(lhs.values[i] - r * r * rhs.values[i]) <= 1e-3 * (1.0 + std::abs(lhs.values[i])));
}

TEST_CASE("spatial dilation matches coefficient dilation") {
  const double alpha = 0.5;
  const auto f = RadialFunction::separable_gaussian(
      1, [](double lam) { return std::exp(-lam * lam / 8.0); }, [alpha](double r) { return std::exp(-alpha * r * r); }, alpha);
  const auto g = QuadratureGrid::log_trapezoid(1e-3, 1e2, 1001, 16);
  const auto base = forward_radial(f, g);
  // r < 1 moves lambda / r^2 upwards, where the t-factor has decayed
  const double r = 0.625;
  const auto lhs = forward_radial(dilate_function(f, r), g);
  const auto rhs = dilate_coeffs(base, r);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (int k = 0; k <= g.k_max; ++k)
      worst = std::max(worst, std::abs(lhs.at(k, j) - rhs.at(k, j)) / (1.0 + std::abs(lhs.at(k, j))));
  CHECK(worst <= 1e-3);
}

TEST_CASE("sobolev norms") {
  const auto c = box_spectrum(3, 1.0, 2.0);
  CHECK(sobolev_norm(c, 0.0) == plancherel_norm(c));
  const double s2 = sobolev_norm(c, 2.0);
  CHECK(s2 * s2 == doctest::Approx(119.0 / (48.0 * kPi * kPi)).epsilon(1e-13));
  double prev = 0.0;
  for (double s = -3.0; s <= 3.0; s += 0.5) {
    const double v = sobolev_norm(c, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("csv round trip is bit exact") {
  const double alpha = 0.4;
  const auto f = RadialFunction::separable_gaussian(
      2, [](double lam) { return std::exp(-lam); }, [alpha](double r) { return std::exp(-alpha * r * r); }, alpha);
  const auto g = QuadratureGrid::log_trapezoid(1e-2, 1e1, 7, 5);
  const auto c = forward_radial(f, g);
  const auto back = coefficients_from_text(coefficients_header_json(c), coefficients_csv(c));
  CHECK(back.values == c.values);
  CHECK(back.grid == c.grid);
  CHECK(back.n == 2);
  CHECK(coefficients_csv(back) == coefficients_csv(c));
  CHECK_THROWS(coefficients_from_text(coefficients_header_json(c), "k,lambda,R\n0,1,2\n"));
}
