#include <doctest.h>

#include <cmath>
#include <random>

#include "heis/error.hpp"
#include "heis/laguerre.hpp"
#include "heis/quadrature.hpp"

using namespace heis;

namespace {

double direct_std(int k, double delta, double r) {
  const double c = std::exp(0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + delta + 1.0)));
  return c * laguerre_poly(k, delta, r) * std::exp(-0.5 * r) * std::pow(r, 0.5 * delta);
}

double binomial(int k, int n) { return std::exp(log_multiplicity(k, n)); }

}  // namespace

TEST_CASE("laguerre polynomial recurrence") {
  CHECK(laguerre_poly(0, 0.7, 3.0) == 1.0);
  CHECK(laguerre_poly(1, 0.7, 3.0) == doctest::Approx(1.7 - 3.0));
  CHECK(laguerre_poly(2, 0.0, 1.0) == doctest::Approx(-0.5));
  // L_3^1(r) = (24 - 36 r + 12 r^2 - r^3) / 6 ... at r = 2: (24 - 72 + 48 - 8) / 6
  CHECK(laguerre_poly(3, 1.0, 2.0) == doctest::Approx(-8.0 / 6.0));
  CHECK_THROWS_AS(laguerre_poly(1, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(laguerre_poly(-1, 0.0, 0.5), DomainError);
}

TEST_CASE("orthonormal laguerre functions: closed forms") {
  for (double r : {0.0, 0.3, 1.0, 7.5, 40.0}) CHECK(std_laguerre_fn(0, 0.0, r) == doctest::Approx(std::exp(-0.5 * r)));
  for (int k : {0, 3, 17}) {
    CHECK(std_laguerre_fn(k, 1.0, 0.0) == 0.0);
    CHECK(std_laguerre_fn(k, 2.5, 0.0) == 0.0);
  }
  CHECK_THROWS_AS(std_laguerre_fn(2, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(std_laguerre_fn(2, -1.5, 1.0), DomainError);

  // integral of (L_0^0)^2 = e^-r over (0, inf)
  const GaussLegendre gl(32);
  const auto q = composite(gl, uniform_panels(0.0, 80.0, 40));
  double s = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(std_laguerre_fn(0, 0.0, q.x[i]), 2);
  CHECK(std::abs(s - 1.0) <= 1e-10);
}

TEST_CASE("stable path agrees with the direct formula where the latter is usable") {
  double worst = 0.0;
  for (double delta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    for (int k = 0; k <= 25; ++k) {
      for (int i = 1; i <= 200; ++i) {
        const double r = 0.25 * i;
        const double a = std_laguerre_fn(k, delta, r);
        const double b = direct_std(k, delta, r);
        // relative to the local amplitude: zeros of L_k make pointwise ratios meaningless
        const double scale = std::max(std::abs(b), 1e-3 * std::exp(-0.5 * std::max(0.0, r - 4.0 * k - 2.0 * delta - 2.0)));
        worst = std::max(worst, std::abs(a - b) / scale);
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("orthonormality over k, m <= 40") {
  for (double delta : {0.0, 1.0, 2.0, 3.0}) {
    CAPTURE(delta);
    CHECK(orthonormality_defect(40, delta) <= 1e-8);
  }
}

TEST_CASE("no overflow at large degree and argument") {
  for (double delta : {0.0, 1.0, 2.0}) {
    for (double r : {1e-3, 1.0, 1e3, 4e4, 1e5, 1e6}) {
      const double v = std_laguerre_fn(10000, delta, r);
      CHECK(std::isfinite(v));
      CHECK(std::abs(v) <= 1.0);
    }
  }
  // deep in the classically forbidden zone the value underflows cleanly
  CHECK(std_laguerre_fn(100, 0.0, 1e6) == 0.0);
}

TEST_CASE("scaled laguerre functions") {
  for (double lambda : {0.5, -2.0, 10.0}) {
    CHECK(laguerre_fn(0, lambda, 1, 0.0) == 1.0);
    CHECK(laguerre_fn(0, lambda, 1, 1.7) == doctest::Approx(std::exp(-std::abs(lambda) * 1.7 * 1.7 / 4)));
  }
  for (int n : {1, 2, 3}) {
    for (int k : {0, 1, 5, 40}) {
      CHECK(laguerre_fn(k, 3.0, n, 0.0) == doctest::Approx(binomial(k, n)).epsilon(1e-12));
      CHECK(normalized_laguerre_fn(k, 3.0, n, 0.0) ==
            doctest::Approx(1.0 / laguerre_norm_constant(k, n)).epsilon(1e-12));
    }
  }
  CHECK(std::abs(laguerre_fn(1, 2.0, 1, 1.0)) <= 1e-15);
  CHECK(laguerre_fn(7, 0.3, 1, 2.2) == normalized_laguerre_fn(7, 0.3, 1, 2.2));
  CHECK_THROWS_AS(laguerre_fn(1, 0.0, 1, 1.0), DomainError);
  CHECK_THROWS_AS(laguerre_fn(1, 1.0, 0, 1.0), DomainError);

  // against the raw polynomial at moderate degree
  for (int n : {1, 2, 3}) {
    for (int k : {0, 4, 20}) {
      for (double r : {0.1, 0.9, 2.5}) {
        const double lam = 1.7;
        const double u = 0.5 * lam * r * r;
        const double ref = laguerre_poly(k, n - 1.0, u) * std::exp(-0.5 * u);
        CHECK(laguerre_fn(k, lam, n, r) == doctest::Approx(ref).epsilon(1e-10).scale(binomial(k, n)));
      }
    }
  }
}

TEST_CASE("normalized functions respect the trivial bound") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    for (int k = 0; k <= 200; k += 3) {
      for (int trial = 0; trial < 60; ++trial) {
        const double lambda = std::pow(10.0, -2.0 + 4.0 * ur(rng));
        const double r = 3.0 * ur(rng) * std::sqrt((4.0 * k + 2.0 * n) / lambda);
        const double v = normalized_laguerre_fn(k, lambda, n, r) * laguerre_norm_constant(k, n);
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("sequence matches pointwise evaluation") {
  std::vector<double> seq(61);
  laguerre_sequence(2.0, 13.7, seq);
  for (int k = 0; k <= 60; ++k) CHECK(seq[k] == normalized_laguerre_fn(k, 2.0, 3, std::sqrt(13.7)));
  std::vector<double> empty;
  CHECK_NOTHROW(laguerre_sequence(0.0, 1.0, empty));
  CHECK_THROWS_AS(laguerre_sequence(0.0, -1.0, seq), DomainError);
}

TEST_CASE("multiplicity and norm constant") {
  CHECK(laguerre_norm_constant(5, 1) == doctest::Approx(1.0));
  CHECK(std::exp(log_multiplicity(4, 2)) == doctest::Approx(5.0));
  CHECK(std::exp(log_multiplicity(3, 3)) == doctest::Approx(10.0));
  CHECK(laguerre_norm_constant(0, 7) == doctest::Approx(1.0));
}

TEST_CASE("envelope regions and values") {
  const auto b = envelope_breakpoints(0, 1.0, 1);
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(b[2] == doctest::Approx(std::sqrt(6.0)));

  const double C = 1.7;
  const double g = 0.05;
  const auto core = bound_envelope(0, 1.0, 1, 0.5, C, g);
  CHECK(core.region == EnvelopeRegion::core);
  CHECK(core.value == doctest::Approx(C));
  const auto ex = bound_envelope(0, 1.0, 1, 3.0, C, g);
  CHECK(ex.region == EnvelopeRegion::exponential);
  CHECK(ex.value == doctest::Approx(C * std::exp(-g * 4.5)));
  CHECK(bound_envelope(0, 1.0, 1, 1.2, C, g).region == EnvelopeRegion::oscillatory);
  CHECK(bound_envelope(0, 1.0, 1, 2.0, C, g).region == EnvelopeRegion::turning);

  // r = 0 gives the core limit C (nu/2)^((n-1)/2)
  const auto zero = bound_envelope(10, 2.0, 3, 0.0, C, g);
  CHECK(zero.region == EnvelopeRegion::core);
  CHECK(zero.value == doctest::Approx(C * 23.0));

  for (int k : {0, 7, 150}) {
    for (double lam : {0.01, 3.0}) {
      const auto bp = envelope_breakpoints(k, lam, 2);
      CHECK(bp[0] < bp[1]);
      CHECK(bp[1] < bp[2]);
    }
  }
  CHECK_THROWS_AS(envelope_breakpoints(1, 0.0, 1), DomainError);
  CHECK(to_string(EnvelopeRegion::turning) == "turning");
}

TEST_CASE("envelope calibration on a small grid validates itself") {
  EnvelopeGrid grid;
  grid.k_max = 30;
  grid.lambdas = {0.1, 10.0};
  grid.radii = 80;
  const auto cal = calibrate_envelope(grid);
  CHECK(cal.constants.C_fit > 0.0);
  CHECK(cal.constants.gamma_fit > 0.0);
  CHECK(cal.grid_hash == grid.hash());
  const auto chk = check_envelope(grid, cal.constants);
  CHECK(chk.points == grid.point_count());
  CHECK(chk.violations == 0);
  for (auto count : chk.per_region) CHECK(count > 0);

  EnvelopeGrid other = grid;
  other.radii = 81;
  CHECK(other.hash() != grid.hash());
}
