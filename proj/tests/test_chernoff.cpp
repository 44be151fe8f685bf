#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heis/chernoff.hpp"
#include "heis/error.hpp"

using namespace heis;

namespace {

constexpr double kPi = std::numbers::pi;

// R_k = 1_{k=0} on lambda in [1, 2]
SpectralCoefficients unit_box() {
  const double edges[] = {1.0, 2.0};
  auto c = SpectralCoefficients::tabulate(1, QuadratureGrid::gauss(edges, 32, 4),
                                          [](int k, double) { return k == 0 ? 1.0 : 0.0; }, LambdaSymmetry::one_sided);
  c.compact_spectrum = true;
  return c;
}

// Gamma(a, x) for integer a
double upper_gamma(int a, double x) {
  double term = 1.0, s = 1.0;
  for (int k = 1; k < a; ++k) s += term *= x / k;
  return std::tgamma(a) * std::exp(-x) * s;
}

}  // namespace

TEST_CASE("norm growth of the compact-spectrum box") {
  const auto p = sublaplacian_norms(unit_box(), 20);
  for (int m = 0; m <= 20; ++m) {
    const double expected = (std::pow(2.0, 2 * m + 2) - 1.0) / (2.0 * m + 2.0) / (4.0 * kPi * kPi);
    CHECK(p.norm(m) * p.norm(m) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(p.norm(0) == doctest::Approx(plancherel_norm(unit_box())).epsilon(1e-14));
  // log-convexity in m
  for (int m = 1; m < 20; ++m) CHECK(p.log_norms[m + 1] - 2.0 * p.log_norms[m] + p.log_norms[m - 1] >= -1e-9);
  // terms approach 2^(-1/2) from above, slowly
  CHECK(p.carleman_terms[19] == doctest::Approx(0.76236).epsilon(1e-4));
  CHECK(p.carleman_terms[19] > 1.0 / std::sqrt(2.0));
  CHECK(p.partial_sums[11] > 5.0);
}

TEST_CASE("Carleman sums") {
  const auto sums = carleman_partial_sums(sublaplacian_norms(unit_box(), 30));
  CHECK_FALSE(sums.degenerate);
  for (std::size_t m = 1; m < sums.normalized_terms.size(); ++m) {
    CHECK(sums.normalized_terms[m] <= sums.normalized_terms[m - 1]);
    CHECK(sums.partial_sums[m] >= sums.partial_sums[m - 1]);
  }
  auto zero = unit_box();
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  const auto p0 = sublaplacian_norms(zero, 3);
  CHECK(std::isinf(p0.carleman_terms[0]));
  CHECK(carleman_partial_sums(p0).degenerate);
}

TEST_CASE("heat coefficients converge; slowly decaying data is refused") {
  auto g = QuadratureGrid::standard();
  const auto heat = SpectralCoefficients::tabulate(1, g, [](int k, double lam) { return std::exp(-(2 * k + 1) * lam); });
  const auto p = sublaplacian_norms(heat, 6);
  for (int m = 0; m <= 6; ++m) CHECK(std::isfinite(p.log_norms[m]));
  const auto flat = SpectralCoefficients::tabulate(1, g, [](int, double lam) { return 1.0 / (1.0 + lam); });
  try {
    sublaplacian_norms(flat, 4);
    FAIL("expected TailError");
  } catch (const TailError& e) {
    CHECK(e.first_failing_power() == 0);
  }
}

TEST_CASE("k-sum prefactor") {
  const auto s = k_sum_prefactor(1);
  CHECK(s.lower <= kPi * kPi / 8.0);
  CHECK(s.upper >= kPi * kPi / 8.0);
  CHECK(s.upper - s.lower < 1e-12);
}

TEST_CASE("gamma-integral chain for the hypothesis profile") {
  const auto th = ThetaProfile::builtin("hyp-inv-sqrt");
  // closed form: lambda = s^2 below 1, lambda = x^4 above
  for (int m : {1, 4, 10}) {
    const int q = 2 * m + 1;
    const double below = 2.0 * (std::tgamma(2 * q + 2) - upper_gamma(2 * q + 2, 2.0)) / std::pow(2.0, 2 * q + 2);
    const double above = 4.0 * upper_gamma(4 * q + 4, 2.0) / std::pow(2.0, 4 * q + 4);
    CHECK(log_moment_integral(th, 1, m) == doctest::Approx(std::log(below + above)).epsilon(1e-12));
  }
  const auto r = ingham_norm_bound_check(th, 1, 12);
  CHECK(r.pass);
  REQUIRE(r.rows.size() == 12);
  for (const auto& row : r.rows) CHECK(row.ratio <= 1.0);
  for (int m = 7; m <= 12; ++m) CHECK(r.rows[m - 1].second_over_first < r.rows[m - 2].second_over_first);
  CHECK(r.rows[11].second_over_first < 1e-3);

  CHECK_THROWS_AS(ingham_norm_bound_check(ThetaProfile::builtin("inv-sqrt"), 1, 4), RefusalError);
  CHECK_THROWS_AS(ingham_norm_bound_check(th, 1, 13), DomainError);
}

TEST_CASE("sequence transfer") {
  const auto logM = [](int i) { return i * std::log(static_cast<double>(i)); };
  // log(n^n + 2^n)
  const auto logK = [&](int i) {
    const double a = logM(i), b = i * std::log(2.0);
    return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
  };
  const auto rows = sequence_transfer_check(logM, 1.0, 2.0, logK, 200);
  for (const auto& r : rows) {
    CHECK(r.k_term >= r.lower * (1.0 - 1e-12));
    CHECK(r.m_term == doctest::Approx(1.0 / r.index));
  }
  CHECK(rows.back().m_partial > 5.0);
  // the gap between the two sums settles: both grow like the harmonic series
  const double gap100 = rows[99].m_partial - rows[99].k_partial;
  CHECK(rows.back().m_partial - rows.back().k_partial == doctest::Approx(gap100).epsilon(1e-3));

  const auto same = sequence_transfer_check(logM, 1.0, 1e-9, logM, 20);
  for (const auto& r : same) CHECK(r.k_term == r.m_term);

  const auto scaled = sequence_transfer_check([&](int i) { return std::log(3.0) + logM(i); }, 1.0, 1.0, logM, 200);
  // termwise factor 3^(-1/n) -> 1
  CHECK(scaled.back().m_term / scaled.back().k_term == doctest::Approx(std::pow(3.0, -1.0 / 200)).epsilon(1e-12));
  CHECK(scaled.back().m_term / scaled.back().k_term > 0.99);
  CHECK_THROWS_AS(sequence_transfer_check(logM, 1.0, 1.0, [&](int i) { return logM(i) + (i == 7 ? 5.0 : 0.0); }, 20),
                  DomainError);
}

TEST_CASE("report rows") {
  const auto p = sublaplacian_norms(unit_box(), 3);
  const auto json = to_json(p);
  CHECK(json.find("\"carleman_term\"") != std::string::npos);
  CHECK(to_csv(p).rfind("m,norm,carleman_term,partial_sum,bound_ratio\n0,", 0) == 0);
}
