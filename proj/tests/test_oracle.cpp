#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heis/error.hpp"
#include "heis/oracle.hpp"

using namespace heis;

namespace {

constexpr double kPi = std::numbers::pi;

SequencePlan plan() { return plan_sequences(ThetaProfile::builtin("inv-sqrt"), 1, 8, 1.371854952); }

HeisenbergPoint point(double x, double y, double t) { return HeisenbergPoint({Complex(x, y)}, t); }

}  // namespace

TEST_CASE("box factors have unit mass") {
  const auto p = plan();
  for (int j = 1; j <= 4; ++j) CHECK(box_factor(p, j).mass() == doctest::Approx(1.0).epsilon(1e-13));
  const auto F = box_factor(p, 1);
  CHECK(F(point(0.1, 0.2, 0.0)) == doctest::Approx(1.0 / (p.rho_at(1) * p.rho_at(1) * 0.25)));
  CHECK(F(point(0.0, 0.0, 0.2)) == 0.0);
  CHECK(koranyi_support(F) <= p.a * p.rho_at(1) + p.c * p.tau_at(1));
}

TEST_CASE("oracle: mass normalization and the identity point") {
  const auto p = plan();
  const auto g = box_factor(p, 2);
  const auto flat = SeparableProfile::box(50.0, 100.0, 3.0);
  for (const auto& x : {point(0.0, 0.0, 0.0), point(1.0, -2.0, 0.5), point(-3.0, 0.5, -4.0)}) {
    CHECK(direct_convolution_oracle(flat, g, x) == doctest::Approx(3.0).epsilon(1e-12));
  }
  // x = 0: int f(y^-1) g(y) dy = |B(0, Rm)| * 2 min(T) * heights
  const auto f = box_factor(p, 1);
  const double expected = kPi * g.z_radius * g.z_radius * 2.0 * g.t_radius * f.z_profile(0) * f.t_profile(0) *
                          g.z_profile(0) * g.t_profile(0);
  CHECK(direct_convolution_oracle(f, g, point(0.0, 0.0, 0.0)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(direct_convolution_oracle(f, g, HeisenbergPoint::identity(2)), IncompatibleError);
}

TEST_CASE("oracle agrees with brute-force sampling") {
  const auto f = SeparableProfile{[](double r) { return 1.0 - r * r; }, 1.0, [](double t) { return std::cos(t); }, 1.0};
  const auto g = SeparableProfile::box(0.7, 0.4);
  const auto x = point(0.6, 0.3, 0.2);
  const double v = direct_convolution_oracle(f, g, x);
  CHECK(direct_convolution_oracle(f, g, x, 40) == doctest::Approx(v).epsilon(1e-9));
  // midpoint rule over the support of g, in (Re w, Im w, s)
  const int m = 120;
  double s = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const auto y = point(-0.7 + 1.4 * (a + 0.5) / m, -0.7 + 1.4 * (b + 0.5) / m, -0.4 + 0.8 * (c + 0.5) / m);
        s += f(multiply(x, inverse(y))) * g(y);
      }
  s *= 1.4 * 1.4 * 0.8 / (static_cast<double>(m) * m * m);
  CHECK(v == doctest::Approx(s).epsilon(2e-3));
}

TEST_CASE("oracle vanishes outside the support radius of the chain") {
  const auto p = plan();
  const auto f = box_factor(p, 1);
  const auto g = box_factor(p, 2);
  const double R = support_radius(p, 2);
  for (double shell : {1.0001, 1.01, 1.1, 1.5}) {
    for (int i = 0; i < 24; ++i) {
      const double th = kPi * (i + 0.5) / 24.0;  // Heisenberg polar angle
      HeisenbergCoords c;
      c.rho = shell * R;
      c.omega = {Complex(std::cos(0.3 * i), std::sin(0.3 * i))};
      c.theta = th;
      const auto x = from_heisenberg_coords(c);
      CHECK(direct_convolution_oracle(f, g, x) == 0.0);
    }
  }
  // and is positive well inside
  CHECK(direct_convolution_oracle(f, g, point(0.5 * f.z_radius, 0.0, 0.1)) > 0.0);
}

TEST_CASE("sampled transform of the convolution") {
  const auto p = plan();
  const auto s = sample_convolution(box_factor(p, 1), box_factor(p, 2));
  CHECK(s.size() > 900);
  CHECK(s.size() < 1100);
  // total mass of F_1 * F_2 is 1
  CHECK(sampled_forward(s, 1e-9, 0)[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sampled_forward(s, 0.3, 4) == sampled_forward(sample_convolution(box_factor(p, 1), box_factor(p, 2), 12, 7, 16, 3), 0.3, 4));

  std::vector<double> lambdas;
  for (int j = 0; j < 16; ++j) lambdas.push_back(0.01 * std::pow(100.0, j / 15.0));
  const auto chk = convolution_theorem_check(p, 32, lambdas);
  CHECK(chk.worst <= 1e-3);
  CHECK(chk.worst == doctest::Approx(2.44e-4).epsilon(0.02));
  CHECK(chk.max_abs_product > 0.5);
}
