#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace heis {

using Complex = std::complex<double>;

// A point (z, t) of the Heisenberg group C^n x R.
struct HeisenbergPoint {
  std::vector<Complex> z;
  double t = 0.0;

  HeisenbergPoint() = default;
  HeisenbergPoint(std::vector<Complex> z_, double t_);

  static HeisenbergPoint identity(int n);

  int dim() const noexcept { return static_cast<int>(z.size()); }
  double z_norm() const noexcept;
};

bool operator==(const HeisenbergPoint& a, const HeisenbergPoint& b);

// (z, t) . (w, s) = (z + w, t + s + Im(z . conj(w)) / 2)
HeisenbergPoint multiply(const HeisenbergPoint& x, const HeisenbergPoint& y);
HeisenbergPoint inverse(const HeisenbergPoint& x);

// (|z|^4 + t^2)^(1/4), homogeneous of degree one under dilate().
double koranyi_norm(const HeisenbergPoint& x);

// Left invariant metric |x^{-1} y|.
double distance(const HeisenbergPoint& x, const HeisenbergPoint& y);

// Non-isotropic dilation (rz, r^2 t). Throws DomainError for r <= 0.
HeisenbergPoint dilate(double r, const HeisenbergPoint& x);

// Heisenberg polar coordinates: z = rho * sqrt(sin theta) * omega, t = rho^2 cos theta.
struct HeisenbergCoords {
  double rho = 0.0;
  std::vector<Complex> omega;
  double theta = 0.0;
};

// At z = 0 the direction is undefined; omega is taken to be e_1 there, and the
// origin maps to (0, e_1, pi/2).
HeisenbergCoords to_heisenberg_coords(const HeisenbergPoint& x);
HeisenbergPoint from_heisenberg_coords(const HeisenbergCoords& c);

// Unitary action on the z variable. For n = 1 this is a phase; otherwise an
// n x n matrix whose unitarity is checked to 1e-10 on construction.
class Rotation {
 public:
  explicit Rotation(Complex phase);
  Rotation(int n, std::vector<Complex> row_major);

  int dim() const noexcept { return n_; }
  HeisenbergPoint apply(const HeisenbergPoint& x) const;
  std::vector<Complex> apply(std::span<const Complex> z) const;

 private:
  int n_;
  std::vector<Complex> m_;
};

using PointFunction = std::function<double(const HeisenbergPoint&)>;
using ConfigurationFunction = std::function<double(std::span<const Complex>)>;

// f(z, t) = g(rho * omega): the unique function that agrees with g on t = 0 and
// does not depend on theta in Heisenberg coordinates.
PointFunction lift_theta_independent(ConfigurationFunction g);

}  // namespace heis
