#include "heis/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heis/error.hpp"

namespace heis {

namespace {

void require_same_dim(const HeisenbergPoint& x, const HeisenbergPoint& y) {
  if (x.dim() != y.dim()) {
    throw IncompatibleError("Heisenberg points of dimension " + std::to_string(x.dim()) + " and " +
                            std::to_string(y.dim()) + " cannot be combined");
  }
}

}  // namespace

HeisenbergPoint::HeisenbergPoint(std::vector<Complex> z_, double t_) : z(std::move(z_)), t(t_) {
  if (z.empty()) throw DomainError("Heisenberg point needs n >= 1");
  if (!std::isfinite(t)) throw DomainError("Heisenberg point has non-finite t");
  for (const auto& c : z) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("Heisenberg point has non-finite z component");
    }
  }
}

HeisenbergPoint HeisenbergPoint::identity(int n) {
  return HeisenbergPoint(std::vector<Complex>(static_cast<std::size_t>(n)), 0.0);
}

double HeisenbergPoint::z_norm() const noexcept {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return std::sqrt(s);
}

bool operator==(const HeisenbergPoint& a, const HeisenbergPoint& b) {
  return a.t == b.t && a.z == b.z;
}

HeisenbergPoint multiply(const HeisenbergPoint& x, const HeisenbergPoint& y) {
  require_same_dim(x, y);
  HeisenbergPoint out;
  out.z.resize(x.z.size());
  double symplectic = 0.0;
  for (std::size_t i = 0; i < x.z.size(); ++i) {
    out.z[i] = x.z[i] + y.z[i];
    symplectic += (x.z[i] * std::conj(y.z[i])).imag();
  }
  out.t = x.t + y.t + 0.5 * symplectic;
  return out;
}

HeisenbergPoint inverse(const HeisenbergPoint& x) {
  HeisenbergPoint out;
  out.z.reserve(x.z.size());
  for (const auto& c : x.z) out.z.push_back(-c);
  out.t = -x.t;
  return out;
}

double koranyi_norm(const HeisenbergPoint& x) {
  const double r = x.z_norm();
  // sqrt(hypot(r^2, t)) avoids forming r^4 for large |z|.
  return std::sqrt(std::hypot(r * r, x.t));
}

double distance(const HeisenbergPoint& x, const HeisenbergPoint& y) {
  require_same_dim(x, y);
  return koranyi_norm(multiply(inverse(x), y));
}

HeisenbergPoint dilate(double r, const HeisenbergPoint& x) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("dilation factor must be positive");
  HeisenbergPoint out;
  out.z.reserve(x.z.size());
  for (const auto& c : x.z) out.z.push_back(r * c);
  out.t = r * r * x.t;
  return out;
}

HeisenbergCoords to_heisenberg_coords(const HeisenbergPoint& x) {
  HeisenbergCoords c;
  const double r = x.z_norm();
  c.omega.assign(x.z.size(), Complex{});
  if (r > 0.0) {
    for (std::size_t i = 0; i < x.z.size(); ++i) c.omega[i] = x.z[i] / r;
  } else {
    c.omega[0] = 1.0;
  }
  c.rho = koranyi_norm(x);
  if (r == 0.0 && x.t == 0.0) {
    c.theta = std::numbers::pi / 2;
  } else {
    c.theta = std::atan2(r * r, x.t);
  }
  return c;
}

HeisenbergPoint from_heisenberg_coords(const HeisenbergCoords& c) {
  const double radial = c.rho * std::sqrt(std::max(0.0, std::sin(c.theta)));
  HeisenbergPoint out;
  out.z.reserve(c.omega.size());
  for (const auto& w : c.omega) out.z.push_back(radial * w);
  out.t = c.rho * c.rho * std::cos(c.theta);
  return out;
}

Rotation::Rotation(Complex phase) : n_(1), m_{phase} {
  if (std::abs(std::abs(phase) - 1.0) > 1e-10) throw DomainError("rotation phase must have modulus one");
}

Rotation::Rotation(int n, std::vector<Complex> row_major) : n_(n), m_(std::move(row_major)) {
  if (n < 1 || m_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw DomainError("rotation matrix must be n x n");
  }
  // U^* U = I
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex s{};
      for (int k = 0; k < n; ++k) s += std::conj(m_[k * n + i]) * m_[k * n + j];
      const Complex expected = (i == j) ? Complex{1.0} : Complex{};
      if (std::abs(s - expected) > 1e-10) throw DomainError("rotation matrix is not unitary");
    }
  }
}

std::vector<Complex> Rotation::apply(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n_) throw IncompatibleError("rotation dimension mismatch");
  std::vector<Complex> out(z.size());
  for (int i = 0; i < n_; ++i) {
    Complex s{};
    for (int k = 0; k < n_; ++k) s += m_[i * n_ + k] * z[k];
    out[i] = s;
  }
  return out;
}

HeisenbergPoint Rotation::apply(const HeisenbergPoint& x) const {
  HeisenbergPoint out;
  out.z = apply(std::span<const Complex>(x.z));
  out.t = x.t;
  return out;
}

PointFunction lift_theta_independent(ConfigurationFunction g) {
  return [g = std::move(g)](const HeisenbergPoint& x) {
    const HeisenbergCoords c = to_heisenberg_coords(x);
    std::vector<Complex> w(c.omega.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = c.rho * c.omega[i];
    return g(w);
  };
}

}  // namespace heis
