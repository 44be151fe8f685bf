#include "heis/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "heis/error.hpp"

namespace heis {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  nodes_.resize(n);
  weights_.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

void GaussLegendre::map(double a, double b, std::vector<double>& x, std::vector<double>& w) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    x.push_back(mid + half * nodes_[i]);
    w.push_back(half * weights_[i]);
  }
}

PanelRule composite(const GaussLegendre& rule, std::span<const Panel> panels) {
  PanelRule out;
  out.x.reserve(panels.size() * rule.size());
  out.w.reserve(panels.size() * rule.size());
  for (const auto& p : panels) rule.map(p.a, p.b, out.x, out.w);
  return out;
}

std::vector<Panel> uniform_panels(double a, double b, int count) {
  std::vector<Panel> out;
  if (count < 1 || !(b > a)) return out;
  out.reserve(count);
  const double h = (b - a) / count;
  for (int i = 0; i < count; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == count) ? b : a + (i + 1) * h;
    out.push_back({lo, hi});
  }
  return out;
}

std::vector<Panel> bisect(std::span<const Panel> panels) {
  std::vector<Panel> out;
  out.reserve(2 * panels.size());
  for (const auto& p : panels) {
    const double mid = 0.5 * (p.a + p.b);
    out.push_back({p.a, mid});
    out.push_back({mid, p.b});
  }
  return out;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace heis
