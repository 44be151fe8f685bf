#pragma once

#include <span>
#include <vector>

namespace heis {

// Gauss-Legendre rule on [-1, 1], nodes ascending.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  // Appends the nodes and weights mapped affinely onto [a, b].
  void map(double a, double b, std::vector<double>& x, std::vector<double>& w) const;

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
    return s * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
};

// Composite rule: the same Gauss-Legendre rule on each panel.
struct PanelRule {
  std::vector<double> x;
  std::vector<double> w;
};

PanelRule composite(const GaussLegendre& rule, std::span<const Panel> panels);

// Splits [a, b] into `count` equal panels.
std::vector<Panel> uniform_panels(double a, double b, int count);

// Splits every panel in two; used for refinement checks.
std::vector<Panel> bisect(std::span<const Panel> panels);

// Sum with a fixed binary tree over index ranges. The result depends only on
// the input order, so it is reproducible under any partitioning of work that
// hands whole ranges to this function.
double pairwise_sum(std::span<const double> v);

}  // namespace heis
