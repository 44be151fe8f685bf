#include "heis/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "heis/error.hpp"
#include "heis/quadrature.hpp"

namespace heis {

namespace {

std::vector<double> sampling_grid() {
  std::vector<double> g{0.0};
  // 100 points per decade on [1e-6, 1e8]
  for (int i = 0; i <= 1400; ++i) g.push_back(std::pow(10.0, -6.0 + i / 100.0));
  return g;
}

}  // namespace

std::string to_string(IntegrabilityClass c) {
  return c == IntegrabilityClass::convergent ? "convergent" : "divergent";
}

IntegrabilityClass integrability_from_string(const std::string& s) {
  if (s == "convergent") return IntegrabilityClass::convergent;
  if (s == "divergent") return IntegrabilityClass::divergent;
  throw DomainError("declared_class must be 'convergent' or 'divergent', got '" + s + "'");
}

ThetaProfile::ThetaProfile(std::string name, IntegrabilityClass declared, std::function<double(double)> raw)
    : name_(std::move(name)), declared_(declared), raw_(std::move(raw)), grid_(sampling_grid()) {
  prefix_min_.resize(grid_.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double v = raw_(grid_[i]);
    if (!std::isfinite(v) || v < 0.0) throw DomainError("decay profile '" + name_ + "' must be finite and >= 0");
    m = std::min(m, v);
    prefix_min_[i] = m;
  }
}

double ThetaProfile::operator()(double y) const {
  const double a = std::abs(y);
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), a);
  const double v = raw_(a);
  if (it == grid_.begin()) return v;
  return std::min(v, prefix_min_[static_cast<std::size_t>(it - grid_.begin()) - 1]);
}

ThetaProfile ThetaProfile::builtin(const std::string& name) {
  using C = IntegrabilityClass;
  if (name == "inv-sqrt") return {name, C::convergent, [](double y) { return 1.0 / std::sqrt(1.0 + y); }};
  if (name == "inv-log") return {name, C::divergent, [](double y) { return 1.0 / std::log(std::numbers::e + y); }};
  if (name == "inv-log-sq") {
    return {name, C::convergent, [](double y) {
              const double l = std::log(std::numbers::e + y);
              return 1.0 / (l * l);
            }};
  }
  if (name == "zero") return {name, C::convergent, [](double) { return 0.0; }};
  if (name == "hyp-inv-sqrt") {
    return {name, C::convergent, [](double y) { return y <= 1.0 ? 2.0 : 2.0 / std::sqrt(y); }};
  }
  throw DomainError("unknown decay profile '" + name + "'");
}

std::vector<std::string> ThetaProfile::builtin_names() {
  return {"inv-sqrt", "inv-log", "inv-log-sq", "zero", "hyp-inv-sqrt"};
}

ThetaProfile ThetaProfile::table(std::string name, IntegrabilityClass declared,
                                 std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw DomainError("decay profile table needs at least two points");
  std::sort(points.begin(), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first < 0.0 || !std::isfinite(points[i].first) || !(points[i].second >= 0.0) ||
        !std::isfinite(points[i].second)) {
      throw DomainError("decay profile table entries must be finite with y >= 0 and Theta >= 0");
    }
    if (i > 0 && points[i].first == points[i - 1].first) throw DomainError("decay profile table has duplicate y");
  }
  auto raw = [pts = std::move(points)](double y) {
    if (y <= pts.front().first) return pts.front().second;
    if (y >= pts.back().first) {
      const auto& [y0, t0] = pts[pts.size() - 2];
      const auto& [y1, t1] = pts.back();
      if (t1 == 0.0) return 0.0;
      if (y0 <= 0.0 || t0 <= 0.0) return t1;
      const double slope = std::min(0.0, std::log(t1 / t0) / std::log(y1 / y0));
      return t1 * std::pow(y / y1, slope);
    }
    const auto it = std::upper_bound(pts.begin(), pts.end(), y,
                                     [](double v, const std::pair<double, double>& p) { return v < p.first; });
    const auto& [y1, t1] = *it;
    const auto& [y0, t0] = *(it - 1);
    return t0 + (t1 - t0) * (y - y0) / (y1 - y0);
  };
  return {std::move(name), declared, std::move(raw)};
}

ThetaProfile ThetaProfile::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "table") {
    auto p = builtin(kind);
    if (j.contains("declared_class")) p.declared_ = integrability_from_string(j.at("declared_class").get<std::string>());
    if (j.contains("name")) p.name_ = j.at("name").get<std::string>();
    return p;
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : j.at("points")) pts.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
  return table(j.value("name", std::string("table")),
               integrability_from_string(j.at("declared_class").get<std::string>()), std::move(pts));
}

double advisory_log_integral(const ThetaProfile& theta, double T) {
  // t = e^x: int_0^log T Theta(e^x) dx
  const GaussLegendre rule(32);
  const double top = std::log(T);
  double s = 0.0;
  for (const auto& p : uniform_panels(0.0, top, static_cast<int>(std::ceil(top)) * 2)) {
    s += rule.integrate([&](double x) { return theta(std::exp(x)); }, p.a, p.b);
  }
  return s;
}

}  // namespace heis
