#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace heis {

// Declared behavior of int_1^inf Theta(t) / t dt.
enum class IntegrabilityClass { convergent, divergent };

std::string to_string(IntegrabilityClass c);
IntegrabilityClass integrability_from_string(const std::string& s);

// An even decay profile, nonincreasing on [0, inf). Evenness comes from
// evaluating at |y|. Monotonicity is enforced by a running minimum over a
// fixed sampling grid on [0, 1e8], combined with the raw value at |y|.
class ThetaProfile {
 public:
  ThetaProfile(std::string name, IntegrabilityClass declared, std::function<double(double)> raw);

  double operator()(double y) const;

  const std::string& name() const noexcept { return name_; }
  IntegrabilityClass declared_class() const noexcept { return declared_; }

  // Builtins: "inv-sqrt" (1+|y|)^-1/2, "inv-log" 1/log(e+|y|), "inv-log-sq" 1/log(e+|y|)^2,
  // "zero", and "hyp-inv-sqrt" 2 min(1, |y|^-1/2), the profile meeting
  // Theta(y) >= 2 |y|^-1/2 for |y| >= 1 with equality.
  static ThetaProfile builtin(const std::string& name);
  static std::vector<std::string> builtin_names();

  // Piecewise linear through (y, Theta) pairs (sorted by y >= 0 on input),
  // log-log extrapolation past the last pair, constant before the first.
  static ThetaProfile table(std::string name, IntegrabilityClass declared,
                            std::vector<std::pair<double, double>> points);

  // {name, kind: builtin name or "table", declared_class, points: [[y, Theta], ...]}
  static ThetaProfile from_json(const std::string& text);

 private:
  std::string name_;
  IntegrabilityClass declared_;
  std::function<double(double)> raw_;
  std::vector<double> grid_;
  std::vector<double> prefix_min_;
};

// int_1^T Theta(t) / t dt at T = 1e8. Informational only: the convergence of
// the improper integral cannot be decided from samples.
double advisory_log_integral(const ThetaProfile& theta, double T = 1e8);

}  // namespace heis
