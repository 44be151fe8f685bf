#include "heis/laguerre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "heis/error.hpp"
#include "heis/quadrature.hpp"
#include "heis/text.hpp"

namespace heis {

namespace {

constexpr double kRescaleAt = 1e150;
constexpr double kRescaleBy = 1e-150;
const double kLogRescale = 150.0 * std::log(10.0);

void check_degree(int k) {
  if (k < 0) throw DomainError("Laguerre degree must be non-negative");
}

void check_dim(int n) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
}

double ell(int k, double delta, double u, double log_extra) {
  std::vector<double> buf(static_cast<std::size_t>(k) + 1);
  laguerre_sequence(delta, u, buf, log_extra);
  return buf.back();
}

// Envelope without the constant C; `gamma` only matters in the exponential region.
struct Shape {
  EnvelopeRegion region;
  double value;
};

Shape envelope_shape(int k, int n, double u, double gamma) {
  const double nu = 2.0 * (2.0 * k + n);
  if (u < 1.0 / nu) return {EnvelopeRegion::core, std::pow(0.5 * nu, 0.5 * (n - 1))};
  // (r sqrt|lambda|)^-(n-1) with r sqrt|lambda| = sqrt(2u)
  const double pre = std::pow(2.0 * u, -0.5 * (n - 1));
  if (u < 0.5 * nu) return {EnvelopeRegion::oscillatory, pre * std::pow(nu * u, -0.25)};
  if (u < 1.5 * nu) {
    return {EnvelopeRegion::turning,
            pre * std::pow(nu, -0.25) * std::pow(std::cbrt(nu) + std::abs(nu - u), -0.25)};
  }
  return {EnvelopeRegion::exponential, pre * std::exp(-gamma * u)};
}

}  // namespace

double laguerre_poly(int k, double delta, double r) {
  check_degree(k);
  if (!(delta > -1.0)) throw DomainError("Laguerre order must exceed -1");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 1.0 + delta - r;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + delta - r) * cur - (j + delta) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void laguerre_sequence(double delta, double u, std::span<double> out, double log_extra) {
  if (out.empty()) return;
  if (!(delta > -1.0)) throw DomainError("Laguerre order must exceed -1");
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("Laguerre argument must be finite and >= 0");

  double scale = 0.0;  // true value = p * exp(scale)
  double factor = std::exp(-0.5 * u + log_extra);
  double prev = 1.0;
  out[0] = prev * factor;
  if (out.size() == 1) return;
  double cur = (1.0 + delta - u) / std::sqrt(1.0 + delta);
  out[1] = cur * factor;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    const double next = ((2.0 * kd + 1.0 + delta - u) * cur - std::sqrt(kd * (kd + delta)) * prev) /
                        std::sqrt((kd + 1.0) * (kd + delta + 1.0));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAt) {
      cur *= kRescaleBy;
      prev *= kRescaleBy;
      scale += kLogRescale;
      factor = std::exp(scale - 0.5 * u + log_extra);
    }
    out[k + 1] = cur * factor;
  }
}

double std_laguerre_fn(int k, double delta, double r) {
  check_degree(k);
  if (!(delta > -1.0)) throw DomainError("Laguerre order must exceed -1");
  if (!(r >= 0.0)) throw DomainError("Laguerre function is defined for r >= 0");
  double log_extra = -0.5 * std::lgamma(delta + 1.0);
  if (delta != 0.0) {
    if (r == 0.0) return delta > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    log_extra += 0.5 * delta * std::log(r);
  }
  return ell(k, delta, r, log_extra);
}

double orthonormality_defect(int k_max, double delta) {
  check_degree(k_max);
  if (!(delta > -1.0)) throw DomainError("Laguerre order must exceed -1");
  // e^-r r^(delta + 2 k_max) is below 1e-30 of its peak well before this point
  const double upper = 4.0 * k_max + 2.0 * delta + 2.0 + 40.0 * std::sqrt(k_max + delta + 2.0) + 80.0;
  const GaussLegendre rule(32);
  const auto panels = uniform_panels(0.0, upper, static_cast<int>(std::ceil(upper / 2.0)));
  const auto q = composite(rule, panels);
  const std::size_t K = static_cast<std::size_t>(k_max) + 1;
  std::vector<double> values(q.x.size() * K);
  const double norm = -0.5 * std::lgamma(delta + 1.0);
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    const double log_extra = norm + (delta != 0.0 ? 0.5 * delta * std::log(q.x[i]) : 0.0);
    laguerre_sequence(delta, q.x[i], std::span<double>(values.data() + i * K, K), log_extra);
  }
  double worst = 0.0;
  std::vector<double> terms(q.x.size());
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t m = k; m < K; ++m) {
      for (std::size_t i = 0; i < q.x.size(); ++i) terms[i] = q.w[i] * values[i * K + k] * values[i * K + m];
      const double ip = pairwise_sum(terms);
      worst = std::max(worst, std::abs(ip - (k == m ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double log_multiplicity(int k, int n) {
  check_degree(k);
  check_dim(n);
  return std::lgamma(k + n) - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(n));
}

double laguerre_norm_constant(int k, int n) { return std::exp(-0.5 * log_multiplicity(k, n)); }

double normalized_laguerre_fn(int k, double lambda, int n, double r) {
  check_degree(k);
  check_dim(n);
  if (!std::isfinite(lambda) || !std::isfinite(r)) throw DomainError("non-finite argument");
  if (lambda == 0.0) throw DomainError("scaled Laguerre function needs lambda != 0");
  if (r < 0.0) throw DomainError("radius must be >= 0");
  return ell(k, n - 1.0, 0.5 * std::abs(lambda) * r * r, 0.0);
}

double laguerre_fn(int k, double lambda, int n, double r) {
  return normalized_laguerre_fn(k, lambda, n, r) / laguerre_norm_constant(k, n);
}

std::string to_string(EnvelopeRegion region) {
  switch (region) {
    case EnvelopeRegion::core: return "core";
    case EnvelopeRegion::oscillatory: return "oscillatory";
    case EnvelopeRegion::turning: return "turning";
    case EnvelopeRegion::exponential: return "exponential";
  }
  return "unknown";
}

std::array<double, 3> envelope_breakpoints(int k, double lambda, int n) {
  check_degree(k);
  check_dim(n);
  const double a = std::abs(lambda);
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("envelope needs a finite non-zero lambda");
  const double nu = 2.0 * (2.0 * k + n);
  return {std::sqrt(2.0 / (nu * a)), std::sqrt(nu / a), std::sqrt(3.0 * nu / a)};
}

EnvelopeBound bound_envelope(int k, double lambda, int n, double r, double C_fit, double gamma_fit) {
  EnvelopeBound out;
  out.breakpoints = envelope_breakpoints(k, lambda, n);
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("envelope radius must be finite and >= 0");
  const auto s = envelope_shape(k, n, 0.5 * std::abs(lambda) * r * r, gamma_fit);
  out.region = s.region;
  out.value = C_fit * s.value;
  return out;
}

std::vector<double> EnvelopeGrid::radii_for(int k, double lambda, int n) const {
  const auto b = envelope_breakpoints(k, lambda, n);
  const double a = std::log(lo * b[0]);
  const double z = std::log(hi * b[2]);
  std::vector<double> out(static_cast<std::size_t>(radii));
  for (int i = 0; i < radii; ++i) {
    out[i] = std::exp(radii == 1 ? a : a + (z - a) * i / (radii - 1));
  }
  return out;
}

std::string EnvelopeGrid::describe() const {
  std::ostringstream os;
  os << "dims=";
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ";k_max=" << k_max << ";lambdas=";
  for (std::size_t i = 0; i < lambdas.size(); ++i) os << (i ? "," : "") << format_double(lambdas[i]);
  os << ";radii=" << radii << ";lo=" << format_double(lo) << ";hi=" << format_double(hi);
  return os.str();
}

std::string EnvelopeGrid::hash() const { return fnv1a_hex(describe()); }

std::size_t EnvelopeGrid::point_count() const {
  return dims.size() * static_cast<std::size_t>(k_max + 1) * lambdas.size() *
         static_cast<std::size_t>(radii);
}

namespace {

// Visits every grid point with its |value| and u.
template <class F>
void for_each_point(const EnvelopeGrid& grid, F&& visit) {
  std::vector<double> seq;
  for (int n : grid.dims) {
    for (double lambda : grid.lambdas) {
      for (int k = 0; k <= grid.k_max; ++k) {
        seq.assign(static_cast<std::size_t>(k) + 1, 0.0);
        for (double r : grid.radii_for(k, lambda, n)) {
          const double u = 0.5 * std::abs(lambda) * r * r;
          laguerre_sequence(n - 1.0, u, seq);
          visit(n, lambda, k, r, u, std::abs(seq.back()));
        }
      }
    }
  }
}

}  // namespace

EnvelopeCalibration calibrate_envelope(const EnvelopeGrid& grid, double safety) {
  EnvelopeCalibration cal;
  cal.grid_hash = grid.hash();
  double max_inner = 0.0;
  double max_exp = 0.0;
  for_each_point(grid, [&](int n, double, int k, double, double u, double v) {
    const auto s = envelope_shape(k, n, u, 0.0);
    const double ratio = v / s.value;
    if (s.region == EnvelopeRegion::exponential) {
      max_exp = std::max(max_exp, ratio);
    } else {
      max_inner = std::max(max_inner, ratio);
    }
  });
  cal.max_ratio_inner = max_inner;

  // Largest gamma with ratio * exp(gamma u) <= max_inner on the exponential region.
  double gamma_limit = std::numeric_limits<double>::infinity();
  for_each_point(grid, [&](int n, double, int k, double, double u, double v) {
    const auto s = envelope_shape(k, n, u, 0.0);
    if (s.region != EnvelopeRegion::exponential || v == 0.0) return;
    gamma_limit = std::min(gamma_limit, std::log(max_inner * s.value / v) / u);
  });
  cal.gamma_limit = gamma_limit;

  double C0 = max_inner;
  double gamma = 0.9 * std::min(gamma_limit, 0.5);
  if (!(gamma > 0.0)) {
    gamma = 0.0;
    C0 = std::max(max_inner, max_exp);
  }
  cal.constants = {safety * C0, gamma};
  return cal;
}

EnvelopeCheck check_envelope(const EnvelopeGrid& grid, const EnvelopeConstants& constants) {
  EnvelopeCheck out;
  for_each_point(grid, [&](int n, double lambda, int k, double r, double u, double v) {
    const auto s = envelope_shape(k, n, u, constants.gamma_fit);
    const double env = constants.C_fit * s.value;
    const double ratio = v / env;
    ++out.points;
    ++out.per_region[static_cast<std::size_t>(s.region)];
    if (v > env) ++out.violations;
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_k = k;
      out.worst_n = n;
      out.worst_lambda = lambda;
      out.worst_r = r;
    }
  });
  return out;
}

}  // namespace heis
