#include "heis/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "heis/error.hpp"
#include "heis/laguerre.hpp"
#include "heis/quadrature.hpp"
#include "heis/text.hpp"

namespace heis {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  std::vector<double> e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::exp(v[i] - mx);
  return mx + std::log(pairwise_sum(e));
}

double log_add(double a, double b) {
  const double mx = std::max(a, b);
  if (mx == kNegInf) return kNegInf;
  return mx + std::log(std::exp(a - mx) + std::exp(b - mx));
}

std::vector<double> partial(const std::vector<double>& terms) {
  std::vector<double> out;
  double s = 0.0;
  for (double t : terms) out.push_back(s += t);
  return out;
}

}  // namespace

double NormGrowthProfile::norm(int m) const { return std::exp(log_norms.at(static_cast<std::size_t>(m))); }

NormGrowthProfile sublaplacian_norms(const SpectralCoefficients& c, int M, double tail_tol) {
  if (M < 1) throw DomainError("sublaplacian_norms needs M >= 1");
  const std::size_t L = c.cols();
  const std::size_t K = c.rows();
  const double log_prefactor =
      std::log(c.symmetry == LambdaSymmetry::even ? 2.0 : 1.0) - (c.n + 1) * std::log(2.0 * std::numbers::pi);
  // log of R^2 mult w lambda^n, and log nu, per entry
  std::vector<double> base(K * L), log_nu(K * L);
  for (std::size_t k = 0; k < K; ++k) {
    const double lm = log_multiplicity(static_cast<int>(k), c.n);
    for (std::size_t j = 0; j < L; ++j) {
      const double lam = std::abs(c.grid.lambdas[j]);
      const double v = c.values[k * L + j];
      base[k * L + j] = v == 0.0 ? kNegInf
                                 : 2.0 * std::log(std::abs(v)) + lm + std::log(c.grid.weights[j]) + c.n * std::log(lam);
      log_nu[k * L + j] = std::log((2.0 * static_cast<double>(k) + c.n) * lam);
    }
  }
  NormGrowthProfile p;
  std::vector<double> terms(K * L), column(K), row(L);
  for (int m = 0; m <= M; ++m) {
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = base[i] + 2.0 * m * log_nu[i];
    const double total = log_sum_exp(terms);
    if (!c.compact_spectrum && total != kNegInf) {
      for (std::size_t k = 0; k < K; ++k) column[k] = terms[k * L + L - 1];
      for (std::size_t j = 0; j < L; ++j) row[j] = terms[(K - 1) * L + j];
      const double share = std::exp(std::max(log_sum_exp(column), log_sum_exp(row)) - total);
      if (share > tail_tol) {
        throw TailError("||L^" + std::to_string(m) + " f|| is not converged on the grid: the boundary carries " +
                            format_double(share) + " of the mass",
                        m);
      }
    }
    p.log_norms.push_back(0.5 * (total + log_prefactor));
  }
  for (int m = 1; m <= M; ++m) {
    const double ln = p.log_norms[static_cast<std::size_t>(m)];
    p.carleman_terms.push_back(ln == kNegInf ? std::numeric_limits<double>::infinity() : std::exp(-ln / (2.0 * m)));
  }
  p.partial_sums = partial(p.carleman_terms);
  return p;
}

CarlemanSums carleman_partial_sums(const NormGrowthProfile& profile) {
  CarlemanSums out;
  if (profile.log_norms.empty() || profile.log_norms[0] == kNegInf) {
    out.degenerate = true;
    return out;
  }
  out.terms = profile.carleman_terms;
  out.partial_sums = partial(out.terms);
  const double l0 = profile.log_norms[0];
  for (int m = 1; m <= profile.max_power(); ++m) {
    const double ln = profile.log_norms[static_cast<std::size_t>(m)] - l0;
    out.normalized_terms.push_back(ln == kNegInf ? std::numeric_limits<double>::infinity()
                                                 : std::exp(-ln / (2.0 * m)));
  }
  out.normalized_partial_sums = partial(out.normalized_terms);
  return out;
}

KSum k_sum_prefactor(int n, int terms) {
  if (n < 1 || terms < 1) throw DomainError("k_sum_prefactor needs n >= 1 and terms >= 1");
  std::vector<double> v(static_cast<std::size_t>(terms));
  // smallest terms first
  for (int i = 0; i < terms; ++i) {
    const double d = 2.0 * (terms - 1 - i) + n;
    v[static_cast<std::size_t>(i)] = 1.0 / (d * d);
  }
  KSum s;
  for (double x : v) s.partial += x;
  // int_K^inf (2k+n)^-2 dk <= tail <= int_{K-1}^inf
  const double K = terms;
  s.lower = s.partial + 1.0 / (2.0 * (2.0 * K + n));
  s.upper = s.partial + 1.0 / (2.0 * (2.0 * (K - 1.0) + n));
  return s;
}

double log_moment_integral(const ThetaProfile& theta, int n, int m) {
  // lambda = e^x: int exp((2m+n+1) x - Theta(e^(x/2)) e^(x/2)) dx
  const double p = 2.0 * m + n + 1.0;
  const auto g = [&](double x) {
    const double s = std::exp(0.5 * x);
    return p * x - theta(s) * s;
  };
  const GaussLegendre rule(16);
  const double width = 0.5;
  std::vector<double> logs;
  std::vector<double> x, w;
  double peak = kNegInf;
  for (double a = -60.0; a < 400.0; a += width) {
    x.clear();
    w.clear();
    rule.map(a, a + width, x, w);
    double panel_max = kNegInf;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = g(x[i]);
      logs.push_back(v + std::log(w[i]));
      panel_max = std::max(panel_max, v);
    }
    peak = std::max(peak, panel_max);
    if (a > 0.0 && panel_max < peak - 60.0) return log_sum_exp(logs);
  }
  throw DomainError("moment integral for '" + theta.name() + "' does not decay by lambda = e^400");
}

GammaBoundReport ingham_norm_bound_check(const ThetaProfile& theta, int n, int M) {
  if (n < 1 || M < 1 || M > 12) throw DomainError("ingham_norm_bound_check needs n >= 1 and 1 <= M <= 12");
  for (int i = 0; i <= 800; ++i) {
    const double y = std::pow(10.0, i / 100.0);
    const double need = 2.0 / std::sqrt(y);
    if (theta(y) < need * (1.0 - 1e-12)) {
      throw RefusalError("decay profile '" + theta.name() + "' violates Theta(y) >= 2 y^(-1/2) at y = " +
                         format_double(y) + " (Theta = " + format_double(theta(y)) + ")");
    }
  }
  GammaBoundReport r;
  r.theta = theta.name();
  r.n = n;
  r.k_sum = k_sum_prefactor(n);
  r.pass = true;
  for (int m = 1; m <= M; ++m) {
    GammaBoundRow row;
    row.m = m;
    row.log_I = log_moment_integral(theta, n, m);
    const double th = theta(std::pow(static_cast<double>(m), 4));
    row.log_first = std::log(2.0) + 8.0 * (n + 1) * std::log(m) + std::lgamma(4.0 * m) - 4.0 * m * std::log(th);
    row.log_second = std::log(4.0) - static_cast<double>(m) * m + std::lgamma(8.0 * m + 4.0 * (n + 1));
    row.ratio = std::exp(row.log_I - log_add(row.log_first, row.log_second));
    row.second_over_first = std::exp(row.log_second - row.log_first);
    r.pass = r.pass && row.ratio <= 1.0;
    r.rows.push_back(row);
  }
  return r;
}

std::vector<TransferRow> sequence_transfer_check(const std::function<double(int)>& log_M, double a, double b,
                                                 const std::function<double(int)>& log_K, int terms) {
  if (!(a > 0.0) || !(b > 0.0) || terms < 1) throw DomainError("sequence_transfer_check needs a, b > 0 and terms >= 1");
  std::vector<TransferRow> rows;
  double ms = 0.0, ks = 0.0;
  for (int i = 1; i <= terms; ++i) {
    const double lm = log_M(i);
    const double lk = log_K(i);
    if (!std::isfinite(lm)) throw DomainError("M_" + std::to_string(i) + " must be positive and finite");
    const double cap = log_add(std::log(a) + lm, i * std::log(b));
    if (std::isnan(lk) || lk > cap + 1e-12 * std::max(1.0, std::abs(cap))) {
      throw DomainError("domination 0 <= K_n <= a M_n + b^n fails at n = " + std::to_string(i));
    }
    TransferRow row;
    row.index = i;
    row.m_term = std::exp(-lm / i);
    row.k_term = std::exp(-lk / i);
    row.lower = std::min(std::exp(-(std::log(2.0 * a) + lm) / i), std::exp(-(std::log(2.0) + i * std::log(b)) / i));
    row.m_partial = ms += row.m_term;
    row.k_partial = ks += row.k_term;
    rows.push_back(row);
  }
  return rows;
}

namespace {

nlohmann::ordered_json rows_json(const NormGrowthProfile& p, const GammaBoundReport* bounds) {
  auto rows = nlohmann::ordered_json::array();
  for (int m = 0; m <= p.max_power(); ++m) {
    nlohmann::ordered_json row;
    row["m"] = m;
    row["norm"] = p.norm(m);
    if (m == 0) {
      row["carleman_term"] = nullptr;
      row["partial_sum"] = 0.0;
    } else {
      row["carleman_term"] = p.carleman_terms[static_cast<std::size_t>(m) - 1];
      row["partial_sum"] = p.partial_sums[static_cast<std::size_t>(m) - 1];
    }
    row["bound_ratio"] = nullptr;
    if (bounds) {
      for (const auto& b : bounds->rows)
        if (b.m == m) row["bound_ratio"] = b.ratio;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string to_json(const NormGrowthProfile& profile, const GammaBoundReport* bounds) {
  return rows_json(profile, bounds).dump(2) + "\n";
}

std::string to_csv(const NormGrowthProfile& profile, const GammaBoundReport* bounds) {
  std::string out = "m,norm,carleman_term,partial_sum,bound_ratio\n";
  for (const auto& row : rows_json(profile, bounds)) {
    const auto cell = [](const nlohmann::ordered_json& v) {
      return v.is_null() ? std::string() : v.is_number_integer() ? std::to_string(v.get<int>()) : format_double(v.get<double>());
    };
    out += cell(row["m"]) + "," + cell(row["norm"]) + "," + cell(row["carleman_term"]) + "," + cell(row["partial_sum"]) +
           "," + cell(row["bound_ratio"]) + "\n";
  }
  return out;
}

}  // namespace heis
