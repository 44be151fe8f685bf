#include "heis/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "heis/error.hpp"
#include "heis/laguerre.hpp"
#include "heis/parallel.hpp"
#include "heis/quadrature.hpp"
#include "heis/text.hpp"

namespace heis {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Oscillations of the top Laguerre function allowed per 64-node panel.
constexpr double kOscillationsPer64 = 6.0;
// Width in u = |lambda| r^2 / 2 of a panel past the turning region.
constexpr double kDecayPanelWidth = 16.0;
// e^-45 relative to the peak of a declared Gaussian decay.
constexpr double kGaussianCut = 45.0;
constexpr double kNegligible = 1e-280;

double radial_prefactor(int n) {
  return 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(static_cast<double>(n));
}

std::vector<Panel> radial_panels(const RadialFunction& f, double lambda, int k_max, int nodes) {
  const double a = std::abs(lambda);
  const double nu = 2.0 * (2.0 * k_max + f.n);
  double upper = f.support_radius;
  if (!std::isfinite(upper)) {
    const double alpha = f.gaussian_rate ? f.gaussian_rate(lambda) : 0.0;
    if (!(alpha > 0.0)) {
      throw DomainError("radial function has unbounded support and no declared decay");
    }
    upper = std::sqrt(kGaussianCut / alpha);
  }
  // beyond u = 3 nu / 2 + 100 every Laguerre function up to k_max has decayed
  upper = std::min(upper, std::sqrt(2.0 * (1.5 * nu + 100.0) / a));

  const double b2 = std::sqrt(nu / a);
  const double b3 = std::sqrt(3.0 * nu / a);
  std::vector<double> cuts{0.0};
  for (double c : {b2, b3}) cuts.push_back(c);
  for (double c : f.breaks) cuts.push_back(c);
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c < 0.0 || c > upper; }),
             cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double wavenumber = std::sqrt(0.5 * a * nu);  // phase speed in r of the top function
  const double per_panel = kTwoPi * kOscillationsPer64 * nodes / 64.0;
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double s0 = cuts[i];
    const double s1 = cuts[i + 1];
    if (!(s1 > s0)) continue;
    if (s1 <= b3 * (1.0 + 1e-12)) {
      const int count = std::max(1, static_cast<int>(std::ceil((s1 - s0) * wavenumber / per_panel)));
      for (const auto& p : uniform_panels(s0, s1, count)) panels.push_back(p);
    } else {
      const double u0 = 0.5 * a * s0 * s0;
      const double u1 = 0.5 * a * s1 * s1;
      const int count = std::max(1, static_cast<int>(std::ceil((u1 - u0) / kDecayPanelWidth)));
      double prev = s0;
      for (int c = 1; c <= count; ++c) {
        const double next = c == count ? s1 : std::sqrt(2.0 * (u0 + (u1 - u0) * c / count) / a);
        panels.push_back({prev, next});
        prev = next;
      }
    }
  }
  if (panels.size() < 2) panels = bisect(panels);
  return panels;
}

struct ColumnResult {
  std::vector<double> R;
  double scale = 0.0;  // (2 pi^n / Gamma(n)) int |f^lambda| r^(2n-1) dr
};

ColumnResult integrate_column(const RadialFunction& f, double lambda, int k_max,
                              const GaussLegendre& rule, std::span<const Panel> panels) {
  const std::size_t K = static_cast<std::size_t>(k_max) + 1;
  const double a = std::abs(lambda);
  const double delta = f.n - 1.0;
  std::vector<double> partial(panels.size() * K, 0.0);
  std::vector<double> abs_partial(panels.size(), 0.0);
  std::vector<double> seq(K);
  std::vector<double> x;
  std::vector<double> w;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    x.clear();
    w.clear();
    rule.map(panels[p].a, panels[p].b, x, w);
    double* acc = partial.data() + p * K;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = x[i];
      const double fv = f.value(lambda, r);
      if (!std::isfinite(fv)) throw NonFiniteError("radial function is not finite", 0, lambda);
      if (fv == 0.0) continue;
      const double wt = w[i] * fv * std::pow(r, 2 * f.n - 1);
      abs_partial[p] += std::abs(wt);
      laguerre_sequence(delta, 0.5 * a * r * r, seq);
      for (std::size_t k = 0; k < K; ++k) acc[k] += wt * seq[k];
    }
  }
  ColumnResult out;
  out.R.resize(K);
  const double pref = radial_prefactor(f.n);
  std::vector<double> column(panels.size());
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t p = 0; p < panels.size(); ++p) column[p] = partial[p * K + k];
    out.R[k] = pref * laguerre_norm_constant(static_cast<int>(k), f.n) * pairwise_sum(column);
  }
  out.scale = pref * pairwise_sum(abs_partial);
  return out;
}

std::vector<double> column_with_check(const RadialFunction& f, double lambda, int k_max,
                                      const GaussLegendre& rule, bool refine_check, double rel_tol) {
  if (!(lambda != 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and non-zero");
  const auto panels = radial_panels(f, lambda, k_max, rule.size());
  if (!refine_check) return integrate_column(f, lambda, k_max, rule, panels).R;
  const auto coarse = integrate_column(f, lambda, k_max, rule, panels);
  const auto fine_panels = bisect(panels);
  auto fine = integrate_column(f, lambda, k_max, rule, fine_panels);
  if (fine.scale == 0.0) return std::move(fine.R);
  int worst_k = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < fine.R.size(); ++k) {
    const double d = std::abs(fine.R[k] - coarse.R[k]);
    if (d > worst) {
      worst = d;
      worst_k = static_cast<int>(k);
    }
  }
  // columns whose total mass is far below DBL_MIN carry only denormal noise
  if (worst > rel_tol * fine.scale && worst > kNegligible) {
    std::ostringstream os;
    os << "radial quadrature did not converge at k=" << worst_k << ", lambda=" << format_double(lambda)
       << " (relative discrepancy " << format_double(worst / fine.scale) << ")";
    throw QuadratureError(os.str(), worst_k, lambda, worst / fine.scale);
  }
  return std::move(fine.R);
}

double multiplicity(int k, int n) {
  if (n <= 20) {
    double m = 1.0;
    for (int i = 1; i < n; ++i) m = m * (k + i) / i;
    return m;
  }
  return std::exp(log_multiplicity(k, n));
}

double symmetry_factor(LambdaSymmetry s) { return s == LambdaSymmetry::even ? 2.0 : 1.0; }

void require_same_space(const SpectralCoefficients& a, const SpectralCoefficients& b) {
  if (a.n != b.n) throw IncompatibleError("spectral coefficients of different dimension");
  if (a.symmetry != b.symmetry) throw IncompatibleError("spectral coefficients with different lambda symmetry");
  if (!(a.grid == b.grid)) throw IncompatibleError("spectral coefficients on different grids");
}

}  // namespace

QuadratureGrid QuadratureGrid::log_trapezoid(double lo, double hi, int count, int k_max, int radial_nodes) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("log-trapezoid grid needs 0 < lo < hi and >= 2 nodes");
  QuadratureGrid g;
  g.k_max = k_max;
  g.radial_nodes = radial_nodes;
  const double a = std::log(lo);
  const double b = std::log(hi);
  const double h = (b - a) / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double lam = i + 1 == count ? hi : std::exp(a + h * i);
    const double end = (i == 0 || i + 1 == count) ? 0.5 : 1.0;
    g.lambdas.push_back(i == 0 ? lo : lam);
    g.weights.push_back(end * h * g.lambdas.back());
  }
  g.validate();
  return g;
}

QuadratureGrid QuadratureGrid::log_gauss(double lo, double hi, int panels, int nodes, int k_max, int radial_nodes) {
  if (!(lo > 0.0) || !(hi > lo) || panels < 1) throw DomainError("log-Gauss grid needs 0 < lo < hi and >= 1 panel");
  QuadratureGrid g;
  g.k_max = k_max;
  g.radial_nodes = radial_nodes;
  const GaussLegendre rule(nodes);
  const auto q = composite(rule, uniform_panels(std::log(lo), std::log(hi), panels));
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    const double lam = std::exp(q.x[i]);
    g.lambdas.push_back(lam);
    g.weights.push_back(q.w[i] * lam);
  }
  g.validate();
  return g;
}

QuadratureGrid QuadratureGrid::gauss(std::span<const double> edges, int nodes, int k_max, int radial_nodes) {
  if (edges.size() < 2) throw DomainError("Gauss grid needs at least two panel edges");
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) panels.push_back({edges[i], edges[i + 1]});
  QuadratureGrid g;
  g.k_max = k_max;
  g.radial_nodes = radial_nodes;
  const auto q = composite(GaussLegendre(nodes), panels);
  g.lambdas = q.x;
  g.weights = q.w;
  g.validate();
  return g;
}

QuadratureGrid QuadratureGrid::points(std::vector<double> lambdas, int k_max, int radial_nodes) {
  QuadratureGrid g;
  g.k_max = k_max;
  g.radial_nodes = radial_nodes;
  g.weights.assign(lambdas.size(), 1.0);
  g.lambdas = std::move(lambdas);
  g.validate();
  return g;
}

QuadratureGrid QuadratureGrid::standard() { return log_trapezoid(1e-3, 1e3, 256, 256); }

void QuadratureGrid::validate() const {
  if (lambdas.empty() || lambdas.size() != weights.size()) throw DomainError("grid needs matching lambda nodes and weights");
  if (k_max < 1) throw DomainError("grid needs k_max >= 1");
  if (radial_nodes < 2) throw DomainError("grid needs at least two radial nodes per panel");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) throw DomainError("grid lambda nodes must be positive");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw DomainError("grid weights must be positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw DomainError("grid lambda nodes must be strictly ascending");
  }
}

bool operator==(const QuadratureGrid& a, const QuadratureGrid& b) {
  return a.k_max == b.k_max && a.radial_nodes == b.radial_nodes && a.lambdas == b.lambdas && a.weights == b.weights;
}

std::string to_string(LambdaSymmetry s) { return s == LambdaSymmetry::even ? "even" : "one_sided"; }

LambdaSymmetry lambda_symmetry_from_string(const std::string& s) {
  if (s == "even") return LambdaSymmetry::even;
  if (s == "one_sided") return LambdaSymmetry::one_sided;
  throw DomainError("unknown lambda symmetry '" + s + "'");
}

SpectralCoefficients::SpectralCoefficients(int n_, QuadratureGrid grid_, LambdaSymmetry symmetry_)
    : n(n_), grid(std::move(grid_)), symmetry(symmetry_) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
  grid.validate();
  values.assign(rows() * cols(), 0.0);
}

RadialFunction RadialFunction::separable(int n, std::function<double(double)> t_hat,
                                         std::function<double(double)> profile, double support_radius) {
  if (!(support_radius > 0.0)) throw DomainError("support radius must be positive");
  RadialFunction f;
  f.n = n;
  f.support_radius = support_radius;
  f.value = [t_hat = std::move(t_hat), profile = std::move(profile)](double lambda, double r) {
    return t_hat(lambda) * profile(r);
  };
  return f;
}

RadialFunction RadialFunction::separable_gaussian(int n, std::function<double(double)> t_hat,
                                                  std::function<double(double)> profile, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("Gaussian decay rate must be positive");
  RadialFunction f;
  f.n = n;
  f.value = [t_hat = std::move(t_hat), profile = std::move(profile)](double lambda, double r) {
    return t_hat(lambda) * profile(r);
  };
  f.gaussian_rate = [alpha](double) { return alpha; };
  return f;
}

RadialFunction dilate_function(const RadialFunction& f, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("dilation factor must be positive");
  RadialFunction g;
  g.n = f.n;
  const double r2 = r * r;
  g.value = [v = f.value, r, r2](double lambda, double rho) { return v(lambda / r2, r * rho) / r2; };
  g.support_radius = f.support_radius / r;
  if (f.gaussian_rate) {
    g.gaussian_rate = [rate = f.gaussian_rate, r2](double lambda) { return rate(lambda / r2) * r2; };
  }
  for (double b : f.breaks) g.breaks.push_back(b / r);
  return g;
}

std::vector<double> forward_radial_column(const RadialFunction& f, double lambda, int k_max, int radial_nodes,
                                          bool refine_check, double rel_tol) {
  if (f.n < 1) throw DomainError("dimension n must be at least 1");
  if (!f.value) throw DomainError("radial function has no values");
  const GaussLegendre rule(radial_nodes);
  return column_with_check(f, lambda, k_max, rule, refine_check, rel_tol);
}

SpectralCoefficients forward_radial(const RadialFunction& f, const QuadratureGrid& grid,
                                    const ForwardOptions& options, LambdaSymmetry symmetry) {
  if (!f.value) throw DomainError("radial function has no values");
  SpectralCoefficients c(f.n, grid, symmetry);
  const GaussLegendre rule(grid.radial_nodes);
  const std::size_t L = grid.size();
  parallel_for(L, options.threads, [&](std::size_t j) {
    const auto col = column_with_check(f, grid.lambdas[j], grid.k_max, rule, options.refine_check, options.rel_tol);
    for (std::size_t k = 0; k < col.size(); ++k) c.values[k * L + j] = col[k];
  });
  return c;
}

double projection_hs_norm_sq(int k, int n) {
  if (k < 0 || n < 1) throw DomainError("projection norm needs k >= 0 and n >= 1");
  return multiplicity(k, n);
}

double plancherel_norm(const SpectralCoefficients& c) {
  const std::size_t L = c.cols();
  std::vector<double> column(L);
  std::vector<double> mult(c.rows());
  for (std::size_t k = 0; k < c.rows(); ++k) mult[k] = multiplicity(static_cast<int>(k), c.n);
  for (std::size_t j = 0; j < L; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.rows(); ++k) {
      const double v = c.values[k * L + j];
      s += v * v * mult[k];
    }
    column[j] = c.grid.weights[j] * std::pow(c.grid.lambdas[j], c.n) * s;
  }
  const double total = symmetry_factor(c.symmetry) * pairwise_sum(column) * std::pow(kTwoPi, -(c.n + 1));
  return std::sqrt(total);
}

SpectralCoefficients apply_multipliers(const SpectralCoefficients& c, std::span<const Multiplier> ms) {
  SpectralCoefficients out = c;
  const std::size_t L = c.cols();
  for (std::size_t k = 0; k < c.rows(); ++k) {
    for (std::size_t j = 0; j < L; ++j) {
      double v = c.values[k * L + j];
      for (const auto& m : ms) {
        const double f = m(static_cast<int>(k), c.grid.lambdas[j]);
        if (!std::isfinite(f)) {
          throw NonFiniteError("multiplier is not finite at k=" + std::to_string(k) +
                                   ", lambda=" + format_double(c.grid.lambdas[j]),
                               static_cast<int>(k), c.grid.lambdas[j]);
        }
        v *= f;
      }
      out.values[k * L + j] = v;
    }
  }
  return out;
}

SpectralCoefficients apply_multiplier(const SpectralCoefficients& c, const Multiplier& m) {
  return apply_multipliers(c, std::span<const Multiplier>(&m, 1));
}

Multiplier sublaplacian_multiplier(int n, int power) {
  return [n, power](int k, double lambda) { return std::pow((2.0 * k + n) * std::abs(lambda), power); };
}

Multiplier heat_multiplier(int n, double a) {
  return [n, a](int k, double lambda) { return std::exp(-a * (2.0 * k + n) * std::abs(lambda)); };
}

SpectralCoefficients multiply_coeffs(const SpectralCoefficients& a, const SpectralCoefficients& b) {
  require_same_space(a, b);
  SpectralCoefficients out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  out.compact_spectrum = a.compact_spectrum || b.compact_spectrum;
  return out;
}

SpectralCoefficients dilate_coeffs(const SpectralCoefficients& c, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("dilation factor must be positive");
  SpectralCoefficients out = c;
  const auto& lam = c.grid.lambdas;
  const std::size_t L = c.cols();
  const double scale = std::pow(r, -(2.0 * c.n + 2.0));
  const double r2 = r * r;
  auto boundary_decayed = [&](std::size_t j) {
    for (std::size_t k = 0; k < c.rows(); ++k)
      if (std::abs(c.values[k * L + j]) >= 1e-14) return false;
    return true;
  };
  for (std::size_t j = 0; j < L; ++j) {
    const double mu = lam[j] / r2;
    std::size_t i0 = 0;
    double t = 0.0;
    bool zero = false;
    if (mu < lam.front() || mu > lam.back()) {
      const std::size_t edge = mu < lam.front() ? 0 : L - 1;
      if (!boundary_decayed(edge)) {
        throw DomainError("dilated lambda " + format_double(mu) + " lies outside the grid [" +
                          format_double(lam.front()) + ", " + format_double(lam.back()) + "]");
      }
      zero = true;
    } else {
      const auto it = std::upper_bound(lam.begin(), lam.end(), mu);
      i0 = it == lam.begin() ? 0 : static_cast<std::size_t>(it - lam.begin()) - 1;
      if (i0 + 1 >= L) {
        i0 = L - 1;
      } else if (mu != lam[i0]) {
        t = (std::log(mu) - std::log(lam[i0])) / (std::log(lam[i0 + 1]) - std::log(lam[i0]));
      }
    }
    for (std::size_t k = 0; k < c.rows(); ++k) {
      double v = 0.0;
      if (!zero) {
        v = c.values[k * L + i0];
        if (t != 0.0) v = (1.0 - t) * v + t * c.values[k * L + i0 + 1];
      }
      out.values[k * L + j] = scale * v;
    }
  }
  return out;
}

double sobolev_norm(const SpectralCoefficients& c, double s) {
  const int n = c.n;
  return plancherel_norm(apply_multiplier(c, [n, s](int k, double lambda) {
    return std::pow(1.0 + (2.0 * k + n) * std::abs(lambda), 0.5 * s);
  }));
}

std::string coefficients_csv(const SpectralCoefficients& c) {
  std::string out = "k,lambda,R\n";
  const std::size_t L = c.cols();
  for (std::size_t k = 0; k < c.rows(); ++k) {
    for (std::size_t j = 0; j < L; ++j) {
      out += std::to_string(k);
      out += ',';
      out += format_double(c.grid.lambdas[j]);
      out += ',';
      out += format_double(c.values[k * L + j]);
      out += '\n';
    }
  }
  return out;
}

std::string coefficients_header_json(const SpectralCoefficients& c) {
  json h;
  h["n"] = c.n;
  h["k_max"] = c.grid.k_max;
  h["radial_nodes"] = c.grid.radial_nodes;
  h["symmetry"] = to_string(c.symmetry);
  h["compact_spectrum"] = c.compact_spectrum;
  json lam = json::array();
  json w = json::array();
  for (std::size_t j = 0; j < c.cols(); ++j) {
    lam.push_back(format_double(c.grid.lambdas[j]));
    w.push_back(format_double(c.grid.weights[j]));
  }
  h["lambdas"] = lam;
  h["weights"] = w;
  return h.dump(2) + "\n";
}

SpectralCoefficients coefficients_from_text(const std::string& header_json, const std::string& csv) {
  const json h = json::parse(header_json);
  QuadratureGrid g;
  g.k_max = h.at("k_max").get<int>();
  g.radial_nodes = h.at("radial_nodes").get<int>();
  for (const auto& v : h.at("lambdas")) g.lambdas.push_back(parse_double(v.get<std::string>()));
  for (const auto& v : h.at("weights")) g.weights.push_back(parse_double(v.get<std::string>()));
  SpectralCoefficients c(h.at("n").get<int>(), g, lambda_symmetry_from_string(h.at("symmetry").get<std::string>()));
  c.compact_spectrum = h.at("compact_spectrum").get<bool>();

  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || line != "k,lambda,R") throw DomainError("coefficient CSV must start with 'k,lambda,R'");
  const std::size_t L = c.cols();
  std::size_t filled = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto p1 = line.find(',');
    const auto p2 = line.find(',', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) throw DomainError("malformed CSV row: " + line);
    const long k = std::stol(line.substr(0, p1));
    const double lam = parse_double(std::string_view(line).substr(p1 + 1, p2 - p1 - 1));
    const double v = parse_double(std::string_view(line).substr(p2 + 1));
    const auto it = std::lower_bound(g.lambdas.begin(), g.lambdas.end(), lam);
    if (k < 0 || k > g.k_max || it == g.lambdas.end() || *it != lam) {
      throw DomainError("CSV row does not match the grid: " + line);
    }
    c.values[static_cast<std::size_t>(k) * L + static_cast<std::size_t>(it - g.lambdas.begin())] = v;
    ++filled;
  }
  if (filled != c.values.size()) throw DomainError("CSV does not cover the grid");
  return c;
}

}  // namespace heis
