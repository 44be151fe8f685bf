#include "heis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "heis/error.hpp"
#include "heis/laguerre.hpp"
#include "heis/parallel.hpp"
#include "heis/quadrature.hpp"

namespace heis {

namespace {

const GaussLegendre& rule(int nodes) {
  thread_local int cached_n = 0;
  thread_local std::unique_ptr<GaussLegendre> cached;
  if (cached_n != nodes) {
    cached = std::make_unique<GaussLegendre>(nodes);
    cached_n = nodes;
  }
  return *cached;
}

// int_a^b f with q = a + (b - a)(1 - cos phi)/2, which absorbs square-root
// behavior at both ends.
template <class F>
double integrate_cos_graded(F&& f, double a, double b, int nodes) {
  const double h = 0.5 * (b - a);
  return rule(nodes).integrate(
      [&](double phi) { return f(a + h * (1.0 - std::cos(phi))) * h * std::sin(phi); }, 0.0, std::numbers::pi);
}

}  // namespace

double SeparableProfile::operator()(const HeisenbergPoint& x) const {
  if (x.dim() != 1) throw IncompatibleError("separable profiles live on H^1");
  const double r = x.z_norm();
  if (r > z_radius || std::abs(x.t) > t_radius) return 0.0;
  return z_profile(r) * t_profile(x.t);
}

double SeparableProfile::mass(int nodes) const {
  const auto& gl = rule(nodes);
  const double zr = 2.0 * std::numbers::pi * gl.integrate([&](double r) { return z_profile(r) * r; }, 0.0, z_radius);
  return zr * gl.integrate(t_profile, -t_radius, t_radius);
}

SeparableProfile SeparableProfile::box(double z_radius, double t_radius, double height) {
  if (!(z_radius > 0.0) || !(t_radius > 0.0)) throw DomainError("box radii must be positive");
  return {[height](double) { return height; }, z_radius, [](double) { return 1.0; }, t_radius};
}

SeparableProfile box_factor(const SequencePlan& plan, int j) {
  if (plan.n != 1) throw IncompatibleError("spatial box factors are built on H^1 only");
  const double rho = plan.rho_at(j);
  const double tau = plan.tau_at(j);
  return {[rho](double) { return 1.0 / (rho * rho); }, plan.a * rho, [tau](double) { return 1.0 / (tau * tau); },
          0.5 * tau * tau};
}

double koranyi_support(const SeparableProfile& f) {
  return std::pow(std::pow(f.z_radius, 4) + f.t_radius * f.t_radius, 0.25);
}

double direct_convolution_oracle(const SeparableProfile& f, const SeparableProfile& g, const HeisenbergPoint& x,
                                 int nodes) {
  if (x.dim() != 1) throw IncompatibleError("direct_convolution_oracle supports n = 1 only");
  const double r = x.z_norm();
  const double t = x.t;
  const double Rf = f.z_radius, Rg = g.z_radius, Tf = f.t_radius, Tg = g.t_radius;
  if (r >= Rf + Rg) return 0.0;
  const double Rm = std::min(Rf, Rg);

  std::vector<double> cuts{-Rm, Rm};
  if (r > std::abs(Rf - Rg)) {
    // |w| = Rg meets |w - z| = Rf
    const double p = (Rg * Rg - Rf * Rf + r * r) / (2.0 * r);
    const double q = std::sqrt(std::max(0.0, Rg * Rg - p * p));
    cuts.push_back(q);
    cuts.push_back(-q);
  }
  if (r > 0.0) {
    for (double k : {Tf + Tg, Tf - Tg, Tg - Tf, -Tf - Tg}) cuts.push_back(2.0 * (k - t) / r);
  }
  std::sort(cuts.begin(), cuts.end());

  const auto A = [&](double q) {
    const double hg = std::sqrt(std::max(0.0, Rg * Rg - q * q));
    const double hf = std::sqrt(std::max(0.0, Rf * Rf - q * q));
    const double lo = std::max(-hg, r - hf);
    const double hi = std::min(hg, r + hf);
    if (!(hi > lo)) return 0.0;
    return rule(nodes).integrate(
        [&](double p) {
          return f.z_profile(std::min(Rf, std::hypot(r - p, q))) * g.z_profile(std::min(Rg, std::hypot(p, q)));
        },
        lo, hi);
  };
  const auto B = [&](double q) {
    const double shift = t + 0.5 * r * q;  // f's time argument is shift - s
    const double lo = std::max(-Tg, shift - Tf);
    const double hi = std::min(Tg, shift + Tf);
    if (!(hi > lo)) return 0.0;
    return rule(nodes).integrate(
        [&](double s) { return f.t_profile(std::clamp(shift - s, -Tf, Tf)) * g.t_profile(s); }, lo, hi);
  };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], -Rm);
    const double b = std::min(cuts[i + 1], Rm);
    if (!(b > a)) continue;
    total += integrate_cos_graded([&](double q) { return A(q) * B(q); }, a, b, nodes);
  }
  return total;
}

ConvolutionSamples sample_convolution(const SeparableProfile& f, const SeparableProfile& g, int r_nodes, int t_nodes,
                                      int oracle_nodes, int threads) {
  const double Rf = f.z_radius, Rg = g.z_radius, Tf = f.t_radius, Tg = g.t_radius;
  const double Rm = std::min(Rf, Rg);
  const GaussLegendre gr(r_nodes);
  const GaussLegendre gt(t_nodes);
  ConvolutionSamples out;
  std::vector<double> x, w;
  const double edges[] = {0.0, std::abs(Rf - Rg), Rf + Rg};
  for (int e = 0; e < 2; ++e) {
    if (!(edges[e + 1] > edges[e])) continue;
    x.clear();
    w.clear();
    gr.map(edges[e], edges[e + 1], x, w);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = x[i];
      const double t_max = Tf + Tg + 0.5 * r * Rm;
      std::vector<double> qs{Rm};
      if (r > std::abs(Rf - Rg)) {
        const double p = (Rg * Rg - Rf * Rf + r * r) / (2.0 * r);
        qs.push_back(std::sqrt(std::max(0.0, Rg * Rg - p * p)));
      }
      // kinks of the trapezoid g_t * f_t, shifted by the twist r q / 2
      std::vector<double> cuts{0.0, t_max};
      for (double kappa : {Tf + Tg, std::abs(Tf - Tg)})
        for (double q : qs)
          for (double sq : {-1.0, 1.0})
            for (double sk : {-1.0, 1.0}) {
              const double c = sk * kappa + sq * 0.5 * r * q;
              if (c > 0.0 && c < t_max) cuts.push_back(c);
            }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c];
        const double half = 0.5 * (cuts[c + 1] - a);
        if (!(half > 1e-14 * t_max)) continue;
        for (int m = 0; m < gt.size(); ++m) {
          const double phi = 0.5 * std::numbers::pi * (gt.nodes()[m] + 1.0);
          out.r.push_back(r);
          out.t.push_back(a + half * (1.0 - std::cos(phi)));
          out.w.push_back(w[i] * 0.5 * std::numbers::pi * gt.weights()[m] * half * std::sin(phi));
        }
      }
    }
  }
  out.h.resize(out.r.size());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    out.h[i] = direct_convolution_oracle(f, g, HeisenbergPoint({Complex(out.r[i], 0.0)}, out.t[i]), oracle_nodes);
  });
  return out;
}

std::vector<double> sampled_forward(const ConvolutionSamples& s, double lambda, int k_max) {
  if (lambda == 0.0 || k_max < 0) throw DomainError("sampled_forward needs lambda != 0 and k_max >= 0");
  const std::size_t K = static_cast<std::size_t>(k_max) + 1;
  std::vector<std::vector<double>> terms(K, std::vector<double>(s.size()));
  std::vector<double> ell(K);
  for (std::size_t i = 0; i < s.size(); ++i) {
    laguerre_sequence(0.0, 0.5 * std::abs(lambda) * s.r[i] * s.r[i], ell);
    // h^lambda(r) = 2 int_0^inf h cos(lambda t) dt; R_k = 2 pi int h^lambda phi_k r dr
    const double base = 4.0 * std::numbers::pi * s.w[i] * s.h[i] * std::cos(lambda * s.t[i]) * s.r[i];
    for (std::size_t k = 0; k < K; ++k) terms[k][i] = base * ell[k];
  }
  std::vector<double> out(K);
  for (std::size_t k = 0; k < K; ++k) out[k] = pairwise_sum(terms[k]);
  return out;
}

ConvolutionCheck convolution_theorem_check(const SequencePlan& plan, int k_max, const std::vector<double>& lambdas,
                                           int threads) {
  if (plan.length() < 2) throw DomainError("convolution check needs a plan with two factors");
  const auto samples = sample_convolution(box_factor(plan, 1), box_factor(plan, 2), 12, 7, 16, threads);
  ConvolutionCheck out;
  out.samples = samples.size();
  for (double lambda : lambdas) {
    const auto lhs = sampled_forward(samples, lambda, k_max);
    const auto c1 = box_coefficients(std::abs(lambda) * plan.rho_at(1) * plan.rho_at(1), 1, k_max);
    const auto c2 = box_coefficients(std::abs(lambda) * plan.rho_at(2) * plan.rho_at(2), 1, k_max);
    const double t = factor_t_hat(1, lambda, plan) * factor_t_hat(2, lambda, plan);
    for (int k = 0; k <= k_max; ++k) {
      const double prod = t * c1[k] * c2[k];
      const double e = std::abs(lhs[k] - prod) / (1.0 + std::abs(prod));
      out.max_abs_product = std::max(out.max_abs_product, std::abs(prod));
      if (e > out.worst) {
        out.worst = e;
        out.worst_k = k;
        out.worst_lambda = lambda;
      }
    }
  }
  return out;
}

}  // namespace heis
