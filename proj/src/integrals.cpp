#include "besov/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "besov/numerics.hpp"
#include "besov/specfun.hpp"

namespace besov {

namespace {

constexpr double kPi = 3.14159265358979323846;

double prefactor(int n, double alpha) {
  return std::pow(kPi, 0.5 * n) * std::exp(log_gamma(alpha) - log_gamma(0.5 * n + alpha));
}

void validate_args(int n, const IArgs& args) {
  if (n < 2) throw domain_error("bracket integral: need n >= 2");
  if (args.alpha <= 0.0) throw domain_error("bracket integral: need alpha > 0");
  if (args.x_abs < 0.0 || args.x_abs >= 1.0)
    throw domain_error("bracket integral: need 0 <= |x| < 1");
}

// some sampled points sit extremely close to the boundary; the direct series
// in the logarithmic case needs O(1/(1-t)) terms, so give it room
const SeriesControl kDeepSeries{1e-13, 400000};

}  // namespace

double i_closed_form(int n, const IArgs& args) {
  validate_args(n, args);
  const double t = args.x_abs * args.x_abs;
  const double a = 0.5 * (n + args.alpha + args.s - 1.0);
  const double b = 0.5 * (args.alpha + args.s + 1.0);
  const double c = args.alpha + 0.5 * n;
  return prefactor(n, args.alpha) * hyp2f1(a, b, c, t, kDeepSeries);
}

double i_quadrature(int n, const IArgs& args, const RadialSplit& split) {
  validate_args(n, args);
  const double x = args.x_abs;
  const double c = n + args.alpha + args.s - 1.0;

  // orders follow the analyticity gap of the integrand: the radial profile is
  // singular at t = 1/|x|^2, the sphere factor at cos = (1+(r|x|)^2)/(2r|x|)
  int ro = split.radial_order;
  int so = split.sphere_order;
  if (x > 0.3) {
    const double dt = (1.0 - x * x) / (x * x);
    ro = std::max(ro, std::min(320, 24 + static_cast<int>(6.0 / std::sqrt(dt))));
    const double eta = -std::log(x);
    if (n == 2) {
      int want = 2 * (static_cast<int>(18.0 / eta) / 2 + 8);
      so = std::max(so, std::min(65536, want));
    } else if (n == 3) {
      so = std::max(so, std::min(512, static_cast<int>(9.0 / eta) + 16));
    } else {
      so = std::max(so, std::min(96, static_cast<int>(9.0 / eta) + 16));
    }
  }

  const QuadratureRule& sphere = cached_sphere_rule(n, so, 0);
  std::vector<double> tn, tw;
  gauss_jacobi_01(ro, args.alpha - 1.0, 0.5 * n - 1.0, tn, tw);

  std::vector<double> partial(tn.size());
  parallel_for(tn.size(), [&](std::size_t i) {
    const double r = std::sqrt(tn[i]);
    const double rr = r * r * x * x;
    NeumaierSum acc;
    for (std::size_t k = 0; k < sphere.size(); ++k) {
      const double xi1 = sphere.node(k)[0];
      const double b2 = std::max(1.0 - 2.0 * x * r * xi1 + rr, 1e-300);
      acc.add(sphere.weights[k] * std::pow(b2, -0.5 * c));
    }
    partial[i] = tw[i] * acc.value();
  });
  NeumaierSum total;
  for (double v : partial) total.add(v);
  const double front = std::pow(kPi, 0.5 * n) / std::exp(log_gamma(0.5 * n));
  const double value = front * total.value();
  if (!std::isfinite(value)) throw evaluation_error("bracket integral quadrature overflowed");
  return value;
}

LemmaConstants lemma1_constants(int n, double alpha, double s) {
  if (n < 2) throw domain_error("lemma constants: need n >= 2");
  if (alpha <= 0.0) throw domain_error("lemma constants: need alpha > 0");
  if (s >= 0.0) throw domain_error("lemma constants: no finite supremum for s >= 0");
  LemmaConstants lc;
  lc.min = prefactor(n, alpha);
  lc.max = std::pow(kPi, 0.5 * n) *
           std::exp(log_gamma(alpha) + log_gamma(-s) - log_gamma(0.5 * (alpha - s + 1.0)) -
                    log_gamma(0.5 * (n + alpha - s - 1.0)));
  return lc;
}

double sphere_identity_value(int n, double c, double x_abs) {
  if (n < 2) throw domain_error("sphere identity: need n >= 2");
  if (x_abs < 0.0 || x_abs >= 1.0) throw domain_error("sphere identity: need 0 <= |x| < 1");
  return hyp2f1(0.5 * c, 0.5 * (c - n) + 1.0, 0.5 * n, x_abs * x_abs, kDeepSeries);
}

double sphere_identity_residual(int n, double c, double x_abs, int sphere_order,
                                std::uint64_t seed) {
  const double closed = sphere_identity_value(n, c, x_abs);
  const QuadratureRule& rule = cached_sphere_rule(n, sphere_order, seed);
  NeumaierSum acc;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double d2 = std::max(1.0 - 2.0 * x_abs * rule.node(k)[0] + x_abs * x_abs, 1e-300);
    acc.add(rule.weights[k] * std::pow(d2, -0.5 * c));
  }
  return acc.value() - closed;
}

AsymptoticsReport asymptotics_probe(int n, double alpha, double s, int depth,
                                    bool use_quadrature, const RadialSplit& split) {
  if (depth < 5) throw domain_error("asymptotics probe: need depth >= 5");
  AsymptoticsReport rep;
  rep.n = n;
  rep.alpha = alpha;
  rep.s = s;
  rep.quadrature_primary = use_quadrature;

  for (int k = 3; k <= depth; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const IArgs args{alpha, s, std::sqrt(1.0 - eps)};
    double v;
    if (use_quadrature) {
      v = i_quadrature(n, args, split);
      try {
        const double closed = i_closed_form(n, args);
        rep.max_quad_residual =
            std::max(rep.max_quad_residual, std::fabs(v - closed) / std::fabs(closed));
      } catch (const truncation_error&) {
        // the closed form may refuse a deep logarithmic sample; the
        // quadrature value stands on its own there
      }
    } else {
      v = i_closed_form(n, args);
    }
    rep.eps.push_back(eps);
    rep.values.push_back(v);
  }

  const std::size_t cnt = rep.values.size();
  const double ln2 = std::log(2.0);
  if (std::fabs(s) < 1e-12) {
    rep.kind = BoundaryKind::logarithmic;
    // v ~ A log(1/eps) + B, successive differences approach A log 2
    double acc = 0.0;
    int used = 0;
    for (std::size_t i = cnt - std::min<std::size_t>(3, cnt - 1); i < cnt; ++i) {
      acc += rep.values[i] - rep.values[i - 1];
      ++used;
    }
    rep.fitted_rate = acc / (used * ln2);
  } else if (s > 0.0) {
    rep.kind = BoundaryKind::power;
    // v ~ eps^-s, consecutive log slopes approach s
    double acc = 0.0;
    int used = 0;
    for (std::size_t i = cnt - std::min<std::size_t>(3, cnt - 1); i < cnt; ++i) {
      acc += (std::log(rep.values[i]) - std::log(rep.values[i - 1])) / ln2;
      ++used;
    }
    rep.fitted_rate = acc / used;
  } else {
    rep.kind = BoundaryKind::bounded;
    // v -> C at rate eps^|s|; the difference ratio recovers |s| and then a
    // geometric tail extrapolates the limit
    double acc = 0.0;
    int used = 0;
    for (std::size_t i = cnt - std::min<std::size_t>(2, cnt - 2); i < cnt; ++i) {
      const double d1 = rep.values[i - 1] - rep.values[i - 2];
      const double d2 = rep.values[i] - rep.values[i - 1];
      if (d1 > 0.0 && d2 > 0.0) {
        acc += std::log(d1 / d2) / ln2;
        ++used;
      }
    }
    rep.fitted_rate = used > 0 ? acc / used : -s;
    const double q = std::pow(2.0, -rep.fitted_rate);
    const double dl = rep.values[cnt - 1] - rep.values[cnt - 2];
    rep.limit_value = rep.values[cnt - 1] + dl * q / (1.0 - q);
  }
  return rep;
}

std::string i_sweep_csv(int n, std::span<const double> alphas, std::span<const double> ss,
                        std::span<const double> xs, const RadialSplit& split) {
  std::string out = "# bracket integral sweep v1\n";
  out += "n,alpha,s,x_abs,closed,quad,residual\n";
  char line[256];
  for (double a : alphas)
    for (double s : ss)
      for (double x : xs) {
        const IArgs args{a, s, x};
        const double closed = i_closed_form(n, args);
        const double quad = i_quadrature(n, args, split);
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", n, a, s,
                      x, closed, quad, quad - closed);
        out += line;
      }
  return out;
}

}  // namespace besov
