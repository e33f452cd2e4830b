#include "besov/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <utility>

#include "besov/numerics.hpp"
#include "besov/specfun.hpp"
#include "json.hpp"

namespace besov {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sphere_area(int n) {  // |S^(n-1)| = n |B_n|
  return 2.0 * std::pow(kPi, 0.5 * n) / std::exp(log_gamma(0.5 * n));
}

double c_alpha(int n, double alpha) {
  // normalizer of dv_alpha; equals Gamma(n/2+alpha) / (pi^(n/2) Gamma(alpha))
  return std::exp(log_gamma(0.5 * n + alpha) - log_gamma(alpha)) / std::pow(kPi, 0.5 * n);
}

// Gauss-Jacobi on [-1,1] for (1-x)^a (1+x)^b via Golub-Welsch.
void jacobi_m11(int order, double a, double b, std::vector<double>& nodes,
                std::vector<double>& weights) {
  if (order < 1) throw domain_error("quadrature order must be >= 1");
  if (a <= -1.0 || b <= -1.0) throw domain_error("Jacobi exponents must be > -1");
  const int N = order;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  const double ab = a + b;
  for (int k = 0; k < N; ++k) {
    double diag;
    if (k == 0)
      diag = (b - a) / (ab + 2.0);
    else
      diag = (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0));
    J(k, k) = diag;
    if (k + 1 < N) {
      double beta;
      if (k == 0)
        beta = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
      else {
        const double kk = k + 1.0;  // recurrence index of the off-diagonal entry
        beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) /
               ((2.0 * kk + ab) * (2.0 * kk + ab) * (2.0 * kk + ab + 1.0) *
                (2.0 * kk + ab - 1.0));
      }
      J(k, k + 1) = J(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw evaluation_error("Jacobi eigensolve failed");
  const double mu0 = std::pow(2.0, ab + 1.0) *
                     std::exp(log_gamma(a + 1.0) + log_gamma(b + 1.0) - log_gamma(ab + 2.0));
  nodes.resize(static_cast<std::size_t>(N));
  weights.resize(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
}

Eigen::MatrixXd seeded_rotation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  if (Q.determinant() < 0.0) Q.col(n - 1) *= -1.0;
  return Q;
}

std::string scheme_tag(RadialScheme s) {
  return s == RadialScheme::gauss_jacobi ? "gauss_jacobi" : "clustered_legendre";
}

}  // namespace

std::string measure_tag(const Measure& m) {
  char buf[64];
  switch (m.kind) {
    case MeasureKind::lebesgue:
      return "lebesgue";
    case MeasureKind::dv_alpha:
      std::snprintf(buf, sizeof buf, "dv_alpha(%.17g)", m.param);
      return buf;
    case MeasureKind::dv_beta:
      std::snprintf(buf, sizeof buf, "dv_beta(%.17g)", m.param);
      return buf;
    case MeasureKind::tau:
      return "tau";
    case MeasureKind::sphere:
      return "sphere";
  }
  return "?";
}

void gauss_jacobi_01(int order, double a, double b, std::vector<double>& nodes,
                     std::vector<double>& weights) {
  // t = (1+x)/2 sends (1-x)^a (1+x)^b dx to 2^(a+b+1) (1-t)^a t^b dt
  jacobi_m11(order, a, b, nodes, weights);
  const double scale = std::pow(2.0, -(a + b + 1.0));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = 0.5 * (1.0 + nodes[i]);
    weights[i] *= scale;
  }
}

QuadratureRule build_sphere_rule(int n, int order, std::uint64_t seed) {
  if (n < 2) throw domain_error("sphere rule needs n >= 2");
  if (order < 1) throw domain_error("sphere order must be >= 1");
  QuadratureRule rule;
  rule.n = n;
  rule.measure = Measure::sphere();
  rule.split.sphere_order = order;
  rule.seed = seed;

  if (n == 2) {
    int ns = order % 2 == 0 ? order : order + 1;  // even count keeps -x in the rule
    rule.points.reserve(static_cast<std::size_t>(ns) * 2);
    rule.weights.assign(static_cast<std::size_t>(ns), 1.0 / ns);
    for (int i = 0; i < ns; ++i) {
      const double th = 2.0 * kPi * i / ns;
      rule.points.push_back(std::cos(th));
      rule.points.push_back(std::sin(th));
    }
    return rule;
  }

  // latitude z with weight (1-z^2)^((n-3)/2) on [-1,1]
  std::vector<double> zn, zw;
  const double a = 0.5 * (n - 3);
  jacobi_m11(order, a, a, zn, zw);
  double zmass = 0.0;
  for (double w : zw) zmass += w;

  if (n == 3) {
    const int nphi = 2 * order;
    rule.points.reserve(static_cast<std::size_t>(order) * nphi * 3);
    rule.weights.reserve(static_cast<std::size_t>(order) * nphi);
    for (int l = 0; l < order; ++l) {
      const double z = zn[static_cast<std::size_t>(l)];
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double wl = zw[static_cast<std::size_t>(l)] / zmass / nphi;
      for (int m = 0; m < nphi; ++m) {
        const double ph = 2.0 * kPi * m / nphi;
        rule.points.push_back(s * std::cos(ph));
        rule.points.push_back(s * std::sin(ph));
        rule.points.push_back(z);
        rule.weights.push_back(wl);
      }
    }
    return rule;
  }

  // n >= 4: stack latitudes on a recursive S^(n-2) rule, then average over
  // seeded rotations to decouple the result from the recursion axes.
  QuadratureRule sub = build_sphere_rule(n - 1, order, seed * 0x9e3779b97f4a7c15ULL + 1);
  const int rot_count = 4;
  std::vector<Eigen::MatrixXd> rots;
  for (int r = 0; r < rot_count; ++r)
    rots.push_back(seeded_rotation(n, seed * 1000003ULL + 17ULL * static_cast<std::uint64_t>(r) +
                                          static_cast<std::uint64_t>(n)));
  Eigen::VectorXd raw(n), out(n);
  for (int l = 0; l < order; ++l) {
    const double z = zn[static_cast<std::size_t>(l)];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double wl = zw[static_cast<std::size_t>(l)] / zmass;
    for (std::size_t i = 0; i < sub.size(); ++i) {
      auto xi = sub.node(i);
      for (int c = 0; c < n - 1; ++c) raw(c) = s * xi[static_cast<std::size_t>(c)];
      raw(n - 1) = z;
      const double w = wl * sub.weights[i] / rot_count;
      for (const auto& Q : rots) {
        out = Q * raw;
        for (int c = 0; c < n; ++c) rule.points.push_back(out(c));
        rule.weights.push_back(w);
      }
    }
  }
  return rule;
}

QuadratureRule build_ball_rule(int n, const RadialSplit& split, const Measure& measure,
                               std::uint64_t seed) {
  if (n < 2) throw domain_error("ball rule needs n >= 2");
  double gamma = 0.0;
  double norm = 1.0;
  switch (measure.kind) {
    case MeasureKind::lebesgue:
      break;
    case MeasureKind::dv_alpha:
      if (measure.param <= 0.0) throw domain_error("dv_alpha needs alpha > 0");
      gamma = measure.param - 1.0;
      norm = c_alpha(n, measure.param);
      break;
    case MeasureKind::dv_beta:
      gamma = measure.param;
      if (gamma <= -1.0) throw domain_error("dv_beta weight is not integrable");
      break;
    case MeasureKind::tau:
      throw domain_error(
          "tau has infinite mass and no quadrature rule; integrate through tau_lp_norm");
    case MeasureKind::sphere:
      throw domain_error("use build_sphere_rule for the sphere");
  }

  QuadratureRule sph = build_sphere_rule(n, split.sphere_order, seed);
  QuadratureRule rule;
  rule.n = n;
  rule.measure = measure;
  rule.split = split;
  rule.seed = seed;

  std::vector<double> rs, rw;  // radius and full radial factor per node
  if (split.scheme == RadialScheme::gauss_jacobi) {
    // t = r^2:  int_B f w dv = (|S^(n-1)|/2) int_0^1 (1-t)^gamma t^(n/2-1) f dt dsigma
    std::vector<double> tn, tw;
    gauss_jacobi_01(split.radial_order, gamma, 0.5 * n - 1.0, tn, tw);
    const double front = norm * 0.5 * sphere_area(n);
    for (std::size_t i = 0; i < tn.size(); ++i) {
      rs.push_back(std::sqrt(tn[i]));
      rw.push_back(front * tw[i]);
    }
  } else {
    // r = 1 - (1-u)^kappa pushes Legendre nodes toward the boundary; the
    // radial weight is left in the integrand, so gamma <= 0 loses accuracy.
    const double kap = split.clustering_kappa;
    if (kap < 1.0) throw domain_error("clustering_kappa must be >= 1");
    std::vector<double> un, uw;
    gauss_jacobi_01(split.radial_order, 0.0, 0.0, un, uw);
    const double front = norm * sphere_area(n);
    for (std::size_t i = 0; i < un.size(); ++i) {
      const double om = 1.0 - un[i];  // 1 - u
      const double r = 1.0 - std::pow(om, kap);
      const double jac = kap * std::pow(om, kap - 1.0);
      rs.push_back(r);
      rw.push_back(front * uw[i] * jac * std::pow(1.0 - r * r, gamma) *
                   std::pow(r, double(n - 1)));
    }
  }

  rule.points.reserve(rs.size() * sph.size() * static_cast<std::size_t>(n));
  rule.weights.reserve(rs.size() * sph.size());
  for (std::size_t a = 0; a < rs.size(); ++a) {
    for (std::size_t b = 0; b < sph.size(); ++b) {
      auto xi = sph.node(b);
      for (int c = 0; c < n; ++c) rule.points.push_back(rs[a] * xi[static_cast<std::size_t>(c)]);
      rule.weights.push_back(rw[a] * sph.weights[b]);
    }
  }
  return rule;
}

namespace {

std::mutex cache_mutex;
std::map<std::string, std::unique_ptr<QuadratureRule>> rule_cache;

std::string ball_key(int n, const RadialSplit& s, const Measure& m, std::uint64_t seed) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "ball|n=%d|ro=%d|so=%d|k=%.17g|sch=%s|m=%s|seed=%llu", n,
                s.radial_order, s.sphere_order, s.clustering_kappa, scheme_tag(s.scheme).c_str(),
                measure_tag(m).c_str(), static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace

const QuadratureRule& cached_ball_rule(int n, const RadialSplit& split, const Measure& measure,
                                       std::uint64_t seed) {
  const std::string key = ball_key(n, split, measure, seed);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = rule_cache.find(key);
  if (it == rule_cache.end())
    it = rule_cache
             .emplace(key, std::make_unique<QuadratureRule>(
                               build_ball_rule(n, split, measure, seed)))
             .first;
  return *it->second;
}

const QuadratureRule& cached_sphere_rule(int n, int order, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "sphere|n=%d|so=%d|seed=%llu", n, order,
                static_cast<unsigned long long>(seed));
  const std::string key = buf;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = rule_cache.find(key);
  if (it == rule_cache.end())
    it = rule_cache
             .emplace(key, std::make_unique<QuadratureRule>(build_sphere_rule(n, order, seed)))
             .first;
  return *it->second;
}

double integrate(const QuadratureRule& rule, const Integrand& f) {
  return chunked_sum(rule.size(), [&](std::size_t i) {
    const double v = f(rule.node(i));
    if (!std::isfinite(v)) throw evaluation_error("integrand not finite at a quadrature node");
    return rule.weights[i] * v;
  });
}

double lp_norm(const QuadratureRule& rule, const Integrand& f, double p) {
  if (p < 1.0) throw domain_error("lp_norm needs p >= 1");
  const double s =
      integrate(rule, [&](std::span<const double> x) { return std::pow(std::fabs(f(x)), p); });
  return std::pow(std::max(s, 0.0), 1.0 / p);
}

double tau_lp_norm(int n, const RadialSplit& split, const Integrand& g, double p, double decay,
                   std::uint64_t seed) {
  if (p < 1.0) throw domain_error("tau_lp_norm needs p >= 1");
  const double beta = p * decay - n;
  if (beta <= -1.0)
    throw domain_error("tau_lp_norm: p*decay - n <= -1, the profile is not tau-integrable");
  const QuadratureRule& rule = cached_ball_rule(n, split, Measure::power(beta), seed);
  return lp_norm(rule, g, p);
}

double besov_seminorm(const Params& params, const PartialEvaluator& partials,
                      const RadialSplit& split, std::uint64_t seed) {
  params.validate();
  if (!params.admissible())
    throw domain_error("besov_seminorm: p*m - n <= -1, seminorm weight not integrable");
  const double beta = params.p * params.m - params.n;
  const QuadratureRule& rule =
      cached_ball_rule(params.n, split, Measure::power(beta), seed);
  const auto ks = multi_indices(params.n, params.m);
  const double s = integrate(rule, [&](std::span<const double> x) {
    NeumaierSum acc;
    for (const auto& k : ks) acc.add(std::fabs(partials(k, x)));
    return std::pow(acc.value(), params.p);
  });
  return std::pow(std::max(s, 0.0), 1.0 / params.p);
}

std::string rule_to_json(const QuadratureRule& rule) {
  nlohmann::json j;
  j["version"] = 1;
  j["n"] = rule.n;
  switch (rule.measure.kind) {
    case MeasureKind::lebesgue: j["kind"] = "lebesgue"; break;
    case MeasureKind::dv_alpha: j["kind"] = "dv_alpha"; break;
    case MeasureKind::dv_beta: j["kind"] = "dv_beta"; break;
    case MeasureKind::tau: j["kind"] = "tau"; break;
    case MeasureKind::sphere: j["kind"] = "sphere"; break;
  }
  j["param"] = rule.measure.param;
  j["seed"] = rule.seed;
  j["radial_order"] = rule.split.radial_order;
  j["sphere_order"] = rule.split.sphere_order;
  j["clustering_kappa"] = rule.split.clustering_kappa;
  j["scheme"] = scheme_tag(rule.split.scheme);
  j["points"] = rule.points;
  j["weights"] = rule.weights;
  return j.dump();
}

QuadratureRule rule_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw domain_error("rule_from_json: unsupported version");
  QuadratureRule rule;
  rule.n = j["n"].get<int>();
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "lebesgue")
    rule.measure.kind = MeasureKind::lebesgue;
  else if (kind == "dv_alpha")
    rule.measure.kind = MeasureKind::dv_alpha;
  else if (kind == "dv_beta")
    rule.measure.kind = MeasureKind::dv_beta;
  else if (kind == "tau")
    rule.measure.kind = MeasureKind::tau;
  else if (kind == "sphere")
    rule.measure.kind = MeasureKind::sphere;
  else
    throw domain_error("rule_from_json: unknown measure kind");
  rule.measure.param = j["param"].get<double>();
  rule.seed = j["seed"].get<std::uint64_t>();
  rule.split.radial_order = j["radial_order"].get<int>();
  rule.split.sphere_order = j["sphere_order"].get<int>();
  rule.split.clustering_kappa = j["clustering_kappa"].get<double>();
  rule.split.scheme = j["scheme"].get<std::string>() == "clustered_legendre"
                          ? RadialScheme::clustered_legendre
                          : RadialScheme::gauss_jacobi;
  rule.points = j["points"].get<std::vector<double>>();
  rule.weights = j["weights"].get<std::vector<double>>();
  if (rule.points.size() != rule.weights.size() * static_cast<std::size_t>(rule.n))
    throw domain_error("rule_from_json: node/weight size mismatch");
  return rule;
}

}  // namespace besov
