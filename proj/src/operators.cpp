#include "besov/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "besov/integrals.hpp"
#include "besov/numerics.hpp"
#include "besov/specfun.hpp"
#include "besov/zonal.hpp"
#include "json.hpp"

namespace besov {

namespace {

constexpr double kPi = 3.14159265358979323846;

double c_alpha(int n, double alpha) {
  return std::exp(log_gamma(0.5 * n + alpha) - log_gamma(alpha)) / std::pow(kPi, 0.5 * n);
}

double sphere_area(int n) {
  return 2.0 * std::pow(kPi, 0.5 * n) / std::exp(log_gamma(0.5 * n));
}

std::string kind_tag(WitnessKind k) {
  switch (k) {
    case WitnessKind::radial_power: return "radial_power";
    case WitnessKind::zonal_power: return "zonal_power";
    default: return "random_smooth";
  }
}

double sq_norm(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return s;
}

// derivatives of (1-|x|^2)^a: a term list c * x^g * (1-|x|^2)^(a-drop)
struct RadialTerm {
  std::vector<int> g;
  int drop;
  double c;
};

std::vector<RadialTerm> radial_terms(int n, double a, std::span<const int> k) {
  std::map<std::pair<std::vector<int>, int>, double> cur;
  cur[{std::vector<int>(static_cast<std::size_t>(n), 0), 0}] = 1.0;
  for (int l = 0; l < n; ++l)
    for (int rep = 0; rep < k[static_cast<std::size_t>(l)]; ++rep) {
      std::map<std::pair<std::vector<int>, int>, double> next;
      for (const auto& [key, c] : cur) {
        const auto& [g, drop] = key;
        if (g[static_cast<std::size_t>(l)] >= 1) {
          auto g2 = g;
          g2[static_cast<std::size_t>(l)] -= 1;
          next[{g2, drop}] += c * g[static_cast<std::size_t>(l)];
        }
        auto g3 = g;
        g3[static_cast<std::size_t>(l)] += 1;
        next[{g3, drop + 1}] += c * (-2.0) * (a - drop);
      }
      cur = std::move(next);
    }
  std::vector<RadialTerm> out;
  out.reserve(cur.size());
  for (const auto& [key, c] : cur) out.push_back({key.first, key.second, c});
  return out;
}

double radial_power_partial(double a, std::span<const int> k, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  const double w = 1.0 - sq_norm(x);
  NeumaierSum acc;
  for (const RadialTerm& t : radial_terms(n, a, k)) {
    double v = t.c * std::pow(w, a - t.drop);
    for (int l = 0; l < n; ++l)
      for (int e = 0; e < t.g[static_cast<std::size_t>(l)]; ++e) v *= x[static_cast<std::size_t>(l)];
    acc.add(v);
  }
  return acc.value();
}

template <typename F>
void for_each_sub(std::span<const int> k, std::vector<int>& l, std::size_t pos, double mult,
                  F& fn) {
  if (pos == k.size()) {
    fn(l, mult);
    return;
  }
  for (int v = 0; v <= k[pos]; ++v) {
    l[pos] = v;
    for_each_sub(k, l, pos + 1, mult * binomial(double(k[pos]), double(v)), fn);
  }
}

void check_candidate(const Params& pr, const TestFunction& f) {
  if (static_cast<int>(f.pole.size()) != pr.n)
    throw domain_error("candidate pole dimension does not match");
  if (!(f.boost > 0.0)) throw domain_error("candidate boost must be positive");
  if (f.degree < 0) throw domain_error("candidate degree must be nonnegative");
}

}  // namespace

double eval_test_function(const TestFunction& f, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  double v = f.coef * std::pow(1.0 - sq_norm(x), f.boost);
  if (f.degree > 0) v *= zonal(n, f.degree, x, f.pole);
  return v;
}

double test_function_partial(const TestFunction& f, std::span<const int> k,
                             std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> l(k.size(), 0);
  std::vector<int> rest(k.size(), 0);
  NeumaierSum acc;
  auto visit = [&](const std::vector<int>& low, double mult) {
    for (std::size_t i = 0; i < k.size(); ++i) rest[i] = k[i] - low[i];
    const double zf = zonal_partial(n, f.degree, low, x, f.pole);
    if (zf == 0.0) return;
    acc.add(mult * zf * radial_power_partial(f.boost, rest, x));
  };
  for_each_sub(k, l, 0, 1.0, visit);
  return f.coef * acc.value();
}

TestFunction make_psi_witness(const Params& pr) {
  pr.validate();
  const double pma = pr.p * (pr.m + pr.alpha);
  const double radial_moment =
      std::pow(kPi, 0.5 * pr.n) *
      std::exp(log_gamma(pma + 1.0) - log_gamma(pma + 0.5 * pr.n + 1.0));
  TestFunction f;
  f.kind = WitnessKind::radial_power;
  f.degree = 0;
  f.pole.assign(static_cast<std::size_t>(pr.n), 0.0);
  f.pole[0] = 1.0;
  f.boost = pr.m + pr.alpha + pr.n / pr.p;
  f.coef = std::pow(radial_moment, -1.0 / pr.p);
  f.id = 0;
  return f;
}

TestFunction make_f_witness(const Params& pr) {
  pr.validate();
  const double c_norm =
      std::pow(pr.n * sphere_area(pr.n) / (pr.n + pr.m - 1.0), 1.0 / pr.p) *
      double(dim_harmonic(pr.n, pr.m));
  TestFunction f;
  f.kind = WitnessKind::zonal_power;
  f.degree = pr.m;
  f.pole.assign(static_cast<std::size_t>(pr.n), 0.0);
  f.pole[0] = 1.0;
  f.boost = pr.n / pr.p;
  f.coef = 1.0 / c_norm;
  f.id = 0;
  return f;
}

TestFunction make_random_candidate(const Params& pr, std::uint64_t id, std::uint64_t seed) {
  pr.validate();
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + id * 0x517cc1b727220a95ULL + 1);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  TestFunction f;
  f.kind = WitnessKind::random_smooth;
  f.degree = static_cast<int>(rng() % 4);
  f.pole.resize(static_cast<std::size_t>(pr.n));
  double nn = 0.0;
  for (double& c : f.pole) {
    c = gauss(rng);
    nn += c * c;
  }
  for (double& c : f.pole) c /= std::sqrt(nn);
  f.boost = (pr.n - 1.0) / pr.p + 0.3 + 1.2 * unif(rng);
  f.coef = 0.5 + unif(rng);
  f.id = id;
  return f;
}

double apply_T(const Params& pr, const TestFunction& f, std::span<const double> x,
               const RadialSplit& inner, std::uint64_t seed) {
  pr.validate();
  check_candidate(pr, f);
  const double cexp = pr.n + pr.alpha + pr.m - 1.0;
  const QuadratureRule& rule =
      cached_ball_rule(pr.n, inner, Measure::weighted(pr.alpha), seed);
  return integrate(rule, [&](std::span<const double> y) {
    return eval_test_function(f, y) * std::pow(bracket(x, y), -cexp);
  });
}

double t_image_radial_closed(const Params& pr, const TestFunction& f, double x_abs) {
  pr.validate();
  if (f.degree != 0) throw domain_error("closed bracket image needs a radial candidate");
  const double a = f.boost;
  return c_alpha(pr.n, pr.alpha) * f.coef *
         i_closed_form(pr.n, {a + pr.alpha, pr.m - a, x_abs});
}

namespace {

struct InnerData {
  const QuadratureRule* rule = nullptr;
  std::vector<double> fw;  // node weight times candidate value
  int fdeg = 0;
  double mass = 0.0;  // sum of |fw|, the natural scale of any projected value
};

InnerData make_inner(const Params& pr, const TestFunction& f, const OperatorConfig& cfg) {
  InnerData in;
  in.rule = &cached_ball_rule(pr.n, cfg.inner, Measure::weighted(pr.alpha), cfg.seed);
  in.fw.resize(in.rule->size());
  for (std::size_t i = 0; i < in.fw.size(); ++i) {
    in.fw[i] = in.rule->weights[i] * eval_test_function(f, in.rule->node(i));
    in.mass += std::fabs(in.fw[i]);
  }
  in.fdeg = f.degree;
  return in;
}

// degree-by-degree projection jets at one outer point: each kernel degree is
// integrated against the candidate before the next one starts, so the stop
// rule sees fully integrated terms, and sphere-rule orthogonality kills every
// degree beyond the candidate's a few steps in
std::vector<double> projection_jets(const KernelSeries& ker, const JetPlan& plan,
                                    std::span<const int> positions,
                                    std::span<const double> x, const InnerData& in,
                                    double rel_tol) {
  const std::size_t nn = in.rule->size();
  std::vector<ZonalJetStream> streams;
  streams.reserve(nn);
  for (std::size_t i = 0; i < nn; ++i) streams.emplace_back(plan, x, in.rule->node(i));

  const int so = in.rule->split.sphere_order;
  const int exact_sphere = plan.n == 3 ? 2 * so - 1 : so - 1;
  const int allowed = std::min({exact_sphere - in.fdeg,
                                4 * in.rule->split.radial_order - 2 - in.fdeg,
                                ker.degree_cap});

  std::vector<NeumaierSum> acc(positions.size());
  int quiet = 0;
  for (int d = 0;; ++d) {
    double step = 0.0, scale = 0.0;
    for (std::size_t p = 0; p < positions.size(); ++p) {
      NeumaierSum node_sum;
      for (std::size_t i = 0; i < nn; ++i)
        node_sum.add(in.fw[i] *
                     streams[i].values()[static_cast<std::size_t>(positions[p])]);
      const double delta = ker.coef[static_cast<std::size_t>(d)] * node_sum.value();
      acc[p].add(delta);
      step = std::max(step, std::fabs(delta));
      scale = std::max(scale, std::fabs(acc[p].value()));
    }
    if (d > std::max(in.fdeg, plan.m)) {
      // the mass floor keeps the stop rule alive where the image itself
      // vanishes (zonal images are zero on the pole's equator)
      quiet = step <= rel_tol * std::max({scale, in.mass, 1e-300}) ? quiet + 1 : 0;
      if (quiet >= 3) break;
    }
    if (d + 1 > allowed)
      throw truncation_error("projection degree sweep did not settle", step, -1.0, d + 1);
    for (auto& s : streams) s.advance();
  }
  std::vector<double> out(positions.size());
  for (std::size_t p = 0; p < positions.size(); ++p) out[p] = acc[p].value();
  return out;
}

}  // namespace

double apply_P(const Params& pr, const TestFunction& f, std::span<const double> x,
               const OperatorConfig& cfg) {
  pr.validate();
  check_candidate(pr, f);
  const KernelSeries ker = make_kernel(pr.n, pr.alpha, cfg.degree_cap, cfg.rel_tol);
  const JetPlan& plan = jet_plan(pr.n, 0);
  const InnerData in = make_inner(pr, f, cfg);
  const int pos0 = 0;
  return projection_jets(ker, plan, std::span<const int>(&pos0, 1), x, in, cfg.rel_tol)[0];
}

std::vector<double> projection_partials(const Params& pr, const TestFunction& f,
                                        std::span<const double> x,
                                        const OperatorConfig& cfg) {
  pr.validate();
  check_candidate(pr, f);
  const KernelSeries ker = make_kernel(pr.n, pr.alpha, cfg.degree_cap, cfg.rel_tol);
  const JetPlan& plan = jet_plan(pr.n, pr.m);
  const InnerData in = make_inner(pr, f, cfg);
  return projection_jets(ker, plan, plan.top, x, in, cfg.rel_tol);
}

double t_image_lp_norm(const Params& pr, const TestFunction& f, const OperatorConfig& cfg) {
  pr.validate();
  check_candidate(pr, f);
  if (!pr.admissible()) throw domain_error("image norm: order too small for p, n");
  const double beta = pr.p * pr.m - pr.n;

  if (f.degree == 0) {
    // radial candidate: image is the closed-form profile, one radial rule
    std::vector<double> tn, tw;
    gauss_jacobi_01(cfg.outer.radial_order, beta, 0.5 * pr.n - 1.0, tn, tw);
    std::vector<double> partial(tn.size());
    parallel_for(tn.size(), [&](std::size_t i) {
      const double g = t_image_radial_closed(pr, f, std::sqrt(tn[i]));
      partial[i] = tw[i] * std::pow(std::fabs(g), pr.p);
    });
    NeumaierSum acc;
    for (double v : partial) acc.add(v);
    const double front = std::pow(kPi, 0.5 * pr.n) / std::exp(log_gamma(0.5 * pr.n));
    return std::pow(front * acc.value(), 1.0 / pr.p);
  }

  const QuadratureRule& outer =
      cached_ball_rule(pr.n, cfg.outer, Measure::power(beta), cfg.seed);
  std::vector<double> partial(outer.size());
  parallel_for(outer.size(), [&](std::size_t j) {
    const double v = apply_T(pr, f, outer.node(j), cfg.inner, cfg.seed);
    partial[j] = outer.weights[j] * std::pow(std::fabs(v), pr.p);
  });
  NeumaierSum acc;
  for (double v : partial) acc.add(v);
  return std::pow(acc.value(), 1.0 / pr.p);
}

double besov_norm_of_image(const Params& pr, const TestFunction& f,
                           const OperatorConfig& cfg) {
  pr.validate();
  check_candidate(pr, f);
  if (!pr.admissible()) throw domain_error("seminorm: order too small for p, n");
  const double beta = pr.p * pr.m - pr.n;
  const KernelSeries ker = make_kernel(pr.n, pr.alpha, cfg.degree_cap, cfg.rel_tol);
  const JetPlan& plan = jet_plan(pr.n, pr.m);
  const InnerData in = make_inner(pr, f, cfg);
  const QuadratureRule& outer =
      cached_ball_rule(pr.n, cfg.outer, Measure::power(beta), cfg.seed);

  std::vector<double> partial(outer.size());
  parallel_for(outer.size(), [&](std::size_t j) {
    const std::vector<double> jets =
        projection_jets(ker, plan, plan.top, outer.node(j), in, cfg.rel_tol);
    double l1 = 0.0;
    for (double v : jets) l1 += std::fabs(v);
    partial[j] = outer.weights[j] * std::pow(l1, pr.p);
  });
  NeumaierSum acc;
  for (double v : partial) acc.add(v);
  return std::pow(acc.value(), 1.0 / pr.p);
}

double dirichlet_inner_product(const Params& pr, const TestFunction& f,
                               const TestFunction& g, const RadialSplit& split,
                               std::uint64_t seed) {
  pr.validate();
  check_candidate(pr, f);
  check_candidate(pr, g);
  if (!(2.0 * pr.m - pr.n > -1.0))
    throw domain_error("dirichlet product: need 2m > n - 1");
  const QuadratureRule& rule =
      cached_ball_rule(pr.n, split, Measure::power(2.0 * pr.m - pr.n), seed);
  const auto ks = multi_indices(pr.n, pr.m);
  return integrate(rule, [&](std::span<const double> x) {
    double s = 0.0;
    for (const auto& k : ks)
      s += test_function_partial(f, k, x) * test_function_partial(g, k, x);
    return s;
  });
}

double candidate_domain_norm(const Params& pr, const TestFunction& f,
                             const RadialSplit& split, std::uint64_t seed) {
  pr.validate();
  check_candidate(pr, f);
  return tau_lp_norm(
      pr.n, split,
      [&](std::span<const double> x) {
        return f.degree > 0 ? f.coef * zonal(pr.n, f.degree, x, f.pole) : f.coef;
      },
      pr.p, f.boost, seed);
}

namespace {

OperatorConfig refined(const OperatorConfig& cfg) {
  OperatorConfig r = cfg;
  r.outer.radial_order = cfg.outer.radial_order * 3 / 2;
  r.outer.sphere_order = cfg.outer.sphere_order * 3 / 2;
  r.inner.radial_order = cfg.inner.radial_order * 3 / 2;
  r.inner.sphere_order = cfg.inner.sphere_order * 3 / 2;
  return r;
}

FindingRow row(std::string what, double lhs, double rhs) {
  return {std::move(what), lhs, rhs, lhs <= rhs * (1.0 + 1e-12) + 1e-300};
}

}  // namespace

NormBracket bracket_T_norm(const Params& pr, const OperatorConfig& cfg) {
  pr.validate();
  NormBracket nb;
  nb.params = pr;
  nb.operator_name = "bracket_transform";
  nb.seed = cfg.seed;
  nb.config = cfg;

  const auto lowers = lower_T_constants(pr);
  nb.lower_paper = {{"displayed", lowers[0].displayed},
                    {"proof_chain", lowers[1].displayed},
                    {"certified", lowers[2].displayed}};
  const auto schur = schur_constants(pr);
  nb.upper_paper = {{"d", schur[1].displayed},
                    {"dtilde", schur[0].displayed},
                    {"chain", schur[0].proof_assembled}};

  std::vector<TestFunction> cands{make_psi_witness(pr)};
  for (int t = 0; t < cfg.trials; ++t)
    cands.push_back(make_random_candidate(pr, std::uint64_t(t) + 1, cfg.seed));

  for (const TestFunction& f : cands) {
    WitnessRecord rec;
    rec.kind = kind_tag(f.kind);
    rec.id = f.id;
    rec.image_norm = t_image_lp_norm(pr, f, cfg);
    rec.domain_norm = candidate_domain_norm(pr, f, cfg.outer, cfg.seed);
    rec.ratio = rec.image_norm / rec.domain_norm;
    nb.witnesses.push_back(rec);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < nb.witnesses.size(); ++i)
    if (nb.witnesses[i].ratio > nb.witnesses[best].ratio) best = i;
  nb.lower_empirical = nb.witnesses[best].ratio;

  const OperatorConfig fine = refined(cfg);
  const double again = t_image_lp_norm(pr, cands[best], fine) /
                       candidate_domain_norm(pr, cands[best], fine.outer, cfg.seed);
  nb.quad_error_raw = std::fabs(nb.lower_empirical - again) /
                      std::max(nb.lower_empirical, again);
  nb.quad_error_safe = 4.0 * nb.quad_error_raw + 1e-12;

  const double margin = nb.lower_empirical * nb.quad_error_safe;
  const double psi_ratio = nb.witnesses[0].ratio;
  nb.findings.push_back(
      row("lower_displayed <= upper_displayed", nb.lower_paper["displayed"],
          nb.upper_paper["d"]));
  nb.findings.push_back(row("lower_proof_chain <= upper_displayed",
                            nb.lower_paper["proof_chain"], nb.upper_paper["d"]));
  nb.findings.push_back(
      row("radial_witness_ratio <= upper_displayed", psi_ratio, nb.upper_paper["d"]));
  nb.findings.push_back(
      row("radial_witness_ratio <= upper_chain", psi_ratio, nb.upper_paper["chain"]));
  nb.findings.push_back(row("lower_certified <= empirical + margin",
                            nb.lower_paper["certified"], nb.lower_empirical + margin));
  nb.findings.push_back(
      row("dtilde <= d", nb.upper_paper["dtilde"], nb.upper_paper["d"]));
  return nb;
}

NormBracket bracket_P_norm(const Params& pr, const OperatorConfig& cfg) {
  pr.validate();
  NormBracket nb;
  nb.params = pr;
  nb.operator_name = "projection";
  nb.seed = cfg.seed;
  nb.config = cfg;

  const ConstantReport low = lower_P_constants(pr);
  nb.lower_paper = {{"displayed", low.displayed},
                    {"proof_chain", low.proof_assembled},
                    {"corrected", low.extras.at("corrected")}};
  const double d_const = schur_constants(pr)[1].displayed;
  const double binom_block = binomial(double(pr.m + pr.n - 1), double(pr.m));
  const KernelSeries ker = make_kernel(pr.n, pr.alpha, cfg.degree_cap, cfg.rel_tol);
  GrowthProbe probe;
  probe.samples = 100;
  probe.seed = cfg.seed;
  const GrowthEstimate growth = estimate_growth_constant(ker, pr.m, probe);
  nb.upper_paper = {{"schur_d", d_const},
                    {"conjectured", binom_block * d_const},
                    {"growth_constant", growth.constant},
                    {"with_growth", growth.constant * binom_block * d_const}};

  std::vector<TestFunction> cands{make_f_witness(pr)};
  for (int t = 0; t < cfg.trials; ++t)
    cands.push_back(make_random_candidate(pr, std::uint64_t(t) + 1, cfg.seed));

  for (const TestFunction& f : cands) {
    WitnessRecord rec;
    rec.kind = kind_tag(f.kind);
    rec.id = f.id;
    rec.image_norm = besov_norm_of_image(pr, f, cfg);
    rec.domain_norm = candidate_domain_norm(pr, f, cfg.outer, cfg.seed);
    rec.ratio = rec.image_norm / rec.domain_norm;
    nb.witnesses.push_back(rec);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < nb.witnesses.size(); ++i)
    if (nb.witnesses[i].ratio > nb.witnesses[best].ratio) best = i;
  nb.lower_empirical = nb.witnesses[best].ratio;
  nb.conjecture_ratio = nb.lower_empirical / nb.upper_paper["conjectured"];

  const double witness_seminorm = nb.witnesses[0].image_norm;
  const OperatorConfig fine = refined(cfg);
  const double again = besov_norm_of_image(pr, cands[0], fine);
  nb.quad_error_raw =
      std::fabs(witness_seminorm - again) / std::max(witness_seminorm, again);
  nb.quad_error_safe = 4.0 * nb.quad_error_raw + 1e-12;

  const double corrected = nb.lower_paper["corrected"];
  nb.findings.push_back(row("witness_seminorm_matches_corrected_rel_gap",
                            std::fabs(witness_seminorm - corrected) / corrected, 1e-3));
  nb.findings.push_back(
      row("proof_chain_understates_by_pi_sqrt2_rel_gap",
          std::fabs(witness_seminorm / nb.lower_paper["proof_chain"] -
                    kPi * std::sqrt(2.0)) /
              (kPi * std::sqrt(2.0)),
          1e-3));
  nb.findings.push_back(row("lower_displayed <= empirical_ratio",
                            nb.lower_paper["displayed"], nb.lower_empirical));
  nb.findings.push_back(row("empirical_ratio <= conjectured_upper", nb.lower_empirical,
                            nb.upper_paper["conjectured"]));
  return nb;
}

std::string bracket_to_json(const NormBracket& nb) {
  nlohmann::json j;
  j["operator"] = nb.operator_name;
  j["params"] = {{"n", nb.params.n},
                 {"alpha", nb.params.alpha},
                 {"p", nb.params.p},
                 {"m", nb.params.m}};
  j["lower_paper"] = nb.lower_paper;
  j["lower_empirical"] = nb.lower_empirical;
  j["upper_paper"] = nb.upper_paper;
  nlohmann::json ws = nlohmann::json::array();
  for (const WitnessRecord& w : nb.witnesses)
    ws.push_back({{"kind", w.kind},
                  {"id", w.id},
                  {"image_norm", w.image_norm},
                  {"domain_norm", w.domain_norm},
                  {"ratio", w.ratio}});
  j["witnesses"] = ws;
  nlohmann::json fs = nlohmann::json::array();
  for (const FindingRow& r : nb.findings)
    fs.push_back({{"inequality", r.inequality}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ok", r.ok}});
  j["findings"] = fs;
  j["quad_error"] = {{"raw", nb.quad_error_raw}, {"safe", nb.quad_error_safe}};
  if (nb.operator_name == "projection") j["conjecture_ratio"] = nb.conjecture_ratio;
  j["seed"] = nb.seed;
  j["config"] = {{"outer_radial", nb.config.outer.radial_order},
                 {"outer_sphere", nb.config.outer.sphere_order},
                 {"inner_radial", nb.config.inner.radial_order},
                 {"inner_sphere", nb.config.inner.sphere_order},
                 {"degree_cap", nb.config.degree_cap},
                 {"rel_tol", nb.config.rel_tol},
                 {"trials", nb.config.trials}};
  return j.dump(2);
}

}  // namespace besov
