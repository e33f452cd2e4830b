#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "besov/errors.hpp"
#include "besov/params.hpp"

namespace besov {

// Measures on the unit ball (and its boundary sphere) that rules can carry.
//   lebesgue      dv
//   dv_alpha      c_alpha (1-|x|^2)^(alpha-1) dv, normalized mass 1
//   dv_beta       (1-|x|^2)^beta dv, no normalization
//   tau           (1-|x|^2)^(-n) dv; infinite mass, never materialized
//   sphere        normalized surface measure sigma
enum class MeasureKind { lebesgue, dv_alpha, dv_beta, tau, sphere };

struct Measure {
  MeasureKind kind = MeasureKind::lebesgue;
  double param = 0.0;  // alpha for dv_alpha, beta for dv_beta

  static Measure lebesgue() { return {MeasureKind::lebesgue, 0.0}; }
  static Measure weighted(double alpha) { return {MeasureKind::dv_alpha, alpha}; }
  static Measure power(double beta) { return {MeasureKind::dv_beta, beta}; }
  static Measure tau() { return {MeasureKind::tau, 0.0}; }
  static Measure sphere() { return {MeasureKind::sphere, 0.0}; }
};

std::string measure_tag(const Measure& m);

// Radial scheme. The Jacobi rule folds the (1-t)^gamma t^(n/2-1) weight of
// the radial direction (t = r^2) into the nodes, so fractional gamma keeps
// spectral accuracy. The clustered Legendre rule substitutes
// r = 1 - (1-u)^kappa and integrates the weight explicitly; it is kept as an
// independent cross-check.
enum class RadialScheme { gauss_jacobi, clustered_legendre };

struct RadialSplit {
  int radial_order = 32;
  int sphere_order = 64;          // angles for n=2, latitude order for n>=3
  double clustering_kappa = 2.0;  // only the clustered scheme reads this
  RadialScheme scheme = RadialScheme::gauss_jacobi;
};

struct QuadratureRule {
  int n = 0;
  Measure measure;
  RadialSplit split;
  std::uint64_t seed = 0;
  std::vector<double> points;   // flat, node i at [i*n, (i+1)*n)
  std::vector<double> weights;  // measure weights included

  std::size_t size() const { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-t)^a t^b, a,b > -1.
// Golub-Welsch on the symmetrized recurrence; weights sum to B(a+1, b+1).
void gauss_jacobi_01(int order, double a, double b, std::vector<double>& nodes,
                     std::vector<double>& weights);

// Rule over the sphere S^(n-1) with normalized sigma (weights sum to 1).
// n=2: trapezoid in the angle (order rounded up to even); n=3: Gauss-Legendre
// latitudes times 2*order longitudes; n>=4: Gauss-Jacobi latitudes stacked on
// a recursive S^(n-2) rule, averaged over four seeded rotations.
QuadratureRule build_sphere_rule(int n, int order, std::uint64_t seed = 0);

// Product rule over the ball for the requested measure. The tau tag throws:
// tau has infinite mass near the boundary, integrate against it through
// tau_lp_norm, which folds the singular factor into a dv_beta weight.
QuadratureRule build_ball_rule(int n, const RadialSplit& split, const Measure& measure,
                               std::uint64_t seed = 0);

// Cached variants keyed by (n, orders, scheme, measure tag, seed).
const QuadratureRule& cached_ball_rule(int n, const RadialSplit& split, const Measure& measure,
                                       std::uint64_t seed = 0);
const QuadratureRule& cached_sphere_rule(int n, int order, std::uint64_t seed = 0);

using Integrand = std::function<double(std::span<const double>)>;

// Deterministic compensated quadrature sum; throws evaluation_error when the
// integrand produces a non-finite value at a node.
double integrate(const QuadratureRule& rule, const Integrand& f);

// (integral of |f|^p)^(1/p) against the rule's measure.
double lp_norm(const QuadratureRule& rule, const Integrand& f, double p);

// L^p norm against tau of f(x) = g(x) (1-|x|^2)^decay, given by its smooth
// part g and the declared decay exponent. Needs p*decay - n > -1.
double tau_lp_norm(int n, const RadialSplit& split, const Integrand& g, double p, double decay,
                   std::uint64_t seed = 0);

// Besov seminorm of order (p, m): l1 aggregation over the order-m partials,
//   ( integral ( sum_{|k|=m} |d^k f| )^p (1-|x|^2)^(pm) dtau )^(1/p),
// the weight collapsing to dv_beta(pm - n). partials(k, x) evaluates d^k f.
using PartialEvaluator =
    std::function<double(const std::vector<int>&, std::span<const double>)>;
double besov_seminorm(const Params& params, const PartialEvaluator& partials,
                      const RadialSplit& split, std::uint64_t seed = 0);

// JSON round trip (nlohmann text); parse-back is bit-exact.
std::string rule_to_json(const QuadratureRule& rule);
QuadratureRule rule_from_json(const std::string& text);

}  // namespace besov
