#pragma once

// The two integral operators and empirical norm brackets around them.
//
// Candidates are products of a zonal factor and a radial power,
//   f(x) = coef * Z_j(x, pole) * (1-|x|^2)^boost,
// which keeps every operator image a finite zonal series: the degree sweep
// in the projection terminates exactly a few degrees past the candidate
// degree by sphere-rule orthogonality.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "besov/bounds.hpp"
#include "besov/kernels.hpp"
#include "besov/params.hpp"
#include "besov/quadrature.hpp"

namespace besov {

enum class WitnessKind { radial_power, zonal_power, random_smooth };

struct TestFunction {
  WitnessKind kind = WitnessKind::radial_power;
  int degree = 0;             // zonal degree, 0 means purely radial
  std::vector<double> pole;   // unit vector carrying the zonal slot
  double boost = 1.0;         // exponent of (1-|x|^2)
  double coef = 1.0;
  std::uint64_t id = 0;       // stable ordering key in reports
};

double eval_test_function(const TestFunction& f, std::span<const double> x);

// analytic partial derivative, Leibniz over the zonal and radial factors
double test_function_partial(const TestFunction& f, std::span<const int> k,
                             std::span<const double> x);

// the radial witness: boost m+alpha+n/p, normalized to unit tau-L^p norm
TestFunction make_psi_witness(const Params& pr);

// the zonal witness: degree m against the first axis with boost n/p and the
// normalization the lower projection constant assumes
TestFunction make_f_witness(const Params& pr);

// seeded candidate: small zonal degree, random pole, boost safely above the
// integrability threshold (n-1)/p
TestFunction make_random_candidate(const Params& pr, std::uint64_t id, std::uint64_t seed);

struct OperatorConfig {
  RadialSplit outer;          // rule behind norms of images
  RadialSplit inner;          // rule behind the operator integrals
  int degree_cap = 200;
  double rel_tol = 1e-8;
  int trials = 4;             // random candidates per bracket
  std::uint64_t seed = 1;
};

// T f(x) = integral of f(y) [x,y]^-(n+alpha+m-1) dv_alpha(y), by quadrature
double apply_T(const Params& pr, const TestFunction& f, std::span<const double> x,
               const RadialSplit& inner = {}, std::uint64_t seed = 0);

// closed form of the same image for purely radial candidates
double t_image_radial_closed(const Params& pr, const TestFunction& f, double x_abs);

// P_alpha f(x) = integral of R_alpha(x,y) f(y) dv_alpha(y), degree by degree
double apply_P(const Params& pr, const TestFunction& f, std::span<const double> x,
               const OperatorConfig& cfg = {});

// all order-m partials of the image at one point, multi_indices(n, m) order
std::vector<double> projection_partials(const Params& pr, const TestFunction& f,
                                        std::span<const double> x,
                                        const OperatorConfig& cfg = {});

// L^p norm of T f against (1-|x|^2)^(pm-n) dv; radial candidates ride the
// closed form, everything else pays the double quadrature
double t_image_lp_norm(const Params& pr, const TestFunction& f,
                       const OperatorConfig& cfg = {});

// Besov seminorm of P_alpha f: outer nodes against (1-|x|^2)^(pm-n) dv, the
// order-m jet of the kernel series at every node pair
double besov_norm_of_image(const Params& pr, const TestFunction& f,
                           const OperatorConfig& cfg = {});

// sum over |k| = m of integral (1-|x|^2)^(2m) d^k f d^k g dtau, needs 2m > n-1
double dirichlet_inner_product(const Params& pr, const TestFunction& f,
                               const TestFunction& g, const RadialSplit& split = {},
                               std::uint64_t seed = 0);

// tau-L^p norm of a candidate through its analytic decay split
double candidate_domain_norm(const Params& pr, const TestFunction& f,
                             const RadialSplit& split = {}, std::uint64_t seed = 0);

struct FindingRow {
  std::string inequality;  // human-readable statement of what should hold
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

struct WitnessRecord {
  std::string kind;
  std::uint64_t id = 0;
  double image_norm = 0.0;
  double domain_norm = 0.0;
  double ratio = 0.0;
};

struct NormBracket {
  Params params;
  std::string operator_name;
  std::map<std::string, double> lower_paper;
  double lower_empirical = 0.0;
  std::map<std::string, double> upper_paper;
  std::vector<WitnessRecord> witnesses;
  std::vector<FindingRow> findings;
  double quad_error_raw = 0.0;
  double quad_error_safe = 0.0;
  double conjecture_ratio = 0.0;  // projection only
  std::uint64_t seed = 0;
  OperatorConfig config;
};

NormBracket bracket_T_norm(const Params& pr, const OperatorConfig& cfg = {});
NormBracket bracket_P_norm(const Params& pr, const OperatorConfig& cfg = {});

std::string bracket_to_json(const NormBracket& nb);

}  // namespace besov
