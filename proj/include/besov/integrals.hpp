#pragma once

// Weighted bracket integrals over the ball and their closed forms.
//
// The central object is
//   I_{alpha,s}(x) = integral over B of (1-|y|^2)^(alpha-1) [x,y]^-(n+alpha+s-1) dv(y)
// which collapses to a Gauss hypergeometric evaluation in |x|^2. The sign of s
// controls the boundary behaviour: bounded for s < 0, logarithmic at s = 0,
// power blow-up of rate s for s > 0.

#include <span>
#include <string>
#include <vector>

#include "besov/errors.hpp"
#include "besov/quadrature.hpp"

namespace besov {

struct IArgs {
  double alpha = 1.0;
  double s = -1.0;
  double x_abs = 0.0;  // |x|, radial symmetry makes the modulus sufficient
};

// prefactor * 2F1((n+alpha+s-1)/2, (alpha+s+1)/2; alpha+n/2; |x|^2),
// prefactor = pi^(n/2) Gamma(alpha) / Gamma(n/2+alpha).
// The series identity holds for every real s as long as alpha > 0; for s >= 0
// the value blows up as |x| -> 1 but stays finite on the open ball.
double i_closed_form(int n, const IArgs& args);

// direct quadrature of the defining integral with x = x_abs * e1; orders are
// chosen from the requested split, bumped automatically near the boundary
double i_quadrature(int n, const IArgs& args, const RadialSplit& split = {});

struct LemmaConstants {
  double min;  // value at x = 0, the prefactor itself
  double max;  // supremum over the ball, finite only for s < 0
};

// s >= 0 has no finite supremum; that case throws
LemmaConstants lemma1_constants(int n, double alpha, double s);

// residual of integral over S of |x - xi|^-c dsigma(xi)
//   = 2F1(c/2, (c-n)/2 + 1; n/2; |x|^2)
// under the given sphere rule; returns quadrature minus closed form
double sphere_identity_residual(int n, double c, double x_abs, int sphere_order,
                                std::uint64_t seed = 0);

// closed-form value of the sphere integral above
double sphere_identity_value(int n, double c, double x_abs);

enum class BoundaryKind { bounded, logarithmic, power };

struct AsymptoticsReport {
  int n = 0;
  double alpha = 0.0;
  double s = 0.0;
  BoundaryKind kind = BoundaryKind::bounded;
  double fitted_rate = 0.0;     // exponent of (1-|x|^2) for power, slope vs log log for log
  double limit_value = 0.0;     // extrapolated boundary value when bounded
  std::vector<double> eps;      // sampled 1-|x|^2 values
  std::vector<double> values;   // I at those samples
  bool quadrature_primary = true;
  double max_quad_residual = 0.0;  // worst |quad - closed| / closed over samples
};

// samples I_{alpha,s} at 1-|x|^2 = 2^-3 .. 2^-depth and fits the boundary
// model implied by the sign of s; quadrature drives the samples with the
// closed form as cross-check (closed form only when quadrature is skipped)
AsymptoticsReport asymptotics_probe(int n, double alpha, double s, int depth = 10,
                                    bool use_quadrature = true,
                                    const RadialSplit& split = {});

// CSV rows "n,alpha,s,x_abs,closed,quad,residual" for a parameter sweep;
// includes the versioned header comment line
std::string i_sweep_csv(int n, std::span<const double> alphas, std::span<const double> ss,
                        std::span<const double> xs, const RadialSplit& split = {});

}  // namespace besov
