#pragma once

#include <utility>

namespace besov {

// log Gamma(x) for x > 0. Lanczos approximation, g = 7, 9 terms; relative
// error below 1e-13 across the range used here.
double log_gamma(double x);

// log |Gamma(x)| together with the sign of Gamma(x). Valid for any real x
// that is not a non-positive integer.
struct SignedLogGamma {
    double log_abs;
    int sign;  // +1 or -1
};
SignedLogGamma log_gamma_signed(double x);

// Gamma(x) via exp(log_gamma), sign-corrected for negative non-integer x.
double gamma_fn(double x);

// Rising factorial (a)_k = a (a+1) ... (a+k-1). (a)_0 = 1.
double pochhammer(double a, int k);

// Generalized binomial C(a, b) = Gamma(a+1)/(Gamma(b+1) Gamma(a-b+1)) for
// real a, b. Integer arguments follow the counting convention: zero whenever
// b < 0, a < 0, or b > a.
double binomial(double a, double b);

struct SeriesControl {
    double rel_tol = 1e-12;
    int max_terms = 10000;
};

// Gauss hypergeometric 2F1(a, b; c; t) for t in [0, 1].
//   t < crossover      : compensated power series
//   t in [crossover,1) : linear transformation in (1-t), provided c-a-b is
//                        not an integer (works for c-a-b of either sign)
//   t = 1              : Gauss's closed form, requires c-a-b > 0
// Throws domain_error for c a non-positive integer or arguments outside the
// above, truncation_error if the series cap is hit.
double hyp2f1(double a, double b, double c, double t,
              const SeriesControl& ctl = {});

// d/dt 2F1(a,b;c;t) = (ab/c) 2F1(a+1,b+1;c+1;t).
double hyp2f1_derivative(double a, double b, double c, double t,
                         const SeriesControl& ctl = {});

// 2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)), c-a-b > 0.
double gauss_value(double a, double b, double c);

// Residuals of two transformation identities at the given point:
//   first : F(a,b;c;t) - (1-t)^(c-a-b)   F(c-a,c-b;c;t)
//   second: F(a,b;c;t) - (1-t^2)^(c-a-b) F(c-a,c-b;c;t)
// The first is the classical Euler relation and should vanish to roundoff;
// the second is a printed variant kept for comparison.
std::pair<double, double> euler_residuals(double a, double b, double c, double t,
                                          const SeriesControl& ctl = {});

}  // namespace besov
