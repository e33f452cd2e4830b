#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "besov/errors.hpp"

namespace besov {

// Dimension of the space of spherical harmonics of degree j in R^n.
// Counting convention: binomials outside the Pascal triangle are zero,
// so dim(n,0) = 1 and dim(2,j) = 2 for j >= 1. 64-bit: large n and j
// overflow 32 bits well inside the supported degree range.
std::int64_t dim_harmonic(int n, int j);

// Coefficient table for the degree-j zonal harmonic as a polynomial in
//   s = x.y,  q = |x|^2 |y|^2:
//   Z_j(x,y) = sum_i  c_i * s^(j-2i) * q^i,   i = 0..floor(j/2).
// Stored as log|c_i| plus sign so degrees up to a few hundred do not
// overflow. Tables are built once per (n,j) and are immutable.
struct ZonalTable {
  int n = 0;
  int j = 0;
  std::vector<double> log_abs;  // log|c_i|, index i
  std::vector<int> sign;        // +1 / -1 (0 only for the empty j=0 slot)

  // c_i as a double; +-inf when the magnitude overflows.
  double coef(std::size_t i) const;
};

const ZonalTable& zonal_table(int n, int j);

// Z_j evaluated from the coefficient table. Exact structure but the
// alternating monomial sum loses ~ j*log10(1+sqrt2) digits near aligned
// arguments, so this is the low-degree reference path, not the default.
double zonal_monomial(int n, int j, double s, double q);

// Z_j(x,y) for x,y anywhere in R^n (extends the ball-times-sphere kernel by
// homogeneity of degree j in each slot). Three-term recurrence in (s,q);
// forward-stable at any degree the caller can afford.
double zonal(int n, int j, std::span<const double> x, std::span<const double> y);
double zonal_sq(int n, int j, double s, double q);

// All of Z_0..Z_J in one recurrence pass. out must hold J+1 doubles.
void zonal_prefix(int n, int J, double s, double q, double* out);

// Multi-index partial derivative d^k/dx^k Z_j(x,y), differentiated
// symbolically term by term from the monomial expansion. k has n entries.
// Term lists are cached per (n,j,k). Degrees past ~30 inherit the monomial
// conditioning limit; kernel-scale jets live in the kernels module instead.
double zonal_partial(int n, int j, std::span<const int> k,
                     std::span<const double> x, std::span<const double> y);

// One monomial of a differentiated zonal term:
//   coef * s^a * (|x|^2)^bx * (|y|^2)^by * x^gx * y^gy.
struct ZonalDerivTerm {
  double coef = 0.0;
  int a = 0;
  int bx = 0;
  int by = 0;
  std::vector<int> gx;  // multi-index over x coordinates
  std::vector<int> gy;  // multi-index over y coordinates
};

// The cached term list behind zonal_partial; exposed for tail estimates.
const std::vector<ZonalDerivTerm>& zonal_partial_terms(int n, int j,
                                                       std::span<const int> k);

}  // namespace besov
