#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "besov/errors.hpp"

namespace besov {

// [x,y] = sqrt(1 - 2 x.y + |x|^2|y|^2). Symmetric, >= 1 - |x||y|, equals
// |x - xi| on |xi| = 1 and 1 - |x|^2 on the diagonal.
double bracket(std::span<const double> x, std::span<const double> y);

// Expansion R_alpha(x,y) = sum_j coef[j] Z_j(x,y). For alpha > 0 the
// coefficients are Gamma(n/2) Gamma(j+n/2+alpha) / (Gamma(n/2+alpha)
// Gamma(j+n/2)), normalized so coef[0] = 1; alpha = 0 is the limit kernel
// that reproduces against the plain volume measure, coef[j] = (n+2j)/(n|B|).
struct KernelSeries {
  int n = 2;
  double alpha = 1.0;
  int degree_cap = 200;
  double rel_tol = 1e-8;
  std::vector<double> coef;
};

KernelSeries make_kernel(int n, double alpha, int degree_cap = 200, double rel_tol = 1e-8);

struct KernelValue {
  double value = 0.0;
  int terms_used = 0;     // number of degrees summed
  double tail_bound = 0.0;
};

// Pointwise evaluation with adaptive truncation. The tail of the degree
// series is bounded through |d^k Z_j(x,y)| <= sqrt(2)^|k| j(j-1)..(j-|k|+1)
// dim(n,j) |x|^(j-|k|) |y|^j and a decreasing-ratio geometric majorant; a
// truncation_error carries the attained bound when degree_cap is not enough.
KernelValue bergman_kernel_detail(const KernelSeries& ker, std::span<const double> x,
                                  std::span<const double> y);
double bergman_kernel(const KernelSeries& ker, std::span<const double> x,
                      std::span<const double> y);

KernelValue kernel_partial_detail(const KernelSeries& ker, std::span<const int> k,
                                  std::span<const double> x, std::span<const double> y);
double kernel_partial(const KernelSeries& ker, std::span<const int> k,
                      std::span<const double> x, std::span<const double> y);

// All order-m partials d^k_x R_alpha(x,y) in multi_indices(n,m) order,
// sharing one recurrence pass.
std::vector<double> kernel_partials(const KernelSeries& ker, int m, std::span<const double> x,
                                    std::span<const double> y);

// Shared bookkeeping for propagating the jet {d^k Z_j : |k| <= m} in j.
// idx lists the multi-indices (orders 0..m, each block in multi_indices
// order); down1/down2 point at k - e_l and k - 2e_l with their Leibniz
// weights. Plans are cached per (n, m).
struct JetPlan {
  int n = 0;
  int m = 0;
  std::vector<std::vector<int>> idx;
  std::vector<int> order;
  struct Hop {
    int pos;
    int coord;
    double weight;
  };
  std::vector<std::vector<Hop>> down1;
  std::vector<std::vector<Hop>> down2;
  std::vector<int> top;  // positions with |k| == m
};
const JetPlan& jet_plan(int n, int m);

// Degree-by-degree zonal jets at a fixed pair (x,y): after construction the
// stream sits at degree 0; advance() moves one degree up. values()[i] is
// d^(idx[i]) Z_degree(x,y).
class ZonalJetStream {
 public:
  ZonalJetStream(const JetPlan& plan, std::span<const double> x, std::span<const double> y);
  int degree() const { return degree_; }
  std::span<const double> values() const { return cur_z_; }
  void advance();

 private:
  const JetPlan* plan_;
  int degree_ = 0;
  double s_ = 0.0, q_ = 0.0, yy_ = 0.0, lambda_ = 0.0;
  std::vector<double> x_, y_;
  std::vector<double> prev_, cur_, scratch_;  // W-jets (Z-jets directly for n=2)
  std::vector<double> cur_z_;                 // scaled output at the current degree
  void refresh_output();
};

// sup over seeded samples of (sum_{|k|=m} |d^k R_alpha|) [x,y]^(n+alpha+m-1).
struct GrowthProbe {
  int samples = 200;
  double radius_cap = 0.85;
  std::uint64_t seed = 1;
};

struct GrowthEstimate {
  int n = 0;
  double alpha = 0.0;
  int m = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double constant = 0.0;
  double boundary_rho = 0.0;  // largest |x||y| the series still certified
  std::vector<double> argmax_x, argmax_y;
};

GrowthEstimate estimate_growth_constant(const KernelSeries& ker, int m,
                                        const GrowthProbe& probe = {});
std::string growth_to_json(const GrowthEstimate& g);

}  // namespace besov
