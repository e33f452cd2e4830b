#include "besov/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "besov/numerics.hpp"
#include "besov/specfun.hpp"
#include "besov/zonal.hpp"
#include "json.hpp"

namespace besov {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double bracket(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw domain_error("bracket: dimension mismatch");
  double s = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  return std::sqrt(std::max(0.0, 1.0 - 2.0 * s + xx * yy));
}

KernelSeries make_kernel(int n, double alpha, int degree_cap, double rel_tol) {
  if (n < 2) throw domain_error("kernel: need n >= 2");
  if (alpha < 0.0) throw domain_error("kernel: need alpha >= 0");
  if (degree_cap < 1) throw domain_error("kernel: degree_cap must be >= 1");
  if (rel_tol <= 0.0) throw domain_error("kernel: rel_tol must be > 0");
  KernelSeries ker;
  ker.n = n;
  ker.alpha = alpha;
  ker.degree_cap = degree_cap;
  ker.rel_tol = rel_tol;
  ker.coef.resize(static_cast<std::size_t>(degree_cap) + 1);
  if (alpha == 0.0) {
    const double ball = std::pow(kPi, 0.5 * n) / std::exp(log_gamma(0.5 * n + 1.0));
    for (int j = 0; j <= degree_cap; ++j)
      ker.coef[static_cast<std::size_t>(j)] = (n + 2.0 * j) / (n * ball);
  } else {
    ker.coef[0] = 1.0;
    for (int j = 0; j < degree_cap; ++j)
      ker.coef[static_cast<std::size_t>(j) + 1] = ker.coef[static_cast<std::size_t>(j)] *
                                                  (j + 0.5 * n + alpha) / (j + 0.5 * n);
  }
  return ker;
}

namespace {

std::mutex plan_mutex;
std::map<std::pair<int, int>, std::unique_ptr<JetPlan>> plan_cache;

JetPlan build_plan(int n, int m) {
  JetPlan plan;
  plan.n = n;
  plan.m = m;
  std::map<std::vector<int>, int> pos;
  for (int o = 0; o <= m; ++o) {
    for (auto& k : multi_indices(n, o)) {
      pos[k] = static_cast<int>(plan.idx.size());
      plan.idx.push_back(k);
      plan.order.push_back(o);
      if (o == m) plan.top.push_back(static_cast<int>(plan.idx.size()) - 1);
    }
  }
  plan.down1.resize(plan.idx.size());
  plan.down2.resize(plan.idx.size());
  for (std::size_t i = 0; i < plan.idx.size(); ++i) {
    const auto& k = plan.idx[i];
    for (int l = 0; l < n; ++l) {
      const int kl = k[static_cast<std::size_t>(l)];
      if (kl >= 1) {
        auto km = k;
        km[static_cast<std::size_t>(l)] -= 1;
        plan.down1[i].push_back({pos.at(km), l, double(kl)});
      }
      if (kl >= 2) {
        auto km = k;
        km[static_cast<std::size_t>(l)] -= 2;
        plan.down2[i].push_back({pos.at(km), l, double(kl) * (kl - 1)});
      }
    }
  }
  return plan;
}

}  // namespace

const JetPlan& jet_plan(int n, int m) {
  if (n < 2 || m < 0) throw domain_error("jet_plan: need n >= 2, m >= 0");
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, m);
  auto it = plan_cache.find(key);
  if (it == plan_cache.end())
    it = plan_cache.emplace(key, std::make_unique<JetPlan>(build_plan(n, m))).first;
  return *it->second;
}

ZonalJetStream::ZonalJetStream(const JetPlan& plan, std::span<const double> x,
                               std::span<const double> y)
    : plan_(&plan),
      x_(x.begin(), x.end()),
      y_(y.begin(), y.end()) {
  const int n = plan.n;
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw domain_error("jet stream: point dimension mismatch");
  double xx = 0.0;
  for (int i = 0; i < n; ++i) {
    s_ += x_[static_cast<std::size_t>(i)] * y_[static_cast<std::size_t>(i)];
    xx += x_[static_cast<std::size_t>(i)] * x_[static_cast<std::size_t>(i)];
    yy_ += y_[static_cast<std::size_t>(i)] * y_[static_cast<std::size_t>(i)];
  }
  q_ = xx * yy_;
  lambda_ = 0.5 * (n - 2);
  prev_.assign(plan.idx.size(), 0.0);
  cur_.assign(plan.idx.size(), 0.0);
  scratch_.assign(plan.idx.size(), 0.0);
  cur_z_.assign(plan.idx.size(), 0.0);
  cur_[0] = 1.0;  // degree 0: Z_0 = W_0 = 1, all derivatives vanish
  refresh_output();
}

void ZonalJetStream::refresh_output() {
  const int n = plan_->n;
  double scale = 1.0;
  if (n > 2)
    scale = (2.0 * degree_ + n - 2.0) / (n - 2.0);
  for (std::size_t i = 0; i < cur_.size(); ++i) cur_z_[i] = scale * cur_[i];
}

void ZonalJetStream::advance() {
  const JetPlan& plan = *plan_;
  const int n = plan.n;
  const int j = degree_;
  std::vector<double>& next = scratch_;
  std::fill(next.begin(), next.end(), 0.0);

  auto s_part = [&](std::size_t i) {
    double v = s_ * cur_[i];
    for (const auto& h : plan.down1[i])
      v += h.weight * y_[static_cast<std::size_t>(h.coord)] * cur_[static_cast<std::size_t>(h.pos)];
    return v;
  };
  auto q_part = [&](std::size_t i) {
    double v = q_ * prev_[i];
    for (const auto& h : plan.down1[i])
      v += h.weight * 2.0 * x_[static_cast<std::size_t>(h.coord)] * yy_ *
           prev_[static_cast<std::size_t>(h.pos)];
    for (const auto& h : plan.down2[i])
      v += h.weight * yy_ * prev_[static_cast<std::size_t>(h.pos)];
    return v;
  };

  if (j == 0) {
    // degree 1 jets directly: Z_1 = n s (n=2: 2s), W_1 = 2 lambda s
    const double c = n == 2 ? 2.0 : 2.0 * lambda_;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (plan.order[i] == 0)
        next[i] = c * s_;
      else if (plan.order[i] == 1) {
        int coord = -1;
        for (int l = 0; l < n; ++l)
          if (plan.idx[i][static_cast<std::size_t>(l)] == 1) coord = l;
        next[i] = c * y_[static_cast<std::size_t>(coord)];
      }
    }
  } else if (n == 2) {
    const double qfac = j == 1 ? 2.0 : 1.0;  // Z_0 = 1 stands in for 2 T_0
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = 2.0 * s_part(i) - qfac * q_part(i);
  } else {
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = (2.0 * (j + lambda_) * s_part(i) - (j + 2.0 * lambda_ - 1.0) * q_part(i)) /
                (j + 1.0);
  }
  prev_.swap(cur_);
  cur_.swap(scratch_);
  degree_ = j + 1;
  refresh_output();
}

namespace {

double falling(int j, int m) {
  if (m == 0) return 1.0;
  if (j < m) return 0.0;
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= double(j - i);
  return r;
}

// shared series driver: accumulates coef[j] * jet over the requested
// positions until the envelope tail bound passes the tolerance
struct SeriesResult {
  std::vector<double> values;
  int terms_used = 0;
  double tail_bound = 0.0;
};

SeriesResult sum_series(const KernelSeries& ker, const JetPlan& plan,
                        std::span<const int> positions, std::span<const double> x,
                        std::span<const double> y) {
  const int m = plan.m;
  double xx = 0.0, yn = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) xx += x[i] * x[i];
  for (std::size_t i = 0; i < y.size(); ++i) yn += y[i] * y[i];
  const double rho = std::sqrt(xx * yn);
  const double ym = std::sqrt(yn);
  const double root2m = std::pow(std::sqrt(2.0), m);

  // the tail check peeks up to two degrees past the cap; extend the
  // coefficient recurrence instead of reading past the table
  auto coef_at = [&](int j) -> double {
    if (j <= ker.degree_cap) return ker.coef[static_cast<std::size_t>(j)];
    if (ker.alpha == 0.0)
      return ker.coef.back() * (ker.n + 2.0 * j) / (ker.n + 2.0 * ker.degree_cap);
    double c = ker.coef.back();
    for (int i = ker.degree_cap; i < j; ++i)
      c *= (i + 0.5 * ker.n + ker.alpha) / (i + 0.5 * ker.n);
    return c;
  };
  auto envelope = [&](int j) {
    if (j < m) return 0.0;
    return coef_at(j) * double(dim_harmonic(ker.n, j)) * root2m * falling(j, m) *
           std::pow(rho, double(j - m)) * std::pow(ym, double(m));
  };

  ZonalJetStream stream(plan, x, y);
  std::vector<NeumaierSum> acc(positions.size());
  double peak = 0.0;
  for (int j = 0;; ++j) {
    for (std::size_t i = 0; i < positions.size(); ++i)
      acc[i].add(ker.coef[static_cast<std::size_t>(j)] *
                 stream.values()[static_cast<std::size_t>(positions[i])]);
    peak = std::max(peak, envelope(j));

    if (j >= m + 1) {
      const double e1 = envelope(j + 1);
      const double e2 = envelope(j + 2);
      if (e1 == 0.0) {
        SeriesResult res;
        for (auto& a : acc) res.values.push_back(a.value());
        res.terms_used = j + 1;
        res.tail_bound = 0.0;
        return res;
      }
      const double r = e2 / e1;
      if (r < 1.0) {
        const double tail = e1 / (1.0 - r);
        double scale = 0.0;
        for (auto& a : acc) scale = std::max(scale, std::fabs(a.value()));
        if (tail <= ker.rel_tol * scale || tail <= 1e-16 * peak) {
          SeriesResult res;
          for (auto& a : acc) res.values.push_back(a.value());
          res.terms_used = j + 1;
          res.tail_bound = tail;
          return res;
        }
      }
    }
    if (j == ker.degree_cap) {
      const double e1 = envelope(j + 1);
      const double e2 = envelope(j + 2);
      const double tail = e2 < e1 && e1 > 0.0 ? e1 / (1.0 - e2 / e1) : e1;
      double last = ker.coef[static_cast<std::size_t>(j)] *
                    stream.values()[static_cast<std::size_t>(positions[0])];
      throw truncation_error("kernel series did not certify within degree_cap",
                             std::fabs(last), tail, j + 1);
    }
    stream.advance();
  }
}

}  // namespace

KernelValue bergman_kernel_detail(const KernelSeries& ker, std::span<const double> x,
                                  std::span<const double> y) {
  const JetPlan& plan = jet_plan(ker.n, 0);
  const int pos0 = 0;
  SeriesResult r = sum_series(ker, plan, std::span<const int>(&pos0, 1), x, y);
  return {r.values[0], r.terms_used, r.tail_bound};
}

double bergman_kernel(const KernelSeries& ker, std::span<const double> x,
                      std::span<const double> y) {
  return bergman_kernel_detail(ker, x, y).value;
}

KernelValue kernel_partial_detail(const KernelSeries& ker, std::span<const int> k,
                                  std::span<const double> x, std::span<const double> y) {
  int m = 0;
  for (int v : k) {
    if (v < 0) throw domain_error("kernel_partial: negative multi-index entry");
    m += v;
  }
  const JetPlan& plan = jet_plan(ker.n, m);
  int pos = -1;
  for (std::size_t i = 0; i < plan.idx.size(); ++i)
    if (std::equal(plan.idx[i].begin(), plan.idx[i].end(), k.begin(), k.end()))
      pos = static_cast<int>(i);
  if (pos < 0) throw domain_error("kernel_partial: multi-index not found");
  SeriesResult r = sum_series(ker, plan, std::span<const int>(&pos, 1), x, y);
  return {r.values[0], r.terms_used, r.tail_bound};
}

double kernel_partial(const KernelSeries& ker, std::span<const int> k,
                      std::span<const double> x, std::span<const double> y) {
  return kernel_partial_detail(ker, k, x, y).value;
}

std::vector<double> kernel_partials(const KernelSeries& ker, int m, std::span<const double> x,
                                    std::span<const double> y) {
  const JetPlan& plan = jet_plan(ker.n, m);
  SeriesResult r = sum_series(ker, plan, plan.top, x, y);
  return r.values;
}

GrowthEstimate estimate_growth_constant(const KernelSeries& ker, int m,
                                        const GrowthProbe& probe) {
  if (probe.samples < 1) throw domain_error("growth probe needs samples >= 1");
  GrowthEstimate g;
  g.n = ker.n;
  g.alpha = ker.alpha;
  g.m = m;
  g.samples = probe.samples;
  g.seed = probe.seed;

  const int n = ker.n;
  const double expo = n + ker.alpha + m - 1.0;
  std::vector<double> vals(static_cast<std::size_t>(probe.samples));
  std::vector<std::vector<double>> xs(vals.size()), ys(vals.size());
  parallel_for(vals.size(), [&](std::size_t i) {
    std::mt19937_64 rng(probe.seed * 0x9e3779b97f4a7c15ULL + i);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.05, probe.radius_cap);
    auto draw = [&]() {
      std::vector<double> v(static_cast<std::size_t>(n));
      double nn = 0.0;
      for (double& c : v) {
        c = gauss(rng);
        nn += c * c;
      }
      const double r = unif(rng);
      for (double& c : v) c *= r / std::sqrt(nn);
      return v;
    };
    xs[i] = draw();
    ys[i] = draw();
    const auto parts = kernel_partials(ker, m, xs[i], ys[i]);
    double l1 = 0.0;
    for (double p : parts) l1 += std::fabs(p);
    vals[i] = l1 * std::pow(bracket(xs[i], ys[i]), expo);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[best]) best = i;
  g.constant = vals[best];
  g.argmax_x = xs[best];
  g.argmax_y = ys[best];

  // aligned boundary walk: largest rho the series still certifies
  std::vector<double> xb(static_cast<std::size_t>(n), 0.0);
  std::vector<double> yb(static_cast<std::size_t>(n), 0.0);
  double attained = 0.0;
  for (double rho = 0.5; rho < 0.995; rho += 0.005) {
    const double r = std::sqrt(rho);
    xb[0] = r;
    yb[0] = r;
    try {
      kernel_partials(ker, m, xb, yb);
      attained = rho;
    } catch (const truncation_error&) {
      break;
    }
  }
  g.boundary_rho = attained;
  return g;
}

std::string growth_to_json(const GrowthEstimate& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["alpha"] = g.alpha;
  j["m"] = g.m;
  j["samples"] = g.samples;
  j["seed"] = g.seed;
  j["constant"] = g.constant;
  j["boundary_rho"] = g.boundary_rho;
  j["argmax_x"] = g.argmax_x;
  j["argmax_y"] = g.argmax_y;
  return j.dump();
}

}  // namespace besov
