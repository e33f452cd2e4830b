#include "besov/zonal.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "besov/numerics.hpp"
#include "besov/specfun.hpp"

namespace besov {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  double b = base;
  for (int k = e; k > 0; k >>= 1) {
    if (k & 1) r *= b;
    b *= b;
  }
  return r;
}

void check_nj(int n, int j) {
  if (n < 2) throw domain_error("zonal: need n >= 2");
  if (j < 0) throw domain_error("zonal: need j >= 0");
}

ZonalTable build_table(int n, int j) {
  ZonalTable t;
  t.n = n;
  t.j = j;
  if (j == 0) {
    t.log_abs.push_back(0.0);
    t.sign.push_back(1);
    return t;
  }
  // prefix[m] = sum_{l=0}^{m-1} log(n+2l); the i-th term uses j-i-1 factors.
  std::vector<double> prefix(static_cast<std::size_t>(j), 0.0);
  for (int m = 1; m < j; ++m)
    prefix[static_cast<std::size_t>(m)] =
        prefix[static_cast<std::size_t>(m - 1)] + std::log(double(n + 2 * (m - 1)));
  const double lead = std::log(double(n + 2 * j - 2));
  for (int i = 0; i <= j / 2; ++i) {
    const int factors = j - i - 1;  // empty product when <= 0
    const double prod = factors > 0 ? prefix[static_cast<std::size_t>(factors)] : 0.0;
    const double la = lead + prod - i * std::log(2.0) - log_gamma(double(i + 1)) -
                      log_gamma(double(j - 2 * i + 1));
    t.log_abs.push_back(la);
    t.sign.push_back(i % 2 == 0 ? 1 : -1);
  }
  return t;
}

std::mutex table_mutex;
std::map<std::pair<int, int>, std::unique_ptr<ZonalTable>> table_cache;

}  // namespace

std::int64_t dim_harmonic(int n, int j) {
  check_nj(n, j);
  const double d =
      binomial(double(n + j - 1), double(n - 1)) - binomial(double(n + j - 3), double(n - 1));
  return std::llround(d);
}

double ZonalTable::coef(std::size_t i) const {
  return sign[i] * std::exp(log_abs[i]);
}

const ZonalTable& zonal_table(int n, int j) {
  check_nj(n, j);
  std::lock_guard<std::mutex> lock(table_mutex);
  auto key = std::make_pair(n, j);
  auto it = table_cache.find(key);
  if (it == table_cache.end())
    it = table_cache.emplace(key, std::make_unique<ZonalTable>(build_table(n, j))).first;
  return *it->second;
}

double zonal_monomial(int n, int j, double s, double q) {
  if (q < 0.0) throw domain_error("zonal: q = |x|^2|y|^2 must be >= 0");
  const ZonalTable& t = zonal_table(n, j);
  const double ls = std::log(std::fabs(s));
  const double lq = std::log(q);
  NeumaierSum sum;
  for (std::size_t i = 0; i < t.log_abs.size(); ++i) {
    const int ps = j - 2 * static_cast<int>(i);
    const int pq = static_cast<int>(i);
    if (s == 0.0 && ps > 0) continue;
    if (q == 0.0 && pq > 0) continue;
    double mag = t.log_abs[i];
    if (ps > 0) mag += ps * ls;
    if (pq > 0) mag += pq * lq;
    int sg = t.sign[i];
    if (s < 0.0 && ps % 2 != 0) sg = -sg;
    sum.add(sg * std::exp(mag));
  }
  return sum.value();
}

double zonal_sq(int n, int j, double s, double q) {
  check_nj(n, j);
  if (q < 0.0) throw domain_error("zonal: q = |x|^2|y|^2 must be >= 0");
  if (j == 0) return 1.0;
  if (n == 2) {
    // Scaled Chebyshev: Z_j = 2 rho^j cos(j dtheta) for j >= 1. The first
    // step sees Z_0 = 1 where the pattern wants 2, hence the doubled q term.
    double zm = 1.0;       // Z_0
    double z = 2.0 * s;    // Z_1
    if (j == 1) return z;
    double z2 = 2.0 * s * z - 2.0 * q * zm;
    if (j == 2) return z2;
    zm = z;
    z = z2;
    for (int d = 2; d < j; ++d) {
      const double zn = 2.0 * s * z - q * zm;
      zm = z;
      z = zn;
    }
    return z;
  }
  // Gegenbauer with lambda = (n-2)/2; Z_j = ((2j+n-2)/(n-2)) W_j.
  const double lam = 0.5 * (n - 2);
  double wm = 1.0;            // W_0
  double w = 2.0 * lam * s;   // W_1
  for (int d = 1; d < j; ++d) {
    const double wn = (2.0 * (d + lam) * s * w - (d + 2.0 * lam - 1.0) * q * wm) / (d + 1.0);
    wm = w;
    w = wn;
  }
  return (2.0 * j + n - 2.0) / (n - 2.0) * w;
}

void zonal_prefix(int n, int J, double s, double q, double* out) {
  check_nj(n, J);
  if (q < 0.0) throw domain_error("zonal: q = |x|^2|y|^2 must be >= 0");
  out[0] = 1.0;
  if (J == 0) return;
  if (n == 2) {
    out[1] = 2.0 * s;
    if (J >= 2) out[2] = 2.0 * s * out[1] - 2.0 * q;
    for (int d = 2; d < J; ++d) out[d + 1] = 2.0 * s * out[d] - q * out[d - 1];
    return;
  }
  const double lam = 0.5 * (n - 2);
  double wm = 1.0;
  double w = 2.0 * lam * s;
  out[1] = (2.0 + n - 2.0) / (n - 2.0) * w;
  for (int d = 1; d < J; ++d) {
    const double wn = (2.0 * (d + lam) * s * w - (d + 2.0 * lam - 1.0) * q * wm) / (d + 1.0);
    wm = w;
    w = wn;
    out[d + 1] = (2.0 * (d + 1) + n - 2.0) / (n - 2.0) * w;
  }
}

double zonal(int n, int j, std::span<const double> x, std::span<const double> y) {
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw domain_error("zonal: point dimension mismatch");
  double s = 0.0, xx = 0.0, yy = 0.0;
  for (int i = 0; i < n; ++i) {
    s += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  return zonal_sq(n, j, s, xx * yy);
}

namespace {

// Key for a merged derivative term within one (n,j,k) list.
struct TermKey {
  int a, bx, by;
  std::vector<int> gx, gy;
  bool operator<(const TermKey& o) const {
    if (a != o.a) return a < o.a;
    if (bx != o.bx) return bx < o.bx;
    if (by != o.by) return by < o.by;
    if (gx != o.gx) return gx < o.gx;
    return gy < o.gy;
  }
};

std::vector<ZonalDerivTerm> differentiate_once(const std::vector<ZonalDerivTerm>& in, int n,
                                               int l) {
  std::map<TermKey, double> acc;
  auto put = [&](const TermKey& k, double c) {
    if (c != 0.0) acc[k] += c;
  };
  for (const ZonalDerivTerm& t : in) {
    if (t.a > 0) {  // d/dx_l s^a = a s^(a-1) y_l
      TermKey k{t.a - 1, t.bx, t.by, t.gx, t.gy};
      k.gy[static_cast<std::size_t>(l)] += 1;
      put(k, t.coef * t.a);
    }
    if (t.bx > 0) {  // d/dx_l (|x|^2)^bx = 2 bx (|x|^2)^(bx-1) x_l
      TermKey k{t.a, t.bx - 1, t.by, t.gx, t.gy};
      k.gx[static_cast<std::size_t>(l)] += 1;
      put(k, t.coef * 2.0 * t.bx);
    }
    const int gl = t.gx[static_cast<std::size_t>(l)];
    if (gl > 0) {
      TermKey k{t.a, t.bx, t.by, t.gx, t.gy};
      k.gx[static_cast<std::size_t>(l)] -= 1;
      put(k, t.coef * gl);
    }
  }
  std::vector<ZonalDerivTerm> out;
  out.reserve(acc.size());
  for (const auto& [k, c] : acc) {
    if (c == 0.0) continue;
    ZonalDerivTerm t;
    t.coef = c;
    t.a = k.a;
    t.bx = k.bx;
    t.by = k.by;
    t.gx = k.gx;
    t.gy = k.gy;
    out.push_back(std::move(t));
  }
  return out;
}

std::mutex deriv_mutex;
std::map<std::vector<int>, std::unique_ptr<std::vector<ZonalDerivTerm>>> deriv_cache;

}  // namespace

const std::vector<ZonalDerivTerm>& zonal_partial_terms(int n, int j, std::span<const int> k) {
  check_nj(n, j);
  if (static_cast<int>(k.size()) != n)
    throw domain_error("zonal_partial: multi-index length mismatch");
  std::vector<int> key;
  key.reserve(k.size() + 2);
  key.push_back(n);
  key.push_back(j);
  for (int v : k) {
    if (v < 0) throw domain_error("zonal_partial: negative multi-index entry");
    key.push_back(v);
  }
  std::lock_guard<std::mutex> lock(deriv_mutex);
  auto it = deriv_cache.find(key);
  if (it != deriv_cache.end()) return *it->second;

  const ZonalTable& tab = zonal_table(n, j);
  std::vector<ZonalDerivTerm> terms;
  for (std::size_t i = 0; i < tab.log_abs.size(); ++i) {
    ZonalDerivTerm t;
    t.coef = tab.coef(i);
    if (!std::isfinite(t.coef))
      throw evaluation_error("zonal_partial: coefficient overflow at this degree");
    t.a = j - 2 * static_cast<int>(i);
    t.bx = static_cast<int>(i);
    t.by = static_cast<int>(i);
    t.gx.assign(static_cast<std::size_t>(n), 0);
    t.gy.assign(static_cast<std::size_t>(n), 0);
    terms.push_back(std::move(t));
  }
  for (int l = 0; l < n; ++l)
    for (int rep = 0; rep < k[static_cast<std::size_t>(l)]; ++rep)
      terms = differentiate_once(terms, n, l);
  auto owned = std::make_unique<std::vector<ZonalDerivTerm>>(std::move(terms));
  return *deriv_cache.emplace(std::move(key), std::move(owned)).first->second;
}

double zonal_partial(int n, int j, std::span<const int> k, std::span<const double> x,
                     std::span<const double> y) {
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw domain_error("zonal_partial: point dimension mismatch");
  const std::vector<ZonalDerivTerm>& terms = zonal_partial_terms(n, j, k);
  double s = 0.0, xx = 0.0, yy = 0.0;
  for (int i = 0; i < n; ++i) {
    s += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  NeumaierSum sum;
  for (const ZonalDerivTerm& t : terms) {
    double v = t.coef;
    if (t.a > 0) v *= ipow(s, t.a);
    if (t.bx > 0) v *= ipow(xx, t.bx);
    if (t.by > 0) v *= ipow(yy, t.by);
    for (int i = 0; i < n; ++i) {
      const int px = t.gx[static_cast<std::size_t>(i)];
      const int py = t.gy[static_cast<std::size_t>(i)];
      if (px > 0) v *= ipow(x[static_cast<std::size_t>(i)], px);
      if (py > 0) v *= ipow(y[static_cast<std::size_t>(i)], py);
    }
    sum.add(v);
  }
  return sum.value();
}

}  // namespace besov
