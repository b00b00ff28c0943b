#pragma once
// Derivatives at 0 of f(x) = prod (x - x_i) through elementary symmetric
// polynomials: f^{(j)}(0) = j! (-1)^{n-j} e_{n-j}(x). Floating point for any n,
// exact integer arithmetic (GMP) for dyadic inputs x_i = m_i / 2^53.

#include "algdist/core.hpp"
#include "algdist/rng.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace algdist {

inline constexpr int kDyadicBits = 53;

// Values x_i = m_i / 2^53 in [-1, 1), |x_i| >= 1e-6, sorted by absolute value.
struct DyadicSample {
  std::vector<long long> m;
  std::vector<double> x;
};

inline DyadicSample draw_dyadic_sample(int n, Rng& rng) {
  const long long half = 1LL << kDyadicBits;
  DyadicSample s;
  while (static_cast<int>(s.m.size()) < n) {
    const long long m = static_cast<long long>(rng.bits() >> (64 - kDyadicBits - 1)) - half;
    const double x = std::ldexp(static_cast<double>(m), -kDyadicBits);
    if (std::abs(x) < 1e-6) continue;
    s.m.push_back(m);
  }
  std::stable_sort(s.m.begin(), s.m.end(), [](long long a, long long b) { return std::llabs(a) < std::llabs(b); });
  for (long long m : s.m) s.x.push_back(std::ldexp(static_cast<double>(m), -kDyadicBits));
  return s;
}

// e_0..e_n.
inline std::vector<double> elementary_symmetric(const std::vector<double>& x) {
  std::vector<double> e(x.size() + 1, 0.0);
  e[0] = 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += x[i] * e[k - 1];
  return e;
}

inline std::vector<mpz_class> elementary_symmetric_exact(const std::vector<long long>& m) {
  std::vector<mpz_class> e(m.size() + 1, 0);
  e[0] = 1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const mpz_class xi(static_cast<long>(m[i]));
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += xi * e[k - 1];
  }
  return e;
}

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

// log |f^{(j)}(0)| for j = 0..n.
inline std::vector<double> log_abs_derivatives_at_zero(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  const auto e = elementary_symmetric(x);
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) out[static_cast<std::size_t>(j)] = log_factorial(j) + std::log(std::abs(e[static_cast<std::size_t>(n - j)]));
  return out;
}

// sum_{i > s} log |x_i| for ascending |x_i| (1-based i).
inline double log_tail_product(const std::vector<double>& x, int s) {
  double v = 0;
  for (std::size_t i = static_cast<std::size_t>(s); i < x.size(); ++i) v += std::log(std::abs(x[i]));
  return v;
}

// Lower bound constant: log((2s+1) (3n^3)^{s+1}).
inline double hilf_lower_log_constant(int n, int s) {
  return std::log(2.0 * s + 1) + (s + 1) * std::log(3.0 * n * n * n);
}

struct HilfBounds {
  double lower_lhs = 0, lower_rhs = 0;  // log LB, log sup_{j <= 3s}
  double upper_lhs = 0, upper_rhs = 0;  // log sup_{j <= s}, log bound
  bool lower_ok = true, upper_ok = true;
};

// Both bounds at every s in [0, s_max] from one set of derivatives. The lower
// bound is only evaluated for 3s < n. Slack is relative (1e-12 by default).
inline std::vector<HilfBounds> hilf_bounds_float(const std::vector<double>& x, int s_max, double rel_slack = 1e-12) {
  const int n = static_cast<int>(x.size());
  const auto logd = log_abs_derivatives_at_zero(x);
  std::vector<double> prefix_max(logd.size());
  double run = neg_inf;
  for (std::size_t j = 0; j < logd.size(); ++j) prefix_max[j] = run = std::max(run, logd[j]);
  const double slack = std::log1p(rel_slack);
  std::vector<HilfBounds> out;
  for (int s = 0; s <= std::min(s_max, n); ++s) {
    HilfBounds b;
    const double tail = log_tail_product(x, s);
    b.upper_lhs = prefix_max[static_cast<std::size_t>(s)];
    b.upper_rhs = log_factorial(n) - log_factorial(n - s) + tail;
    b.upper_ok = b.upper_lhs <= b.upper_rhs + slack;
    if (3 * s < n) {
      b.lower_lhs = 2 * tail - hilf_lower_log_constant(n, s);
      b.lower_rhs = prefix_max[static_cast<std::size_t>(std::min(3 * s, n))];
      b.lower_ok = b.lower_lhs <= b.lower_rhs + slack;
    }
    out.push_back(b);
  }
  return out;
}

struct HilfExact {
  bool lower_ok = true, upper_ok = true;
};

// Exact comparison with zero slack, for x_i = m_i / 2^53. After clearing the
// powers of two:
//   lower: exists j <= 3s with  j! |E_{n-j}| 2^{106(n-s)} (2s+1)(3n^3)^{s+1} >= prod_{i>s} m_i^2 2^{53(n-j)}
//   upper: for all j <= s,      j! |E_{n-j}| 2^{53(n-s)} <= n!/(n-s)! prod_{i>s} |m_i| 2^{53(n-j)}
inline std::vector<HilfExact> hilf_bounds_exact(const std::vector<long long>& m, int s_max) {
  const int n = static_cast<int>(m.size());
  const auto e = elementary_symmetric_exact(m);
  std::vector<mpz_class> fact(static_cast<std::size_t>(n + 1));
  fact[0] = 1;
  for (int k = 1; k <= n; ++k) fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k - 1)] * k;
  std::vector<mpz_class> deriv(static_cast<std::size_t>(n + 1));  // j! |E_{n-j}|
  for (int j = 0; j <= n; ++j) deriv[static_cast<std::size_t>(j)] = fact[static_cast<std::size_t>(j)] * abs(e[static_cast<std::size_t>(n - j)]);
  std::vector<HilfExact> out;
  for (int s = 0; s <= std::min(s_max, n); ++s) {
    HilfExact r;
    mpz_class tail = 1;
    for (int i = s; i < n; ++i) tail *= mpz_class(static_cast<long>(std::llabs(m[static_cast<std::size_t>(i)])));
    const mpz_class falling = fact[static_cast<std::size_t>(n)] / fact[static_cast<std::size_t>(n - s)];
    for (int j = 0; j <= s; ++j) {
      const mpz_class lhs = deriv[static_cast<std::size_t>(j)] << static_cast<mp_bitcnt_t>(kDyadicBits * (n - s));
      const mpz_class rhs = (falling * tail) << static_cast<mp_bitcnt_t>(kDyadicBits * (n - j));
      if (lhs > rhs) r.upper_ok = false;
    }
    if (3 * s < n) {
      mpz_class c = 2 * s + 1;
      const mpz_class base = 3 * mpz_class(n) * n * n;
      for (int k = 0; k <= s; ++k) c *= base;
      const mpz_class tail2 = tail * tail;
      bool found = false;
      for (int j = 0; j <= std::min(3 * s, n) && !found; ++j) {
        const mpz_class big = (deriv[static_cast<std::size_t>(j)] * c) << static_cast<mp_bitcnt_t>(2 * kDyadicBits * (n - s));
        const mpz_class small = tail2 << static_cast<mp_bitcnt_t>(kDyadicBits * (n - j));
        found = big >= small;
      }
      r.lower_ok = found;
    }
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructive check of the intermediate estimate
//   |f^{(s)}(xbar_s)| >= 2^{-s} prod_{i>s} |x_i|,  |xbar_s| <= |x_s|,
// with xbar_0 = 0, y_s the root of f^{(s)} of least absolute value, and
// xbar_{s+1} a mean-value point between xbar_s and y_s.

namespace detail {

// Roots of the derivative of prod (x - r_j) (roots ascending, distinct): one
// in each gap, where sum 1/(x - r_j) decreases from +inf to -inf.
inline std::vector<double> derivative_roots(const std::vector<double>& r) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    double lo = r[k], hi = r[k + 1];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      double g = 0;
      for (double rj : r) g += 1.0 / (mid - rj);
      if (g > 0) lo = mid;
      else hi = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

struct SignedLog {
  double log_abs = neg_inf;
  int sign = 0;
};

inline SignedLog eval_from_roots(double log_lead, const std::vector<double>& roots, double x) {
  SignedLog v{log_lead, 1};
  for (double r : roots) {
    const double d = x - r;
    if (d == 0) return {neg_inf, 0};
    v.log_abs += std::log(std::abs(d));
    if (d < 0) v.sign = -v.sign;
  }
  return v;
}

}  // namespace detail

struct Step2Point {
  int s = 0;
  double xbar = 0;
  double log_value = 0;  // log |f^{(s)}(xbar_s)|
  double log_bound = 0;  // -s log 2 + sum_{i>s} log |x_i|
  bool ok = true;
};

inline std::vector<Step2Point> hilf_step2_checkpoints(const std::vector<double>& x, int s_max, double log_slack = 1e-9) {
  const int n = static_cast<int>(x.size());
  s_max = std::min(s_max, n - 1);
  std::vector<std::vector<double>> roots(static_cast<std::size_t>(s_max + 2));
  roots[0] = x;
  std::sort(roots[0].begin(), roots[0].end());
  for (int s = 1; s <= s_max + 1 && s <= n; ++s) roots[static_cast<std::size_t>(s)] = detail::derivative_roots(roots[static_cast<std::size_t>(s - 1)]);
  auto log_lead = [&](int s) { return log_factorial(n) - log_factorial(n - s); };
  auto eval = [&](int s, double at) { return detail::eval_from_roots(log_lead(s), roots[static_cast<std::size_t>(s)], at); };

  std::vector<Step2Point> out;
  double xbar = 0;
  for (int s = 0; s <= s_max; ++s) {
    Step2Point p;
    p.s = s;
    p.xbar = xbar;
    const auto v = eval(s, xbar);
    p.log_value = v.log_abs;
    p.log_bound = -s * std::log(2.0) + log_tail_product(x, s);
    p.ok = p.log_value >= p.log_bound - log_slack;
    if (s >= 1) p.ok = p.ok && std::abs(xbar) <= std::abs(x[static_cast<std::size_t>(s - 1)]) * (1 + 1e-12);
    out.push_back(p);
    if (s == s_max) break;
    const auto& rs = roots[static_cast<std::size_t>(s)];
    const double y = *std::min_element(rs.begin(), rs.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    // Secant slope of f^{(s)} between xbar and its root y.
    const double slope_sign = v.sign * ((xbar - y) > 0 ? 1 : -1);
    const double log_slope = v.log_abs - std::log(std::abs(xbar - y));
    auto h = [&](double at) {
      const auto w = eval(s + 1, at);
      // sign of f^{(s+1)}(at) - slope, compared in log space
      if (w.sign == slope_sign) return w.log_abs > log_slope ? w.sign : -w.sign;
      return w.sign != 0 ? w.sign : -static_cast<int>(slope_sign);
    };
    double lo = std::min(xbar, y), hi = std::max(xbar, y);
    const int hlo = h(lo), hhi = h(hi);
    double next;
    if (hlo != hhi) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (h(mid) == hlo) lo = mid;
        else hi = mid;
      }
      next = 0.5 * (lo + hi);
    } else {
      // No sign change at the ends: take the largest |f^{(s+1)}| on a grid.
      next = lo;
      double best = neg_inf;
      for (int g = 0; g <= 256; ++g) {
        const double at = lo + (hi - lo) * g / 256.0;
        const double val = eval(s + 1, at).log_abs;
        if (val > best) {
          best = val;
          next = at;
        }
      }
    }
    xbar = next;
  }
  return out;
}

}  // namespace algdist
