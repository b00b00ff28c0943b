#pragma once
// Independent evaluations of derivatives of exp(D(., Z)) used to cross-check
// jets: direct long double evaluation with central finite differences, and for
// P^1 the closed power series in (w, conj w).

#include "algdist/distance.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace algdist {

using LComplex = std::complex<long double>;

// exp(sign * D(chart_point(w), Z)) with w given by real coordinates
// (x_1, y_1, x_2, y_2, ...), all in long double.
inline long double exp_distance_direct(const AffineChart& chart, const ZeroCycle& z,
                                       const std::vector<long double>& xr, int sign = 1) {
  const int t = chart.ambient();
  require(static_cast<int>(xr.size()) == 2 * t, ErrorKind::dimension_mismatch, "dimension mismatch");
  const CMatrix& u = chart.unitary();
  std::vector<LComplex> p(static_cast<std::size_t>(t + 1));
  long double nrm = 0;
  for (int i = 0; i <= t; ++i) {
    LComplex s(u(i, 0).real(), u(i, 0).imag());
    for (int j = 0; j < t; ++j)
      s += LComplex(u(i, j + 1).real(), u(i, j + 1).imag()) *
           LComplex(xr[2 * static_cast<std::size_t>(j)], xr[2 * static_cast<std::size_t>(j) + 1]);
    p[static_cast<std::size_t>(i)] = s;
    nrm += std::norm(s);
  }
  long double log_v = 0;
  for (const auto& q : z.points()) {
    LComplex dot = 0;
    for (int i = 0; i <= t; ++i)
      dot += std::conj(LComplex(q.point[i].real(), q.point[i].imag())) * p[static_cast<std::size_t>(i)];
    const long double d2 = std::max(1 - std::norm(dot) / nrm, 0.0L);
    log_v += q.mult * 0.5L * std::log(d2);
  }
  return std::exp(sign * log_v);
}

// Mixed partial d^I g(0) by nested central differences with one Richardson
// step (h and h/2), error O(h^4).
inline double fd_partial(const std::function<long double(const std::vector<long double>&)>& g,
                         const std::vector<int>& multi, long double h = 0.002L) {
  auto nested = [&](long double step) {
    std::vector<int> m = multi;
    std::function<long double(std::vector<long double>, std::size_t)> rec =
        [&](std::vector<long double> x, std::size_t k) -> long double {
      while (k < m.size() && m[k] == 0) ++k;
      if (k == m.size()) return g(x);
      --m[k];
      x[k] += step;
      const long double up = rec(x, k);
      x[k] -= 2 * step;
      const long double down = rec(x, k);
      ++m[k];
      return (up - down) / (2 * step);
    };
    return rec(std::vector<long double>(multi.size(), 0.0L), 0);
  };
  const long double coarse = nested(h), fine = nested(h / 2);
  return static_cast<double>((4 * fine - coarse) / 3);
}

// |a - b| relative to the larger magnitude, floored at `floor`.
inline double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Real partials d_x^p d_y^q of exp(D(chart_point(w), Z)) / prod |z_i, theta|^{m_i}
// on P^1, for p + q <= S, from the series of log F in u = w, v = conj(w):
//   log F = a_00 - 1/2 sum_i m_i sum_j (u^j / zeta_i^j + v^j / conj(zeta_i)^j) / j
//           - deg/2 log(1 + u v),
// zeta_i the chart coordinate of z_i. Result indexed [p][q].
inline std::vector<std::vector<double>> series_partials_p1(const AffineChart& chart, const ZeroCycle& z, int S) {
  require(chart.ambient() == 1 && z.ambient() == 1, ErrorKind::precondition, "series oracle is for P^1");
  const auto sz = static_cast<std::size_t>(S + 1);
  using C = LComplex;
  std::vector<std::vector<C>> a(sz, std::vector<C>(sz, 0));
  for (const auto& q : z.points()) {
    const Complex zc = chart.coords(q.point)[0];
    const C inv = 1.0L / C(zc.real(), zc.imag());
    C pw = 1;
    for (int j = 1; j <= S; ++j) {
      pw *= inv;
      a[static_cast<std::size_t>(j)][0] += -0.5L * q.mult * pw / static_cast<long double>(j);
    }
  }
  for (int k = 1; k <= S; ++k) a[0][static_cast<std::size_t>(k)] = std::conj(a[static_cast<std::size_t>(k)][0]);
  for (int m = 1; 2 * m <= S; ++m)
    a[static_cast<std::size_t>(m)][static_cast<std::size_t>(m)] +=
        -0.5L * z.degree() * ((m % 2 == 1) ? 1.0L : -1.0L) / static_cast<long double>(m);

  // e = exp(a - a_00) through u d/du e = (u d/du a) e, and the v version on j = 0.
  std::vector<std::vector<C>> e(sz, std::vector<C>(sz, 0));
  e[0][0] = 1;
  for (int tot = 1; tot <= S; ++tot)
    for (int j = 0; j <= tot; ++j) {
      const int k = tot - j;
      C acc = 0;
      if (j > 0) {
        for (int j2 = 1; j2 <= j; ++j2)
          for (int k2 = 0; k2 <= k; ++k2)
            acc += static_cast<long double>(j2) * a[static_cast<std::size_t>(j2)][static_cast<std::size_t>(k2)] *
                   e[static_cast<std::size_t>(j - j2)][static_cast<std::size_t>(k - k2)];
        acc /= static_cast<long double>(j);
      } else {
        for (int k2 = 1; k2 <= k; ++k2)
          acc += static_cast<long double>(k2) * a[0][static_cast<std::size_t>(k2)] * e[0][static_cast<std::size_t>(k - k2)];
        acc /= static_cast<long double>(k);
      }
      e[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = acc;
    }

  auto fact = [](int n) { return std::tgamma(static_cast<long double>(n) + 1); };
  auto binom = [&](int n, int k) { return fact(n) / (fact(k) * fact(n - k)); };
  std::vector<std::vector<double>> out(sz, std::vector<double>(sz, 0.0));
  for (int p = 0; p <= S; ++p)
    for (int q = 0; p + q <= S; ++q) {
      C sum = 0;
      for (int a1 = 0; a1 <= p; ++a1)
        for (int b1 = 0; b1 <= q; ++b1) {
          const int du = a1 + b1, dv = p - a1 + q - b1;
          const long double sgn = ((q - b1) % 2 == 0) ? 1.0L : -1.0L;
          sum += binom(p, a1) * binom(q, b1) * sgn * fact(du) * fact(dv) *
                 e[static_cast<std::size_t>(du)][static_cast<std::size_t>(dv)];
        }
      C iq = 1;
      for (int r = 0; r < q; ++r) iq *= C(0, 1);
      out[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = static_cast<double>((iq * sum).real());
    }
  return out;
}

}  // namespace algdist
