#include "algdist/hilf.hpp"
#include "algdist/oracles.hpp"

#include <gtest/gtest.h>

using namespace algdist;

namespace {

ProjPoint pt(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return ProjPoint(v);
}

}  // namespace

TEST(ElementarySymmetric, FrozenValues) {
  const auto e = elementary_symmetric({1, 2, 3});
  EXPECT_EQ(e, (std::vector<double>{1, 6, 11, 6}));
  const auto ex = elementary_symmetric_exact({-1, 2, 5});
  EXPECT_EQ(ex[1], 6);
  EXPECT_EQ(ex[2], -2 - 5 + 10);
  EXPECT_EQ(ex[3], -10);
}

TEST(ElementarySymmetric, DerivativesMatchPolynomialExpansion) {
  // f(x) = (x - 0.5)(x - 1) = x^2 - 1.5 x + 0.5
  const auto d = log_abs_derivatives_at_zero({0.5, 1.0});
  EXPECT_NEAR(std::exp(d[0]), 0.5, 1e-15);
  EXPECT_NEAR(std::exp(d[1]), 1.5, 1e-15);
  EXPECT_NEAR(std::exp(d[2]), 2.0, 1e-15);
}

TEST(HilfBounds, TwoRootExample) {
  const auto b = hilf_bounds_float({0.5, 1.0}, 1);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_NEAR(std::exp(b[0].lower_lhs), 0.25 / 24, 1e-12);  // 0.01042
  EXPECT_NEAR(std::exp(b[0].lower_rhs), 0.5, 1e-15);
  EXPECT_TRUE(b[0].lower_ok);
  EXPECT_NEAR(std::exp(b[1].upper_lhs), 1.5, 1e-15);
  EXPECT_NEAR(std::exp(b[1].upper_rhs), 2.0, 1e-15);
  EXPECT_TRUE(b[1].upper_ok);

  const long long half = 1LL << 52, one = 1LL << 53;
  const auto x = hilf_bounds_exact({half, one}, 1);
  EXPECT_TRUE(x[0].lower_ok && x[0].upper_ok && x[1].upper_ok);
}

TEST(HilfBounds, UpperBoundIsTightForEqualMagnitudesAtTopOrder) {
  // s = n: sup_j |f^{(j)}(0)| includes n!, and the bound is n!.
  const auto b = hilf_bounds_float({0.9, 0.9, 0.9}, 3);
  EXPECT_NEAR(b[3].upper_rhs, std::log(6.0), 1e-15);
  EXPECT_GE(b[3].upper_lhs, std::log(6.0) - 1e-15);
  EXPECT_TRUE(b[3].upper_ok);
}

TEST(HilfBounds, ExactDetectsViolation) {
  // A fabricated upper-bound failure: with s = 0 the bound is |prod x_i|,
  // which equals |f(0)|; the exact check must accept equality.
  const auto x = hilf_bounds_exact({3, 5, 7}, 0);
  EXPECT_TRUE(x[0].upper_ok);
}

TEST(HilfBounds, FloatAndExactAgreeOnRandomDyadicInstances) {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.uniform_int(3, 20);
    const auto s = draw_dyadic_sample(n, rng);
    const auto f = hilf_bounds_float(s.x, n);
    const auto e = hilf_bounds_exact(s.m, n);
    ASSERT_EQ(f.size(), e.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      EXPECT_TRUE(f[k].lower_ok && f[k].upper_ok) << "n=" << n << " s=" << k;
      EXPECT_TRUE(e[k].lower_ok && e[k].upper_ok) << "n=" << n << " s=" << k;
    }
  }
}

TEST(HilfBounds, LargeDegreeFloat) {
  Rng rng(62);
  for (int n : {40, 60}) {
    const auto s = draw_dyadic_sample(n, rng);
    for (const auto& b : hilf_bounds_float(s.x, n)) EXPECT_TRUE(b.lower_ok && b.upper_ok);
  }
}

TEST(DyadicSample, SortedAndInRange) {
  Rng rng(63);
  const auto s = draw_dyadic_sample(50, rng);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(s.x[i], std::ldexp(static_cast<double>(s.m[i]), -53));
    EXPECT_GE(std::abs(s.x[i]), 1e-6);
    EXPECT_LT(std::abs(s.x[i]), 1.0 + 1e-300);
    if (i > 0) {
      EXPECT_LE(std::abs(s.x[i - 1]), std::abs(s.x[i]));
    }
  }
}

TEST(HilfStep2, ConstructedPointsSatisfyTheBound) {
  Rng rng(64);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(2, 30);
    const auto s = draw_dyadic_sample(n, rng);
    const int s_max = (n - 1) / 3;
    const auto pts = hilf_step2_checkpoints(s.x, s_max);
    ASSERT_EQ(static_cast<int>(pts.size()), s_max + 1);
    EXPECT_EQ(pts[0].xbar, 0.0);
    for (const auto& p : pts) EXPECT_TRUE(p.ok) << "n=" << n << " s=" << p.s << " " << p.log_value << " " << p.log_bound;
  }
}

TEST(HilfStep2, DerivativeRootsInterlace) {
  const std::vector<double> r = {-0.7, 0.1, 0.4, 0.9};
  const auto d = detail::derivative_roots(r);
  ASSERT_EQ(d.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_GT(d[k], r[k]);
    EXPECT_LT(d[k], r[k + 1]);
  }
  // p(x) = x^2 - 1 has derivative root 0.
  EXPECT_NEAR(detail::derivative_roots({-1, 1})[0], 0.0, 1e-15);
}

TEST(SeriesOracle, MatchesFrozenSymbolicPartials) {
  // Same configuration as the frozen symbolic values in the distance tests.
  ZeroCycle z(1);
  for (Complex a : {Complex(0.3, 0.1), Complex(-0.5, 0.4), Complex(1.2, -0.7)}) z.add(pt({1, a}));
  AffineChart chart(pt({1, 0}));
  const auto p = series_partials_p1(chart, z, 3);
  const double scale = std::exp(exp_distance_jet(chart, z, 0).log_scale);
  EXPECT_NEAR(scale * p[0][0], 0.13195652611025385587, 1e-12);
  EXPECT_NEAR(scale * p[1][0], -0.31699249397571282019, 1e-12);
  EXPECT_NEAR(scale * p[1][1], 0.093053115837681917416, 1e-12);
  EXPECT_NEAR(scale * p[3][0], 4.1936654360420322380, 1e-11);
  EXPECT_NEAR(scale * p[0][3], 3.4161064005290149111, 1e-11);
}

TEST(SeriesOracle, MatchesJetOnRandomCycles) {
  Rng rng(65);
  for (int trial = 0; trial < 50; ++trial) {
    const ProjPoint theta = random_point(1, rng);
    ZeroCycle z(1);
    const int n = rng.uniform_int(1, 8);
    for (int i = 0; i < n; ++i) z.add(random_point_at_distance(theta, rng.uniform(0.05, 0.95), rng), rng.uniform_int(1, 2));
    AffineChart chart(theta);
    const int S = 6;
    const ScaledJet j = exp_distance_jet(chart, z, S);
    const auto p = series_partials_p1(chart, z, S);
    double biggest = 0;
    for (int a = 0; a <= S; ++a)
      for (int b = 0; a + b <= S; ++b) biggest = std::max(biggest, std::abs(p[a][b]));
    for (int a = 0; a <= S; ++a)
      for (int b = 0; a + b <= S; ++b) {
        const double jv = extract_partial(j.jet, std::vector<int>{a, b});
        EXPECT_LE(relative_error(jv, p[a][b], 1e-4 * biggest), 1e-8) << a << "," << b;
      }
  }
}

TEST(FiniteDifference, RichardsonOnKnownFunction) {
  // g = exp(x) sin(y): d_x^2 d_y g(0) = 1.
  auto g = [](const std::vector<long double>& x) { return std::exp(x[0]) * std::sin(x[1]); };
  EXPECT_NEAR(fd_partial(g, {2, 1}), 1.0, 1e-9);
  EXPECT_NEAR(fd_partial(g, {0, 3}), -1.0, 1e-9);
  EXPECT_NEAR(relative_error(1.0, 1.0 + 1e-6, 1e-8), 1e-6 / (1 + 1e-6), 1e-15);
}

TEST(FiniteDifference, JetOfThreeDimensionalCycle) {
  Rng rng(66);
  const ProjPoint theta = random_point(3, rng);
  ZeroCycle z(3);
  for (int i = 0; i < 4; ++i) z.add(random_point_at_distance(theta, rng.uniform(0.2, 0.9), rng));
  AffineChart chart(theta);
  const ScaledJet j = exp_distance_jet(chart, z, 3);
  auto g = [&](const std::vector<long double>& x) { return exp_distance_direct(chart, z, x); };
  const auto L = JetLayout::get(6, 3);
  double biggest = 0;
  std::vector<double> jv(L->size());
  for (std::size_t i = 0; i < L->size(); ++i) {
    jv[i] = std::exp(j.log_scale) * std::exp(L->log_factorial(i)) * j.jet[i];
    biggest = std::max(biggest, std::abs(jv[i]));
  }
  for (std::size_t i = 0; i < L->size(); ++i) {
    const std::vector<int> m(L->exponents(i).begin(), L->exponents(i).end());
    EXPECT_LE(relative_error(jv[i], fd_partial(g, m), 1e-8 * biggest), 1e-4);
  }
}
