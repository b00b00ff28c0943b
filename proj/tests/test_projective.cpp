#include "algdist/projective.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace algdist;

namespace {

ProjPoint pt(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return ProjPoint(v);
}

}  // namespace

TEST(FsDistance, FrozenValues) {
  EXPECT_NEAR(fs_distance(pt({1, 0}), pt({0, 1})), 1.0, 1e-15);
  EXPECT_NEAR(fs_distance(pt({1, 0}), pt({1, 0})), 0.0, 1e-15);
  EXPECT_NEAR(fs_distance(pt({1, 0}), pt({1, 1})), 0.70710678, 1e-8);
}

TEST(FsDistance, PhaseInvariantAndSymmetric) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    ProjPoint p = random_point(3, rng), q = random_point(3, rng);
    ProjPoint q_phase(CVector(q.coords() * std::polar(1.0, rng.uniform(0, 6.28))));
    EXPECT_NEAR(fs_distance(p, q), fs_distance(q, p), 1e-14);
    EXPECT_NEAR(fs_distance(p, q), fs_distance(p, q_phase), 1e-12);
    EXPECT_NEAR(fs_distance(q, q_phase), 0.0, 1e-12);
  }
}

TEST(FsDistance, DimensionMismatchThrows) {
  EXPECT_THROW(fs_distance(pt({1, 0}), pt({1, 0, 0})), Error);
}

TEST(FsDistance, TriangleInequalityOnRandomTriples) {
  Rng rng(12);
  int failures = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    const int t = 1 + trial % 3;
    ProjPoint a = random_point(t, rng), b = random_point(t, rng), c = random_point(t, rng);
    const double ab = fs_distance(a, b), bc = fs_distance(b, c), ac = fs_distance(a, c);
    failures += ac > ab + bc + 1e-10;
    failures += ab < 0 || ab > 1;
  }
  EXPECT_EQ(failures, 0);
}

TEST(FsDistance, SmallDistancesKeepRelativePrecision) {
  Rng rng(13);
  ProjPoint theta = random_point(2, rng);
  for (double d : {1e-3, 1e-6, 1e-9}) {
    ProjPoint z = random_point_at_distance(theta, d, rng);
    EXPECT_NEAR(fs_distance(theta, z) / d, 1.0, 1e-6);
  }
}

TEST(PointSubspace, FrozenValues) {
  CMatrix frame = CMatrix::Zero(3, 2);
  frame(0, 0) = 1;
  frame(1, 1) = 1;
  auto w = ProjSubspace::from_orthonormal(frame);
  EXPECT_NEAR(point_subspace_distance(pt({0, 0, 1}), w), 1.0, 1e-15);
  EXPECT_NEAR(point_subspace_distance(pt({0.3, Complex(0, 2), 0}), w), 0.0, 1e-15);
  auto line = ProjSubspace::span(pt({1, 0, 0}));
  EXPECT_NEAR(point_subspace_distance(pt({1, 1, 0}), line), 0.70710678, 1e-8);
}

TEST(PointSubspace, EqualsFsDistanceForLinesAndPrincipalAngle) {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    ProjPoint p = random_point(3, rng), q = random_point(3, rng);
    EXPECT_NEAR(point_subspace_distance(p, ProjSubspace::span(q)), fs_distance(p, q), 1e-12);
    auto w = ProjSubspace::span(rng.gaussian_matrix(4, 2));
    // Smallest principal-angle sine between span(p) and W via SVD.
    Eigen::JacobiSVD<CMatrix> svd(w.frame().adjoint() * p.coords());
    const double cosine = svd.singularValues()(0);
    EXPECT_NEAR(point_subspace_distance(p, w), std::sqrt(std::max(0.0, 1 - cosine * cosine)), 1e-10);
  }
}

TEST(PointSubspace, SamplingOracle) {
  // The minimum over sampled points of W approaches the distance from above.
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    ProjPoint p = random_point(2, rng);
    auto w = ProjSubspace::span(rng.gaussian_matrix(3, 2));
    const double exact = point_subspace_distance(p, w);
    // The nearest point of W is the projection; sample around it.
    CVector proj = w.frame() * (w.frame().adjoint() * p.coords());
    double best = 1.0;
    for (int s = 0; s < 1000; ++s) {
      CVector c = w.frame().adjoint() * proj + 1e-4 * rng.gaussian_vector(2);
      double d = fs_distance(p, ProjPoint(CVector(w.frame() * c)));
      best = std::min(best, d);
      EXPECT_GE(d, exact - 1e-12);
    }
    EXPECT_NEAR(best, exact, 1e-6);
  }
}

TEST(JoinLine, StandardBasisExample) {
  auto line = join_line(pt({1, 0}), pt({1, 0}));
  ASSERT_EQ(line.ambient(), 3);
  EXPECT_TRUE(contains(line, pt({1, 0, 0, 0})));
  EXPECT_TRUE(contains(line, pt({0, 0, 1, 0})));
  EXPECT_FALSE(contains(line, pt({0, 1, 0, 0})));
}

TEST(JoinLine, DiagonalDistanceClosedForm) {
  Rng rng(16);
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = 1 + trial % 3;
    ProjPoint theta = random_point(t, rng), x = random_point(t, rng), y = random_point(t, rng);
    const double dx = fs_distance(x, theta), dy = fs_distance(y, theta);
    const double dj = point_subspace_distance(diagonal_point(theta), join_line(x, y));
    EXPECT_NEAR(dj, std::sqrt((dx * dx + dy * dy) / 2), 1e-12);
    EXPECT_LE(std::min(dx, dy), dj + 1e-10);
    EXPECT_LE(dj, std::max(dx, dy) + 1e-10);
  }
}

TEST(JoinLine, ThroughThetaBruteForce) {
  // p = theta: the join distance is bounded by |q,theta|; compare with a grid
  // minimisation of the point distance along the line.
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    ProjPoint theta = random_point(2, rng), q = random_point(2, rng);
    auto line = join_line(theta, q);
    const double dj = point_subspace_distance(diagonal_point(theta), line);
    EXPECT_LE(dj, fs_distance(q, theta) + 1e-10);
    EXPECT_GE(dj, 0.0);
    double best = 1.0;
    ProjPoint diag = diagonal_point(theta);
    for (int i = 0; i <= 400; ++i) {
      const double a = 3.14159265358979 / 2 * i / 400;
      for (int k = 0; k < 16; ++k) {
        CVector v = std::cos(a) * line.frame().col(0) + std::polar(std::sin(a), 6.2831853 * k / 16) * line.frame().col(1);
        best = std::min(best, fs_distance(diag, ProjPoint(v)));
      }
    }
    EXPECT_NEAR(best, dj, 5e-3);
    EXPECT_GE(best, dj - 1e-12);
  }
}

TEST(Chart, FrozenValues) {
  ProjPoint theta = pt({1, 0});
  AffineChart chart(theta, CMatrix::Identity(2, 2));
  CVector w(1);
  w[0] = 1;
  EXPECT_NEAR(fs_distance(chart_point(chart, w), pt({1, 1})), 0.0, 1e-15);
  EXPECT_NEAR(fs_distance(theta, chart_point(chart, w)), 0.70710678, 1e-8);
  EXPECT_NEAR(fs_distance(chart_point(chart, CVector::Zero(1)), theta), 0.0, 1e-15);
}

TEST(Chart, HouseholderCenterAndRoundTrip) {
  Rng rng(18);
  for (int trial = 0; trial < 500; ++trial) {
    const int t = 1 + trial % 4;
    ProjPoint theta = random_point(t, rng);
    AffineChart chart(theta);
    const CMatrix& u = chart.unitary();
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(t + 1, t + 1)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(fs_distance(chart_point(chart, CVector::Zero(t)), theta), 1e-12);
    CVector w = rng.gaussian_vector(t);
    CVector back = chart_coords(chart, chart_point(chart, w));
    EXPECT_LT((back - w).norm(), 1e-10);
    const double r = w.norm();
    EXPECT_NEAR(fs_distance(theta, chart_point(chart, w)), r / std::sqrt(1 + r * r), 1e-12);
  }
}

TEST(Chart, InfinityThrows) {
  ProjPoint theta = pt({1, 0});
  AffineChart chart(theta);
  try {
    chart_coords(chart, pt({0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::chart_infinity);
    EXPECT_STREQ(e.what(), "point at chart infinity");
  }
}

TEST(Chart, DistortionBoundsOnCoordinateBall) {
  // Pairs with chart coordinates of norm below r = 0.9.
  Rng rng(19);
  const double r = 0.9;
  const double c1 = 1.0 / std::sqrt(1 - r * r);
  for (int trial = 0; trial < 10000; ++trial) {
    const int t = 1 + trial % 3;
    ProjPoint theta = random_point(t, rng);
    AffineChart chart(theta);
    auto draw = [&] {
      CVector w = rng.gaussian_vector(t);
      return CVector(w.normalized() * r * std::pow(rng.uniform(), 1.0 / (2 * t)));
    };
    CVector w1 = draw(), w2 = draw();
    const double d = fs_distance(chart_point(chart, w1), chart_point(chart, w2));
    const double e = (chart_coords(chart, chart_point(chart, w1)) - chart_coords(chart, chart_point(chart, w2))).norm();
    EXPECT_LE(e, c1 * d + 1e-10);
    EXPECT_LE(d, e + 1e-10);
  }
}

TEST(RandomPoint, DeterministicAndDistinct) {
  ProjPoint a = random_point(3, 42), b = random_point(3, 42), c = random_point(3, 43);
  EXPECT_EQ(a.coords(), b.coords());
  EXPECT_GT(fs_distance(a, c), 0.0);
}

TEST(RandomPoint, MeanDistanceMatchesResamplingOracle) {
  // Haar-random points in P^t have |<p,q>|^2 ~ Beta(1,t). Compare against an independently seeded resample of the same statistic.
  const int t = 2;
  Rng rng(20), oracle_rng(21);
  ProjPoint fixed = random_point(t, rng);
  const int n = 100000;
  double sum = 0, sum2 = 0, osum = 0, osum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double d = fs_distance(fixed, random_point(t, rng));
    sum += d;
    sum2 += d * d;
    // Oracle: sin of the angle from a Beta(1,t) squared cosine, drawn as 1 - U^{1/t}.
    const double c2 = 1 - std::pow(oracle_rng.uniform(), 1.0 / t);
    const double od = std::sqrt(1 - c2);
    osum += od;
    osum2 += od * od;
  }
  const double mean = sum / n, omean = osum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n + (osum2 / n - omean * omean) / n);
  EXPECT_LT(std::abs(mean - omean), 3 * se);
  // sin^2 ~ Beta(t,1), so E sin = t/(t+1/2) = 0.8 for t = 2.
  EXPECT_NEAR(mean, 0.8, 0.01);
}
