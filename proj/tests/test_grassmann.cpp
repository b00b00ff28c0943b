#include "algdist/grassmann.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace algdist;

namespace {

CMatrix cols(int rows, std::initializer_list<std::initializer_list<Complex>> columns) {
  CMatrix m = CMatrix::Zero(rows, static_cast<Eigen::Index>(columns.size()));
  Eigen::Index c = 0;
  for (const auto& col : columns) {
    Eigen::Index r = 0;
    for (auto x : col) m(r++, c) = x;
    ++c;
  }
  return m;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::precondition;
}

double subspace_gap(const GrassPoint& a, const GrassPoint& b) {
  return (a.projector() - b.projector()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(GrassDistance, FrozenValues) {
  auto e1 = GrassPoint::span(cols(2, {{1, 0}}));
  auto e2 = GrassPoint::span(cols(2, {{0, 1}}));
  EXPECT_NEAR(grass_distance(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(grass_distance(e1, e2), 1.0, 1e-15);
  auto a = GrassPoint::span(cols(3, {{1, 0, 0}}));
  auto b = GrassPoint::span(cols(3, {{1, 1, 0}}));
  EXPECT_NEAR(grass_distance(a, b), 0.70710678, 1e-8);
}

TEST(GrassDistance, DimensionMismatch) {
  auto a = GrassPoint::span(cols(3, {{1, 0, 0}}));
  auto b = GrassPoint::span(cols(3, {{1, 0, 0}, {0, 1, 0}}));
  auto c = GrassPoint::span(cols(2, {{1, 0}}));
  EXPECT_EQ(kind_of([&] { grass_distance(a, b); }), ErrorKind::dimension_mismatch);
  EXPECT_EQ(kind_of([&] { grass_distance(a, c); }), ErrorKind::dimension_mismatch);
}

TEST(GrassDistance, PseudometricOnRandomTriples) {
  Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const int t = rng.uniform_int(1, 5);
    const int k = rng.uniform_int(1, t + 1);
    auto a = random_subspace(t, k, rng), b = random_subspace(t, k, rng), c = random_subspace(t, k, rng);
    const double ab = grass_distance(a, b), ba = grass_distance(b, a);
    EXPECT_NEAR(ab, ba, 1e-10);
    EXPECT_LE(grass_distance(a, c), ab + grass_distance(b, c) + 1e-10);
    EXPECT_LT(grass_distance(a, a), 1e-10);
  }
}

TEST(GrassDistance, AgreesWithPointDistanceForLines) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    ProjPoint p = random_point(3, rng), q = random_point(3, rng);
    EXPECT_NEAR(grass_distance(ProjSubspace::span(p), ProjSubspace::span(q)), fs_distance(p, q), 1e-12);
  }
}

TEST(RandomSubspace, DeterministicAndOrthonormal) {
  Rng a(5), b(5);
  auto x = random_subspace(4, 2, a), y = random_subspace(4, 2, b);
  EXPECT_EQ(x.frame(), y.frame());
  EXPECT_LT((x.frame().adjoint() * x.frame() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RandomSubspace, LinesAreUniform) {
  // For Haar lines in C^{t+1}, |<e_0, v>|^2 is Beta(1, t) with mean 1/(t+1).
  Rng rng(6);
  const int t = 3, n = 40000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += std::norm(random_subspace(t, 1, rng).frame()(0, 0));
  EXPECT_NEAR(sum / n, 0.25, 4 * std::sqrt(3.0 / 80.0 / n));
}

TEST(BruhatChart, OriginAndOneDimensionalCase) {
  auto w0 = GrassPoint::span(cols(2, {{1, 0}}));
  BruhatChart chart(w0);
  ASSERT_EQ(chart.parameter_count(), 1);
  EXPECT_LT(subspace_gap(chart.point(CVector::Zero(1)), w0), 1e-15);
  const Complex a(0.3, -0.7);
  CVector u(1);
  u[0] = a;
  // The complement basis vector may differ from e_2 by a phase.
  const Complex phase = chart.base().complement()(1, 0);
  auto expected = GrassPoint::span(cols(2, {{1, a * phase}}));
  EXPECT_LT(subspace_gap(chart.point(u), expected), 1e-14);
}

TEST(BruhatChart, RoundTrip) {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const int t = rng.uniform_int(1, 5), k = rng.uniform_int(1, t);
    BruhatChart chart(random_subspace(t, k, rng));
    CVector u = rng.gaussian_vector(chart.parameter_count()) * rng.uniform(0.01, 3.0);
    CVector back = chart.coords(chart.point(u));
    EXPECT_LT((back - u).norm(), 1e-10 * std::max(1.0, u.norm()));
    auto w = random_subspace(t, k, rng);
    EXPECT_LT(subspace_gap(chart.point(chart.coords(w)), w), 1e-10);
  }
}

TEST(BruhatChart, OutsideBigCell) {
  auto w0 = GrassPoint::span(cols(3, {{1, 0, 0}}));
  BruhatChart chart(w0);
  EXPECT_EQ(kind_of([&] { chart.coords(GrassPoint::span(cols(3, {{0, 1, 0}}))); }), ErrorKind::chart_infinity);
}

TEST(BruhatChart, DistanceBoundedByParameterNorm) {
  // |chart(u), W0| <= |u| with ratio tending to 1 as u -> 0 along a rank-one direction.
  Rng rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = rng.uniform_int(1, 5), k = rng.uniform_int(1, t);
    BruhatChart chart(random_subspace(t, k, rng));
    CVector u = rng.gaussian_vector(chart.parameter_count()) * rng.uniform(1e-4, 2.0);
    EXPECT_LE(grass_distance(chart.point(u), chart.base()), u.norm() + 1e-12);
  }
  BruhatChart chart(random_subspace(3, 1, rng));
  CVector dir = rng.gaussian_vector(chart.parameter_count()).normalized();
  const double r = 1e-6;
  EXPECT_NEAR(grass_distance(chart.point(CVector(dir * r)), chart.base()) / r, 1.0, 1e-9);
}

TEST(ContainedSubspace, IdentityWhenEqual) {
  Rng rng(15);
  auto f = random_subspace(3, 3, rng);
  auto w = GrassPoint::span(CMatrix(f.frame().leftCols(1)));
  EXPECT_LT(subspace_gap(contained_subspace(w, f, f), w), 1e-12);
}

TEST(ContainedSubspace, InequalityOnRandomRotations) {
  Rng rng(16);
  for (int trial = 0; trial < 10000; ++trial) {
    const int t = rng.uniform_int(2, 5);
    const int fd = rng.uniform_int(2, t), wd = rng.uniform_int(1, fd - 1);
    auto f = random_subspace(t, fd, rng);
    auto w = GrassPoint::span(CMatrix(f.frame() * random_subspace(fd - 1, wd, rng).frame()));
    auto f2 = random_subspace(t, fd, rng);
    auto w2 = contained_subspace(w, f, f2);
    ASSERT_EQ(w2.dim(), wd);
    EXPECT_LT((w2.frame() - f2.projector() * w2.frame()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(grass_distance(w, w2), grass_distance(f, f2) + 1e-10);
  }
}

TEST(ContainedSubspace, NearlyOrthogonalTarget) {
  // dim F = 2 in C^4 so an F' orthogonal to F exists.
  CMatrix id = CMatrix::Identity(4, 4);
  auto f = GrassPoint::from_orthonormal(id.leftCols(2));
  auto w = GrassPoint::from_orthonormal(id.leftCols(1));
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    CMatrix g = id.rightCols(2) + 1e-6 * rng.gaussian_matrix(4, 2);
    auto f2 = GrassPoint::span(g);
    auto w2 = contained_subspace(w, f, f2);
    EXPECT_LE(grass_distance(w, w2), grass_distance(f, f2) + 1e-10);
  }
}

TEST(ContainedSubspace, RejectsUncontained) {
  CMatrix id = CMatrix::Identity(3, 3);
  auto f = GrassPoint::from_orthonormal(id.leftCols(2));
  auto w = GrassPoint::from_orthonormal(id.rightCols(1));
  EXPECT_EQ(kind_of([&] { contained_subspace(w, f, f); }), ErrorKind::precondition);
}

TEST(DirectSumImage, NoFartherThanPerturbation) {
  Rng rng(18);
  for (int trial = 0; trial < 10000; ++trial) {
    const int t = rng.uniform_int(2, 6);
    const int fd = rng.uniform_int(2, t + 1), wd = rng.uniform_int(1, fd - 1);
    auto f = random_subspace(t, fd, rng);
    auto w = GrassPoint::span(CMatrix(f.frame().leftCols(wd)));
    BruhatChart chart(w);
    CVector u = rng.gaussian_vector(chart.parameter_count()) * std::pow(10.0, rng.uniform(-3, 0));
    auto w_tilde = chart.point(u);
    GrassPoint image;
    try {
      image = direct_sum_image(w_tilde, w, f);
    } catch (const Error&) {
      continue;  // W-tilde meets V
    }
    EXPECT_LE(grass_distance(f, image), grass_distance(w, w_tilde) + 1e-10);
  }
}

TEST(Incidence, PointInsideIsZero) {
  Rng rng(19);
  auto v = random_subspace(3, 2, rng);
  ZeroCycle z(3);
  z.add(ProjPoint(CVector(v.frame().col(0) + v.frame().col(1))));
  z.add(random_point(3, rng));
  EXPECT_LT(incidence_distance(v, z), 1e-12);
}

TEST(Incidence, HyperplaneEqualsPointDistance) {
  Rng rng(20);
  auto v = random_subspace(2, 2, rng);
  ZeroCycle z(2);
  ProjPoint p = random_point(2, rng);
  z.add(p);
  EXPECT_EQ(incidence_distance(v, z), point_subspace_distance(p, v));
}

TEST(Incidence, ZeroCycleMatchesLocalSearch) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int t = rng.uniform_int(2, 4), k = rng.uniform_int(1, t);
    auto v = random_subspace(t, k, rng);
    ZeroCycle z(t);
    for (int i = 0; i < 5; ++i) z.add(random_point(t, rng));
    const double closed = incidence_distance(v, z);
    double oracle = 1;
    for (const auto& p : z.points()) oracle = std::min(oracle, incidence_local_search(v, p.point, rng));
    EXPECT_LE(closed, oracle + 1e-4);
    EXPECT_NEAR(closed, oracle, 1e-4);
  }
}

TEST(Incidence, LinearCycleSmallestAngle) {
  CMatrix id = CMatrix::Identity(4, 4);
  LinearCycle lines(3, 2);
  lines.add(GrassPoint::from_orthonormal(id.leftCols(2)));
  auto v = GrassPoint::from_orthonormal(id.rightCols(2));
  EXPECT_NEAR(incidence_distance(v, lines), 1.0, 1e-15);
  CMatrix tilted = id.rightCols(2);
  tilted(1, 0) = 0.5;
  EXPECT_NEAR(incidence_distance(GrassPoint::span(tilted), lines), 2.0 / std::sqrt(5.0), 1e-12);
}

TEST(Incidence, ProductDivisorUsesHyperplanes) {
  Rng rng(22);
  ProductDivisor z = random_product_divisor(2, 3, rng);
  ProjPoint p = random_point(2, rng);
  double best = 1;
  for (const auto& f : z.factors()) best = std::min(best, std::abs(apply_form(f.covector.normalized(), p.coords())));
  EXPECT_NEAR(incidence_distance(ProjSubspace::span(p), z), best, 1e-12);
}

TEST(FarSubspace, DeterministicAndSatisfiesThreshold) {
  Rng rng(23);
  ZeroCycle z(3);
  for (int i = 0; i < 6; ++i) z.add(random_point(3, rng));
  auto a = find_far_subspace(z, 1, 99, 50), b = find_far_subspace(z, 1, 99, 50);
  EXPECT_EQ(a.space.frame(), b.space.frame());
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_GE(std::log(a.distance), -std::log(kFarConstant) - std::log(6.0));
  EXPECT_EQ(a.space.codim(), 1);
}

TEST(FarSubspace, DegreeOneUsuallyFirstDraw) {
  ZeroCycle z(2);
  z.add(random_point(2, 1));
  int first = 0;
  for (std::uint64_t s = 0; s < 200; ++s) first += find_far_subspace(z, 1, s, 100).draws == 1;
  EXPECT_GE(first, 100);
}

TEST(FarSubspace, Errors) {
  ZeroCycle z(2);
  z.add(random_point(2, 1));
  EXPECT_EQ(kind_of([&] { find_far_subspace(z, 1, 0, 5, 0.5); }), ErrorKind::no_far_subspace);
  Rng rng(3);
  LinearCycle lines(3, 2);
  lines.add(random_subspace(3, 2, rng));
  EXPECT_EQ(kind_of([&] { find_far_subspace(lines, 1, 0, 5); }), ErrorKind::precondition);
  EXPECT_NO_THROW(find_far_subspace(lines, 2, 0, 50));
}

TEST(TubeMeasure, WholeGrassmannianAtOne) {
  ZeroCycle z(2);
  z.add(random_point(2, 4));
  const Estimate e = tube_measure(z, 2, 1.0, 2000, 7);
  EXPECT_EQ(e.value, 1.0);
}

TEST(TubeMeasure, WorkerCountDoesNotMatter) {
  ZeroCycle z(2);
  z.add(random_point(2, 4));
  const Estimate a = tube_measure(z, 2, 0.3, 5000, 8, 1), b = tube_measure(z, 2, 0.3, 5000, 8, 4);
  EXPECT_EQ(a.value, b.value);
}

// The incidence set of a point is a complex hypersurface in the space of
// hyperplanes, so the tube has measure 1 - (1 - eps^2)^t: quadratic, not
// linear, in eps. Halving eps divides the fraction by about 4.
TEST(TubeMeasure, HyperplaneTubeFollowsClosedForm) {
  ZeroCycle z(2);
  z.add(random_point(2, 4));
  for (double eps : {0.1, 0.2, 0.4}) {
    const Estimate e = tube_measure(z, 2, eps, 200000, 9);
    const double exact = 1 - std::pow(1 - eps * eps, 2);
    EXPECT_NEAR(e.value, exact, 4 * std::sqrt(exact * (1 - exact) / 200000));
  }
  const Estimate big = tube_measure(z, 2, 0.4, 200000, 10), small = tube_measure(z, 2, 0.2, 200000, 10);
  EXPECT_NEAR(small.value / big.value, 0.25, 0.02);
}

TEST(TubeMeasure, BoundedByDegreeTimesEps) {
  Rng rng(24);
  ZeroCycle z(2);
  for (int i = 0; i < 4; ++i) z.add(random_point(2, rng));
  for (double eps = 0.02; eps <= 0.2001; eps += 0.02) {
    const Estimate e = tube_measure(z, 2, eps, 20000, 11);
    EXPECT_LE(e.value / eps, 2.0 * z.degree());
  }
}

TEST(TubeMeasure, UnionBound) {
  Rng rng(25);
  ZeroCycle one(2), two(2);
  ProjPoint p = random_point(2, rng), q = random_point(2, rng);
  one.add(p);
  two.add(p);
  two.add(q);
  const Estimate a = tube_measure(one, 2, 0.2, 50000, 12), b = tube_measure(two, 2, 0.2, 50000, 12);
  EXPECT_LE(b.value, 2 * a.value + 3 * std::hypot(b.stderr_, 2 * a.stderr_));
}
