#include "algdist/cycles.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace algdist;

namespace {

ProjPoint pt(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return ProjPoint(v);
}

CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

DivisorForm monomial_form(int t, std::vector<int> exps, Complex c = 1.0) {
  int d = 0;
  for (int e : exps) d += e;
  DivisorForm f(t, d);
  f.set(exps, c);
  return f;
}

DivisorForm random_form(int t, int d, Rng& rng) {
  DivisorForm f(t, d);
  for (std::size_t k = f.first_monomial(); k < f.poly().size(); ++k) f.at(k) = rng.cnormal();
  return f;
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

}  // namespace

TEST(SectionNorm, FrozenValues) {
  auto f = monomial_form(1, {1, 0});
  EXPECT_NEAR(evaluate_section_norm(f, pt({1, 0})), 1.0, 1e-15);
  EXPECT_NEAR(evaluate_section_norm(f, pt({1, 1})), 0.70710678, 1e-8);
  EXPECT_NEAR(evaluate_section_norm(f, pt({0, 1})), 0.0, 1e-15);
}

TEST(SectionNorm, PhaseInvariant) {
  Rng rng(1);
  auto f = random_form(2, 4, rng);
  ProjPoint p = random_point(2, rng);
  ProjPoint q = ProjPoint::from_unit(CVector(p.coords() * std::polar(1.0, 0.7)));
  EXPECT_NEAR(evaluate_section_norm(f, p), evaluate_section_norm(f, q), 1e-12);
}

TEST(Dehomogenize, FrozenValues) {
  AffineChart chart(pt({1, 0}), CMatrix::Identity(2, 2));
  ComplexPoly F = dehomogenize(monomial_form(1, {0, 1}), chart);
  std::vector<int> one{1}, zero{0};
  EXPECT_NEAR(std::abs(F.coeff(one) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(F.coeff(zero)), 0.0, 1e-15);
  ComplexPoly G = dehomogenize(monomial_form(1, {1, 1}), chart);
  std::vector<int> two{2};
  EXPECT_NEAR(std::abs(G.coeff(one) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(G.coeff(two)), 0.0, 1e-15);
}

TEST(Dehomogenize, NormIdentity) {
  Rng rng(2);
  for (int t = 1; t <= 3; ++t) {
    auto f = random_form(t, 5, rng);
    AffineChart chart(random_point(t, rng));
    ComplexPoly F = dehomogenize(f, chart);
    for (int i = 0; i < 100; ++i) {
      CVector w = rng.gaussian_vector(t);
      const double lhs = evaluate_section_norm(f, chart_point(chart, w));
      const double rhs = std::abs(F.eval(w)) / std::pow(std::sqrt(1 + w.squaredNorm()), 5);
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, lhs));
    }
  }
}

TEST(ProductDivisor, ExpansionAndDehomogenizationAgree) {
  Rng rng(3);
  for (int t = 1; t <= 3; ++t) {
    ProductDivisor z = random_product_divisor(t, 4, rng);
    z.add(rng.gaussian_vector(t + 1).normalized(), 2);
    DivisorForm f = expand(z);
    EXPECT_EQ(f.degree(), 6);
    for (int i = 0; i < 20; ++i) {
      ProjPoint p = random_point(t, rng);
      EXPECT_NEAR(evaluate_section_norm(f, p), evaluate_section_norm(z, p), 1e-12);
    }
    AffineChart chart(random_point(t, rng));
    ComplexPoly a = dehomogenize(f, chart), b = dehomogenize(z, chart);
    double scale = 0, diff = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      scale = std::max(scale, std::abs(a[k]));
      diff = std::max(diff, std::abs(a[k] - b[k]));
    }
    EXPECT_LT(diff, 1e-10 * scale);
  }
}

TEST(Intersect, CoordinateLines) {
  ProductDivisor z0(2), z1(2);
  z0.add(vec({0, 1, 0}));
  z1.add(vec({0, 0, 1}));
  ZeroCycle x = intersect_product_divisors(z0, z1);
  ASSERT_EQ(x.degree(), 1);
  EXPECT_NEAR(fs_distance(x.points()[0].point, pt({1, 0, 0})), 0.0, 1e-15);
}

TEST(Intersect, BezoutCountAndMembership) {
  Rng rng(4);
  ZeroCycle x = intersect_product_divisors(random_product_divisor(2, 2, rng), random_product_divisor(2, 3, rng));
  EXPECT_EQ(x.degree(), 6);
  ProductDivisor a = random_product_divisor(2, 4, rng), b = random_product_divisor(2, 4, rng);
  a.add(rng.gaussian_vector(3).normalized(), 2);
  ZeroCycle y = intersect_product_divisors(a, b);
  EXPECT_EQ(y.degree(), 24);
  for (const auto& p : y.points()) {
    double best_a = 1, best_b = 1;
    for (const auto& f : a.factors()) best_a = std::min(best_a, std::abs(apply_form(f.covector, p.point.coords())));
    for (const auto& f : b.factors()) best_b = std::min(best_b, std::abs(apply_form(f.covector, p.point.coords())));
    EXPECT_LT(best_a, 1e-10);
    EXPECT_LT(best_b, 1e-10);
  }
}

TEST(Intersect, Errors) {
  ProductDivisor z0(2), z1(2);
  z0.add(vec({1, 2, 3}));
  z1.add(vec({2, 4, 6}));
  EXPECT_EQ(kind_of([&] { intersect_product_divisors(z0, z1); }), ErrorKind::improper_intersection);
  // Three lines through one point give coincident intersection points.
  ProductDivisor a(2), b(2);
  a.add(vec({1, 0, 0}));
  a.add(vec({0, 1, 0}));
  b.add(vec({1, 1, 0}));
  EXPECT_EQ(kind_of([&] { intersect_product_divisors(a, b); }), ErrorKind::non_generic);
}

TEST(JoinCycles, DegreeAndContainment) {
  Rng rng(5);
  ZeroCycle a(2), b(2);
  a.add(random_point(2, rng));
  b.add(random_point(2, rng));
  EXPECT_EQ(join_cycles(a, b).degree(), 1);
  a.add(random_point(2, rng));
  b.add(random_point(2, rng), 2);
  LinearCycle j = join_cycles(a, b);
  EXPECT_EQ(j.degree(), 6);
  EXPECT_EQ(j.ambient(), 5);
  ProjPoint theta = random_point(2, rng);
  ProjPoint diag = diagonal_point(theta);
  std::size_t idx = 0;
  for (const auto& p : a.points())
    for (const auto& q : b.points()) {
      const auto& line = j.spaces()[idx++].space;
      EXPECT_TRUE(contains(line, embed_first(p.point)));
      EXPECT_TRUE(contains(line, embed_second(q.point)));
      const double dp = fs_distance(p.point, theta), dq = fs_distance(q.point, theta);
      const double dj = point_subspace_distance(diag, line);
      EXPECT_LE(std::min(dp, dq), dj + 1e-10);
      EXPECT_LE(dj, std::max(dp, dq) + 1e-10);
    }
}

TEST(Restrict, CoordinateExample) {
  auto f = monomial_form(2, {1, 1, 0});
  CMatrix frame = CMatrix::Zero(3, 2);
  frame(0, 0) = 1;
  frame(1, 1) = 1;
  ZeroCycle z = restrict_divisor_to_line(f, ProjSubspace::from_orthonormal(frame));
  ASSERT_EQ(z.degree(), 2);
  ASSERT_EQ(z.points().size(), 2u);
  double d0 = std::min(fs_distance(z.points()[0].point, pt({1, 0, 0})), fs_distance(z.points()[1].point, pt({1, 0, 0})));
  double d1 = std::min(fs_distance(z.points()[0].point, pt({0, 1, 0})), fs_distance(z.points()[1].point, pt({0, 1, 0})));
  EXPECT_LT(d0, 1e-12);
  EXPECT_LT(d1, 1e-12);
}

TEST(Restrict, RandomQuinticRootsLieOnDivisorAndLine) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_form(2, 5, rng);
    f *= 1.0 / f.coeff_norm();
    auto line = ProjSubspace::span(rng.gaussian_matrix(3, 2));
    ZeroCycle z = restrict_divisor_to_line(f, line);
    EXPECT_EQ(z.degree(), 5);
    for (const auto& p : z.points()) {
      EXPECT_LT(evaluate_section_norm(f, p.point), 1e-8);
      EXPECT_LT(point_subspace_distance(p.point, line), 1e-8);
    }
  }
}

TEST(Restrict, DoubleFactorGivesMultiplicityTwo) {
  Rng rng(7);
  ProductDivisor z(2);
  z.add(rng.gaussian_vector(3).normalized(), 2);
  z.add(rng.gaussian_vector(3).normalized());
  auto line = ProjSubspace::span(rng.gaussian_matrix(3, 2));
  ZeroCycle x = restrict_divisor_to_line(expand(z), line);
  EXPECT_EQ(x.degree(), 3);
  ASSERT_EQ(x.points().size(), 2u);
  int maxmult = std::max(x.points()[0].mult, x.points()[1].mult);
  EXPECT_EQ(maxmult, 2);
  ZeroCycle exact = restrict_divisor_to_line(z, line);
  for (const auto& p : x.points()) {
    double best = 1;
    for (const auto& q : exact.points()) best = std::min(best, fs_distance(p.point, q.point));
    EXPECT_LT(best, 1e-7);
  }
}

TEST(Restrict, LineInsideDivisor) {
  auto f = monomial_form(2, {0, 0, 1});
  CMatrix frame = CMatrix::Zero(3, 2);
  frame(0, 0) = 1;
  frame(1, 1) = 1;
  EXPECT_EQ(kind_of([&] { restrict_divisor_to_line(f, ProjSubspace::from_orthonormal(frame)); }),
            ErrorKind::line_in_divisor);
}

TEST(Serialization, BitExactRoundTrip) {
  Rng rng(8);
  ZeroCycle z(2);
  z.add(random_point(2, rng), 3);
  z.add(random_point(2, rng));
  LinearCycle l(3, 2);
  l.add(ProjSubspace::span(rng.gaussian_matrix(4, 2)), 2);
  DivisorForm f = random_form(2, 3, rng);
  ProductDivisor p = random_product_divisor(2, 3, rng);
  for (const Cycle& c : {Cycle(z), Cycle(l), Cycle(f), Cycle(p)}) {
    const std::string once = cycle_to_json(c).dump();
    const Cycle back = cycle_from_json(nlohmann::json::parse(once));
    EXPECT_EQ(cycle_to_json(back).dump(), once);
  }
  const auto zb = std::get<ZeroCycle>(cycle_from_json(cycle_to_json(z)));
  EXPECT_EQ(zb.points()[0].point.coords(), z.points()[0].point.coords());
  EXPECT_EQ(zb.points()[0].mult, 3);
  EXPECT_THROW(cycle_from_json(nlohmann::json::parse(R"({"type":"curve","ambient":2})")), Error);
}
