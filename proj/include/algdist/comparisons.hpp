#pragma once
// Side-by-side evaluations of derivated distances against the quantities
// they are bounded by: coefficient sups of the local polynomial, tail sums
// over a slice, and the slice decomposition through a line.

#include "algdist/distance.hpp"
#include "algdist/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace algdist {

// ---------------------------------------------------------------------------
// Coefficient sup of the dehomogenized polynomial.

// sup over |J| <= S of log |d^J F(0)| = log |J! coeff_J| where F(w) = f(U(1,w))
// in the chart centred at theta.
inline double coefficient_sup_log(const ComplexPoly& F, int S) {
  require(S >= 0, ErrorKind::precondition, "S must be nonnegative");
  const JetLayout& L = F.layout();
  double best = neg_inf;
  for (std::size_t k = 0; k < L.size() && L.degree(k) <= S; ++k) {
    const double a = std::abs(F[k]);
    if (a > 0) best = std::max(best, L.log_factorial(k) + std::log(a));
  }
  return best;
}

inline double coefficient_sup_log(const DivisorForm& f, const ProjPoint& theta, int S) {
  return coefficient_sup_log(dehomogenize(f, AffineChart(theta)), S);
}

struct HypebComparison {
  double lhs = 0;      // D^S in divisor normalization
  double rhs_sup = 0;  // coefficient sup
  double normalizer = 0;
  double c_min = 0;    // smallest c with lhs <= rhs_sup + c * normalizer
};

inline HypebComparison hypeb_compare(const DivisorForm& f, const ProjPoint& theta, int S, double log_integral,
                                     std::uint64_t budget = kDefaultJetBudget) {
  HypebComparison out;
  out.lhs = derivated_distance(theta, f, S, log_integral, budget).value;
  out.rhs_sup = coefficient_sup_log(f, theta, S);
  out.normalizer = (S + f.degree()) * clamped_log(S, f.degree());
  out.c_min = (out.lhs - out.rhs_sup) / out.normalizer;
  return out;
}

inline HypebComparison hypeb_compare(const ProductDivisor& z, const ProjPoint& theta, int S,
                                     std::uint64_t budget = kDefaultJetBudget) {
  HypebComparison out;
  out.lhs = derivated_distance(theta, z, S, budget).value;
  out.rhs_sup = coefficient_sup_log(dehomogenize(z, AffineChart(theta)), S);
  out.normalizer = (S + z.degree()) * clamped_log(S, z.degree());
  out.c_min = (out.lhs - out.rhs_sup) / out.normalizer;
  return out;
}

// ---------------------------------------------------------------------------
// Lines through theta.

inline ProjSubspace line_through(const ProjPoint& theta, const ProjPoint& v) {
  check_same_ambient(theta.ambient(), v.ambient());
  CMatrix cols(theta.ambient() + 1, 2);
  cols << theta.coords(), v.coords();
  return ProjSubspace::span(cols);
}

// Chart centred at theta whose first coordinate direction runs along the line
// F; restricting to that coordinate gives the chart of P(F).
inline AffineChart line_chart(const ProjPoint& theta, const ProjSubspace& line) {
  require(line.dim() == 2, ErrorKind::precondition, "not a line");
  require(contains(line, theta), ErrorKind::precondition, "line does not contain theta");
  const int n = theta.ambient() + 1;
  CMatrix along = line.frame() - theta.coords() * (theta.coords().adjoint() * line.frame());
  const Eigen::Index col = along.col(0).norm() >= along.col(1).norm() ? 0 : 1;
  const CVector dir = along.col(col).normalized();
  CMatrix basis(n, 2);
  basis << theta.coords(), dir;
  CMatrix u(n, n);
  u << basis, ProjSubspace::from_orthonormal(basis).complement();
  return AffineChart(theta, u);
}

// D^S of a cycle on the line P(F), computed in the P(F) chart.
template <class Cycle>
DerivatedDistance slice_derivated_distance(const ProjPoint& theta, const ProjSubspace& line, const Cycle& z, int S) {
  return to_derivated(exp_distance_jet(line_chart(theta, line), z, S, 1, 1), S);
}

// ---------------------------------------------------------------------------
// Tail-sum comparison for a zero-cycle or a sliced product divisor.

struct Main2Check {
  int degree = 0;
  int S = 0;
  double lhs = 0;        // D^S
  double rhs = 0;        // sum_{i > S} log |z_i, theta| (+ matched offset for divisors)
  double lhs_triple = 0; // D^{3S}
  double gap1 = 0;       // (lhs - rhs) / (max(S,1) log(deg + 2))
  double gap2 = 0;       // (2 rhs - D^{3S}) / ((deg + S) log((S+2) deg))
  // Divisors only: slice decomposition through the line.
  double line_distance = 0;      // D(P(F), Z), divisor-matched
  double decomposition_gap = 0;  // (lhs - rhs - line_distance) / ((S + deg) clamped_log)
};

namespace detail {

inline void check_main2_order(int S, int degree) {
  require(S >= 0 && 3 * S < degree, ErrorKind::precondition, "S must satisfy 3S < deg Z");
}

inline void check_distinct(const std::vector<double>& d) {
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] - d[i - 1] < tol::genericity) throw Error(ErrorKind::non_generic, "non-generic configuration");
}

inline void finish_main2(Main2Check& m) {
  m.gap1 = (m.lhs - m.rhs) / (std::max(m.S, 1) * std::log(m.degree + 2.0));
  m.gap2 = (2 * m.rhs - m.lhs_triple) / ((m.degree + m.S) * std::log((m.S + 2.0) * m.degree));
}

}  // namespace detail

inline Main2Check main2_check(const ZeroCycle& z, const ProjPoint& theta, int S,
                              std::uint64_t budget = kDefaultJetBudget) {
  detail::check_main2_order(S, z.degree());
  Main2Check m;
  m.degree = z.degree();
  m.S = S;
  const auto d = sorted_distances(theta, z);
  m.rhs = tail_log_sum(d, S);
  m.lhs = derivated_distance(theta, z, S, budget).value;
  m.lhs_triple = derivated_distance(theta, z, 3 * S, budget).value;
  detail::finish_main2(m);
  return m;
}

// Product divisor sliced by the line through theta and v. The left side is
// in divisor normalization; the slice sum is shifted by deg * H_1 / 2, the
// divisor normalization of the slice on P^1, so both sides are matched.
inline Main2Check main2_check(const ProductDivisor& z, const ProjPoint& theta, const ProjPoint& v, int S,
                              std::uint64_t budget = kDefaultJetBudget) {
  detail::check_main2_order(S, z.degree());
  const ProjSubspace line = line_through(theta, v);
  const ZeroCycle slice = restrict_divisor_to_line(z, line);
  require(slice.degree() == z.degree(), ErrorKind::improper_intersection, "line meets the divisor improperly");
  Main2Check m;
  m.degree = z.degree();
  m.S = S;
  const auto d = sorted_distances(theta, slice);
  detail::check_distinct(d);
  const double offset = matched_offset(z.degree(), 1);
  m.rhs = tail_log_sum(d, S) + offset;
  m.lhs = derivated_distance(theta, z, S, budget).value;
  m.lhs_triple = derivated_distance(theta, z, 3 * S, budget).value;
  detail::finish_main2(m);
  m.line_distance = subspace_cycle_distance(line, z) + divisor_normalization_offset(z) - offset;
  m.decomposition_gap = (m.lhs - m.rhs - m.line_distance) / ((S + m.degree) * clamped_log(S, m.degree));
  return m;
}

// ---------------------------------------------------------------------------
// Slice decomposition: full D^S against the D^S of the slice on P(F) plus
// D(P(F), Z), all in point normalization.

struct ZerlCheck {
  int degree = 0;
  int S = 0;
  double full = 0;
  double slice = 0;
  double line_distance = 0;
  double normalizer = 0;
  double gap_equality = 0;  // (full - slice - line_distance) / normalizer
  double gap_upper = 0;     // (slice - full - line_distance) / normalizer
};

inline ZerlCheck zerl_check(const ProductDivisor& z, const ProjPoint& theta, const ProjSubspace& line, int S,
                            std::uint64_t budget = kDefaultJetBudget) {
  require(S >= 0 && 3 * S <= z.degree(), ErrorKind::precondition, "S must be at most deg Z / 3");
  const ZeroCycle slice = restrict_divisor_to_line(z, line);
  require(slice.degree() == z.degree(), ErrorKind::improper_intersection, "line meets the divisor improperly");
  ZerlCheck c;
  c.degree = z.degree();
  c.S = S;
  c.full = derivated_distance(theta, hyperplane_cycle(z), S, budget).value;
  c.slice = slice_derivated_distance(theta, line, slice, S).value;
  c.line_distance = subspace_cycle_distance(line, z);
  c.normalizer = (S + c.degree) * clamped_log(S, c.degree);
  c.gap_equality = (c.full - c.slice - c.line_distance) / c.normalizer;
  c.gap_upper = (c.slice - c.full - c.line_distance) / c.normalizer;
  return c;
}

// ---------------------------------------------------------------------------
// Derivatives of D(P(F), Z) over the family of hyperplanes F. A hyperplane is
// identified with its unit normal, and |pr_F n_i| is the distance between
// normals, so the family is the zero-cycle of normals in the dual space.

struct RaumablCheck {
  int degree = 0;
  int S = 0;
  double distance = 0;    // D(P(F), Z)
  double derivated = 0;   // D^S(P(F), Z)
  double reciprocal = 0;  // D_*^S(P(F), Z)
  double normalizer = 0;  // (deg + S) log((S+2)(deg+2))
};

inline RaumablCheck raumabl_check(const ProductDivisor& z, const ProjSubspace& hyperplane, int S,
                                  std::uint64_t budget = kDefaultJetBudget) {
  require(S >= 0 && S <= z.degree(), ErrorKind::precondition, "S must be at most deg Z");
  const ProjPoint normal = hyperplane_normal(hyperplane);
  const ZeroCycle normals = dual_normals(z);
  RaumablCheck r;
  r.degree = z.degree();
  r.S = S;
  r.distance = subspace_cycle_distance(hyperplane, z);
  r.derivated = derivated_distance(normal, normals, S, budget).value;
  r.reciprocal = derivative_sup_reciprocal(AffineChart(normal), normals, S, budget);
  r.normalizer = (z.degree() + S) * clamped_log(S, z.degree());
  return r;
}

}  // namespace algdist
