#pragma once
// Algebraic distance D(theta, Z) and the derivated distance D^S(theta, Z).
//
// Zero-cycles and linear cycles use D = sum m_i log |theta, Z_i| (additive
// constant fixed to 0). Divisors use log |f(theta)| - int log |f|. The jets of
// exp(+-D) are built in the affine chart centred at theta with 2t real
// variables (x_1, y_1, ..., x_t, y_t), w_j = x_j + i y_j.

#include "algdist/cycles.hpp"
#include "algdist/jet.hpp"
#include "algdist/projective.hpp"
#include "algdist/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace algdist {

enum class Normalization { point_product, divisor_integral };

inline const char* to_string(Normalization n) {
  return n == Normalization::point_product ? "point_product" : "divisor_integral";
}

struct DistanceValue {
  double value = 0;
  Normalization normalization = Normalization::point_product;
  double mc_stderr = 0;
};

struct DerivatedDistance {
  int S = 0;
  double value = neg_inf;
  std::vector<double> per_order;  // sup over |I| = s of log |d^I exp(D)|
};

struct Estimate {
  double value = 0;
  double stderr_ = 0;
};

// exp(log_scale) * jet.
struct ScaledJet {
  Jet jet;
  double log_scale = 0;
};

inline constexpr std::uint64_t kDefaultJetBudget = 60000;

// ---------------------------------------------------------------------------
// Monte Carlo integral of log |f| against the Fubini-Study probability measure.

inline constexpr int kMonteCarloChunks = 64;

template <class Form>
Estimate log_norm_integral(const Form& f, int n_samples, std::uint64_t seed, int workers = 1) {
  require(n_samples >= 100, ErrorKind::precondition, "need at least 100 samples");
  const int t = f.ambient();
  struct Chunk {
    double sum = 0, sum2 = 0;
  };
  std::vector<Chunk> chunks(kMonteCarloChunks);
  auto run_chunk = [&](int c) {
    const int lo = static_cast<int>(static_cast<long long>(n_samples) * c / kMonteCarloChunks);
    const int hi = static_cast<int>(static_cast<long long>(n_samples) * (c + 1) / kMonteCarloChunks);
    Rng rng(seed, static_cast<std::uint64_t>(c));
    Chunk acc;
    for (int s = lo; s < hi; ++s) {
      double v = 0;
      for (int attempt = 0;; ++attempt) {
        v = evaluate_section_norm(f, random_point(t, rng));
        if (v >= 1e-300) break;
        if (attempt >= 10) throw Error(ErrorKind::precondition, "Monte Carlo sample stuck on the divisor");
      }
      const double l = std::log(v);
      acc.sum += l;
      acc.sum2 += l * l;
    }
    chunks[static_cast<std::size_t>(c)] = acc;
  };
  workers = std::clamp(workers, 1, kMonteCarloChunks);
  if (workers == 1) {
    for (int c = 0; c < kMonteCarloChunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int c = w; c < kMonteCarloChunks; c += workers) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  double sum = 0, sum2 = 0;
  for (const auto& c : chunks) {
    sum += c.sum;
    sum2 += c.sum2;
  }
  const double mean = sum / n_samples;
  const double var = std::max(0.0, sum2 / n_samples - mean * mean) * n_samples / (n_samples - 1.0);
  return {mean, std::sqrt(var / n_samples)};
}

// Exact integral for a product of linear forms: int log |a(z)| = log |a| - H_t / 2.
inline double log_norm_integral_exact(const ProductDivisor& z) {
  double v = 0;
  for (const auto& f : z.factors()) v += f.mult * (std::log(f.covector.norm()) - 0.5 * harmonic(z.ambient()));
  return v;
}

// ---------------------------------------------------------------------------
// Algebraic distance.

inline double checked_log_distance(double d) {
  if (!(d > 1e-12)) throw Error(ErrorKind::point_on_cycle, "point on cycle");
  return std::log(d);
}

inline DistanceValue algebraic_distance(const ProjPoint& theta, const ZeroCycle& z) {
  check_same_ambient(theta.ambient(), z.ambient());
  double v = 0;
  for (const auto& p : z.points()) v += p.mult * checked_log_distance(fs_distance(theta, p.point));
  return {v, Normalization::point_product, 0.0};
}

inline DistanceValue algebraic_distance(const ProjPoint& theta, const LinearCycle& z) {
  check_same_ambient(theta.ambient(), z.ambient());
  double v = 0;
  for (const auto& s : z.spaces()) v += s.mult * checked_log_distance(point_subspace_distance(theta, s.space));
  return {v, Normalization::point_product, 0.0};
}

inline DistanceValue algebraic_distance(const ProjPoint& theta, const DivisorForm& f, int n_samples,
                                        std::uint64_t seed, int workers = 1) {
  check_same_ambient(theta.ambient(), f.ambient());
  const double val = evaluate_section_norm(f, theta);
  if (!(val > 1e-12 * f.coeff_norm())) throw Error(ErrorKind::point_on_cycle, "point on cycle");
  const double at = std::log(val);
  const Estimate integral = log_norm_integral(f, n_samples, seed, workers);
  return {at - integral.value, Normalization::divisor_integral, integral.stderr_};
}

// Product divisors: the integral is known in closed form.
inline DistanceValue algebraic_distance(const ProjPoint& theta, const ProductDivisor& z) {
  check_same_ambient(theta.ambient(), z.ambient());
  double at = 0;
  for (const auto& f : z.factors())
    at += f.mult * checked_log_distance(std::abs(apply_form(f.covector, theta.coords())));
  return {at - log_norm_integral_exact(z), Normalization::divisor_integral, 0.0};
}

// The hyperplanes of a product divisor as a linear cycle. Its point-product
// distance differs from the divisor distance by the constant returned by
// divisor_normalization_offset.
inline LinearCycle hyperplane_cycle(const ProductDivisor& z) {
  LinearCycle out(z.ambient(), 1);
  for (const auto& f : z.factors()) out.add(ProductDivisor::hyperplane(f.covector), f.mult);
  return out;
}

// D_divisor - D_point for a product divisor.
inline double divisor_normalization_offset(const ProductDivisor& z) {
  double v = 0;
  for (const auto& f : z.factors()) v += f.mult * std::log(f.covector.norm());
  return v - log_norm_integral_exact(z);
}

// The same offset for a degree-D divisor whose forms are unit-normalized:
// D * H_t / 2.
inline double matched_offset(int degree, int t) { return 0.5 * degree * harmonic(t); }

// ---------------------------------------------------------------------------
// Jet construction.

namespace detail {

// Real and imaginary parts of c + sum_j d_j w_j over the first `active`
// complex coordinates.
inline std::pair<Jet, Jet> affine_parts(Complex c, const CVector& d, int active, int S) {
  const int nv = 2 * active;
  Jet re = Jet::constant(nv, S, c.real()), im = Jet::constant(nv, S, c.imag());
  if (S >= 1)
    for (int j = 0; j < active; ++j) {
      re[1 + 2 * static_cast<std::size_t>(j)] = d[j].real();
      re[2 + 2 * static_cast<std::size_t>(j)] = -d[j].imag();
      im[1 + 2 * static_cast<std::size_t>(j)] = d[j].imag();
      im[2 + 2 * static_cast<std::size_t>(j)] = d[j].real();
    }
  return {re, im};
}

// 1 + |w|^2 over the active coordinates.
inline Jet chart_denominator(int active, int S) {
  const int nv = 2 * active;
  Jet den = Jet::constant(nv, S, 1.0);
  if (S >= 2)
    for (int k = 0; k < nv; ++k) {
      std::vector<int> m(static_cast<std::size_t>(nv), 0);
      m[static_cast<std::size_t>(k)] = 2;
      den[den.layout().index_of(m)] = 1.0;
    }
  return den;
}

// |pr_{W-perp} U(1,w)|^2 / |pr_{W-perp} theta|^2, with the squared distance
// at w = 0 returned separately. `perp` is an orthonormal basis of W-perp.
inline std::pair<Jet, double> normalized_perp_norm(const AffineChart& chart, const CMatrix& perp, int active, int S) {
  const CMatrix b = chart.unitary().adjoint() * perp;
  double d2 = 0;
  for (Eigen::Index r = 0; r < b.cols(); ++r) d2 += std::norm(b(0, r));
  if (!(d2 > 1e-24)) throw Error(ErrorKind::point_on_cycle, "point on cycle");
  const int nv = 2 * active;
  Jet n(nv, S);
  for (Eigen::Index r = 0; r < b.cols(); ++r) {
    CVector d(active);
    for (int j = 0; j < active; ++j) d[j] = std::conj(b(1 + j, r));
    auto [re, im] = affine_parts(std::conj(b(0, r)), d, active, S);
    n += re * re + im * im;
  }
  n *= 1.0 / d2;
  return {n, d2};
}

inline void check_budget(int active, int S, std::uint64_t budget) {
  if (jet_size(2 * active, S) > budget) throw Error(ErrorKind::budget, "jet exceeds the configured budget");
}

// Assemble prod_i (N_i/d_i^2)^{m_i} ^ (sign/2) * Den^{-sign*deg/2}.
inline ScaledJet assemble(const std::vector<std::pair<Jet, int>>& factors, double log_dist_sum, int degree, int sign,
                          int active, int S) {
  const int nv = 2 * active;
  Jet prod = Jet::constant(nv, S, 1.0);
  for (const auto& [n, m] : factors)
    for (int k = 0; k < m; ++k) prod = n * prod;
  Jet root = pow(prod, 0.5 * sign);
  Jet den = pow(chart_denominator(active, S), -0.5 * sign * degree);
  return {root * den, sign * log_dist_sum};
}

}  // namespace detail

inline int resolve_active(int active, int t) { return active < 0 ? t : std::clamp(active, 1, t); }

// Jet of exp(sign * D(chart_point(w), Z)) for a zero-cycle.
inline ScaledJet exp_distance_jet(const AffineChart& chart, const ZeroCycle& z, int S, int sign = 1, int active = -1) {
  check_same_ambient(chart.ambient(), z.ambient());
  active = resolve_active(active, z.ambient());
  std::vector<std::pair<Jet, int>> factors;
  double log_sum = 0;
  for (const auto& p : z.points()) {
    auto [n, d2] = detail::normalized_perp_norm(chart, ProjSubspace::span(p.point).complement(), active, S);
    factors.emplace_back(std::move(n), p.mult);
    log_sum += p.mult * 0.5 * std::log(d2);
  }
  return detail::assemble(factors, log_sum, z.degree(), sign, active, S);
}

inline ScaledJet exp_distance_jet(const AffineChart& chart, const LinearCycle& z, int S, int sign = 1, int active = -1) {
  check_same_ambient(chart.ambient(), z.ambient());
  active = resolve_active(active, z.ambient());
  std::vector<std::pair<Jet, int>> factors;
  double log_sum = 0;
  for (const auto& s : z.spaces()) {
    auto [n, d2] = detail::normalized_perp_norm(chart, s.space.complement(), active, S);
    factors.emplace_back(std::move(n), s.mult);
    log_sum += s.mult * 0.5 * std::log(d2);
  }
  return detail::assemble(factors, log_sum, z.degree(), sign, active, S);
}

// Real and imaginary jets of F(w) = f(U(1,w)), truncated at order S.
inline std::pair<Jet, Jet> dehomogenized_parts(const ComplexPoly& F, int active, int S) {
  const int t = F.nvars();
  const int nv = 2 * active;
  Jet re(nv, S), im(nv, S);
  const JetLayout& L = F.layout();
  const JetLayout& R = re.layout();
  std::vector<int> a(static_cast<std::size_t>(t), 0), real_exps(static_cast<std::size_t>(nv), 0);
  for (std::size_t k = 0; k < L.size() && L.degree(k) <= S; ++k) {
    const Complex c = F[k];
    if (c == Complex(0)) continue;
    auto J = L.exponents(k);
    bool inactive = false;
    for (int j = active; j < t; ++j) inactive |= J[static_cast<std::size_t>(j)] != 0;
    if (inactive) continue;
    // Expand prod_j (x_j + i y_j)^{J_j} = sum_{a_j} C(J_j, a_j) x_j^{a_j} (i y_j)^{J_j - a_j}.
    std::fill(a.begin(), a.end(), 0);
    while (true) {
      double weight = 1;
      int ipow = 0;
      for (int j = 0; j < active; ++j) {
        const int Jj = J[static_cast<std::size_t>(j)], aj = a[static_cast<std::size_t>(j)];
        weight *= static_cast<double>(binomial(Jj, aj));
        ipow += Jj - aj;
        real_exps[2 * static_cast<std::size_t>(j)] = aj;
        real_exps[2 * static_cast<std::size_t>(j) + 1] = Jj - aj;
      }
      static const Complex ipows[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const Complex term = c * ipows[ipow % 4] * weight;
      const std::size_t idx = R.index_of(real_exps);
      re[idx] += term.real();
      im[idx] += term.imag();
      int j = 0;
      while (j < active && a[static_cast<std::size_t>(j)] == J[static_cast<std::size_t>(j)]) a[static_cast<std::size_t>(j++)] = 0;
      if (j == active) break;
      ++a[static_cast<std::size_t>(j)];
    }
  }
  return {re, im};
}

// Jet of exp(sign * D(chart_point(w), div f)) given the value of int log|f|.
inline ScaledJet exp_distance_jet(const AffineChart& chart, const DivisorForm& f, int S, double log_integral,
                                  int sign = 1, int active = -1) {
  check_same_ambient(chart.ambient(), f.ambient());
  active = resolve_active(active, f.ambient());
  ComplexPoly F = dehomogenize(f, chart);
  const double f0 = std::abs(F[0]);
  if (!(f0 > 1e-12 * std::max(1.0, f.coeff_norm()))) throw Error(ErrorKind::point_on_cycle, "point on cycle");
  auto [re, im] = dehomogenized_parts(F, active, S);
  re *= 1.0 / f0;
  im *= 1.0 / f0;
  Jet abs2 = re * re + im * im;
  Jet root = pow(abs2, 0.5 * sign);
  Jet den = pow(detail::chart_denominator(active, S), -0.5 * sign * f.degree());
  return {root * den, sign * (std::log(f0) - log_integral)};
}

// ---------------------------------------------------------------------------
// Derivated distance.

inline DerivatedDistance to_derivated(const ScaledJet& j, int S) {
  DerivatedDistance out;
  out.S = S;
  out.per_order = per_order_sup_log(j.jet, S, j.log_scale);
  out.value = *std::max_element(out.per_order.begin(), out.per_order.end());
  return out;
}

inline DerivatedDistance derivated_distance(const ProjPoint& theta, const ZeroCycle& z, int S,
                                            std::uint64_t budget = kDefaultJetBudget) {
  require(S >= 0, ErrorKind::precondition, "S must be nonnegative");
  detail::check_budget(theta.ambient(), S, budget);
  return to_derivated(exp_distance_jet(AffineChart(theta), z, S), S);
}

inline DerivatedDistance derivated_distance(const ProjPoint& theta, const LinearCycle& z, int S,
                                            std::uint64_t budget = kDefaultJetBudget) {
  require(S >= 0, ErrorKind::precondition, "S must be nonnegative");
  detail::check_budget(theta.ambient(), S, budget);
  return to_derivated(exp_distance_jet(AffineChart(theta), z, S), S);
}

// Divisor with a supplied integral (Monte Carlo or exact).
inline DerivatedDistance derivated_distance(const ProjPoint& theta, const DivisorForm& f, int S, double log_integral,
                                            std::uint64_t budget = kDefaultJetBudget) {
  require(S >= 0, ErrorKind::precondition, "S must be nonnegative");
  detail::check_budget(theta.ambient(), S, budget);
  return to_derivated(exp_distance_jet(AffineChart(theta), f, S, log_integral), S);
}

inline DerivatedDistance derivated_distance(const ProjPoint& theta, const DivisorForm& f, int S, int n_samples,
                                            std::uint64_t seed, std::uint64_t budget = kDefaultJetBudget) {
  return derivated_distance(theta, f, S, log_norm_integral(f, n_samples, seed).value, budget);
}

// Product divisor in divisor normalization. The jet is built factor by factor
// from the hyperplanes; expanding the form first loses the value at theta to
// cancellation once the degree is in the dozens.
inline DerivatedDistance derivated_distance(const ProjPoint& theta, const ProductDivisor& z, int S,
                                            std::uint64_t budget = kDefaultJetBudget) {
  require(S >= 0, ErrorKind::precondition, "S must be nonnegative");
  detail::check_budget(theta.ambient(), S, budget);
  ScaledJet j = exp_distance_jet(AffineChart(theta), hyperplane_cycle(z), S);
  j.log_scale += divisor_normalization_offset(z);
  return to_derivated(j, S);
}

// sup log |d^I exp(-D)| over |I| <= S in the chart family `chart`.
inline double derivative_sup_reciprocal(const AffineChart& chart, const ZeroCycle& z, int S,
                                        std::uint64_t budget = kDefaultJetBudget) {
  detail::check_budget(chart.ambient(), S, budget);
  const ScaledJet j = exp_distance_jet(chart, z, S, -1);
  return sup_log_partial(j.jet, S, j.log_scale);
}

inline double derivative_sup_reciprocal(const AffineChart& chart, const LinearCycle& z, int S,
                                        std::uint64_t budget = kDefaultJetBudget) {
  detail::check_budget(chart.ambient(), S, budget);
  const ScaledJet j = exp_distance_jet(chart, z, S, -1);
  return sup_log_partial(j.jet, S, j.log_scale);
}

inline double derivative_sup_reciprocal(const AffineChart& chart, const DivisorForm& f, int S, double log_integral,
                                        std::uint64_t budget = kDefaultJetBudget) {
  detail::check_budget(chart.ambient(), S, budget);
  const ScaledJet j = exp_distance_jet(chart, f, S, log_integral, -1);
  return sup_log_partial(j.jet, S, j.log_scale);
}

// ---------------------------------------------------------------------------
// Distances between linear subspaces and cycles.

// log of the product of the sines of the principal angles between A and B
// that are not forced to vanish by the dimension count.
inline double subspace_distance(const ProjSubspace& a, const ProjSubspace& b) {
  check_same_ambient(a.ambient(), b.ambient());
  const int n = a.ambient() + 1;
  const int forced = std::max(0, a.dim() + b.dim() - n);
  Eigen::JacobiSVD<CMatrix> svd(a.frame().adjoint() * b.frame());
  const auto& cosines = svd.singularValues();
  double v = 0;
  for (Eigen::Index k = forced; k < cosines.size(); ++k) {
    const double c = std::min(1.0, cosines(k));
    v += checked_log_distance(std::sqrt(std::max(0.0, 1 - c * c)));
  }
  return v;
}

// Sine of the angle between subspace F and hyperplane {a = 0}: |pr_F n|.
inline double subspace_hyperplane_sine(const ProjSubspace& f, const CVector& covector) {
  const CVector normal = covector.conjugate().normalized();
  return (f.frame().adjoint() * normal).norm();
}

// D(P(F), Z) for a product divisor, linear normalization.
inline double subspace_cycle_distance(const ProjSubspace& f, const ProductDivisor& z) {
  check_same_ambient(f.ambient(), z.ambient());
  double v = 0;
  for (const auto& fac : z.factors()) v += fac.mult * checked_log_distance(subspace_hyperplane_sine(f, fac.covector));
  return v;
}

inline ProjSubspace join_subspaces(const ProjSubspace& a, const ProjSubspace& b) {
  check_same_ambient(a.ambient(), b.ambient());
  const int n = a.ambient() + 1;
  CMatrix frame = CMatrix::Zero(2 * n, a.dim() + b.dim());
  frame.topLeftCorner(n, a.dim()) = a.frame();
  frame.bottomRightCorner(n, b.dim()) = b.frame();
  return ProjSubspace::from_orthonormal(frame);
}

// D(Z0, Z1) through the join/diagonal reduction
// D(P(Delta), Z0 # Z1) = D(Z0, Z1) - log 2 deg Z0 deg Z1.
inline double cycle_cycle_distance(const ProductDivisor& z0, const ProductDivisor& z1) {
  check_same_ambient(z0.ambient(), z1.ambient());
  const ProjSubspace delta = diagonal_subspace(z0.ambient());
  double v = 0;
  for (const auto& a : z0.factors())
    for (const auto& b : z1.factors()) {
      const ProjSubspace j = join_subspaces(ProductDivisor::hyperplane(a.covector), ProductDivisor::hyperplane(b.covector));
      v += a.mult * b.mult * subspace_distance(delta, j);
    }
  return v + std::log(2.0) * z0.degree() * z1.degree();
}

// The dual description used for hyperplane families: a hyperplane with unit
// normal n is the point [n] of P^t, and the sine between two hyperplanes is
// the Fubini-Study distance of their normals.
inline ZeroCycle dual_normals(const ProductDivisor& z) {
  ZeroCycle out(z.ambient());
  for (const auto& f : z.factors()) out.add(ProjPoint(CVector(f.covector.conjugate())), f.mult);
  return out;
}

inline ProjPoint hyperplane_normal(const ProjSubspace& hyperplane) {
  require(hyperplane.codim() == 1, ErrorKind::precondition, "not a hyperplane");
  return ProjPoint(CVector(hyperplane.complement().col(0)));
}

// Distances |theta, z_i| sorted ascending, with multiplicities expanded.
inline std::vector<double> sorted_distances(const ProjPoint& theta, const ZeroCycle& z) {
  std::vector<double> d;
  for (const auto& p : z.points())
    for (int m = 0; m < p.mult; ++m) d.push_back(fs_distance(theta, p.point));
  std::sort(d.begin(), d.end());
  return d;
}

inline std::vector<double> sorted_distances(const ProjPoint& theta, const LinearCycle& z) {
  std::vector<double> d;
  for (const auto& s : z.spaces())
    for (int m = 0; m < s.mult; ++m) d.push_back(point_subspace_distance(theta, s.space));
  std::sort(d.begin(), d.end());
  return d;
}

// sum_{i > s} log d_i for ascending d.
inline double tail_log_sum(const std::vector<double>& d, int s) {
  double v = 0;
  for (std::size_t i = static_cast<std::size_t>(std::max(0, s)); i < d.size(); ++i) v += std::log(d[i]);
  return v;
}

}  // namespace algdist
