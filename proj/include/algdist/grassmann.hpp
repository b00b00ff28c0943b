#pragma once
// Grassmannian of linear subspaces of C^{t+1}: principal-angle metric, the
// big-cell chart, incidence distances to cycles and Haar sampling.

#include "algdist/cycles.hpp"
#include "algdist/distance.hpp"
#include "algdist/projective.hpp"
#include "algdist/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace algdist {

// A point of G_{k,t+1} is the same data as a projective subspace: an
// orthonormal (t+1) x k frame.
using GrassPoint = ProjSubspace;

inline void check_same_grassmannian(const GrassPoint& a, const GrassPoint& b) {
  check_same_ambient(a.ambient(), b.ambient());
  if (a.dim() != b.dim()) throw Error(ErrorKind::dimension_mismatch, "subspace dimensions differ");
}

// sup over unit w in B of |pr_{A-perp} w|.
inline double grass_distance(const GrassPoint& a, const GrassPoint& b) {
  check_same_grassmannian(a, b);
  const CMatrix r = b.frame() - a.frame() * (a.frame().adjoint() * b.frame());
  Eigen::JacobiSVD<CMatrix> svd(r);
  return std::min(1.0, svd.singularValues()(0));
}

// Sine of the smallest principal angle: 0 iff the subspaces meet.
inline double min_angle_sine(const ProjSubspace& a, const ProjSubspace& b) {
  check_same_ambient(a.ambient(), b.ambient());
  Eigen::JacobiSVD<CMatrix> svd(a.frame().adjoint() * b.frame());
  const double c = std::min(1.0, svd.singularValues()(0));
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

// Haar-random k-dimensional subspace of C^{t+1}: QR of a complex Gaussian
// matrix with the phases of diag(R) moved into Q.
inline GrassPoint random_subspace(int t, int k, Rng& rng) {
  require(k >= 1 && k <= t + 1, ErrorKind::precondition, "bad subspace dimension");
  const CMatrix g = rng.gaussian_matrix(t + 1, k);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(t + 1, k);
  const CMatrix r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return GrassPoint::from_orthonormal(q);
}

// ---------------------------------------------------------------------------
// Big cell centred at W0: A in C^{(t+1-k) x k} maps to span(W0 + V A), where
// V is an orthonormal basis of W0-perp. Parameters are A in column-major order.

class BruhatChart {
 public:
  explicit BruhatChart(const GrassPoint& base) : base_(base), perp_(base.complement()) {}

  const GrassPoint& base() const { return base_; }
  int rows() const { return static_cast<int>(perp_.cols()); }
  int cols() const { return base_.dim(); }
  int parameter_count() const { return rows() * cols(); }

  CMatrix block(const CVector& u) const {
    require(u.size() == parameter_count(), ErrorKind::dimension_mismatch, "dimension mismatch");
    return Eigen::Map<const CMatrix>(u.data(), rows(), cols());
  }

  GrassPoint point(const CVector& u) const {
    if (rows() == 0) return base_;
    return GrassPoint::span(base_.frame() + perp_ * block(u));
  }

  CVector coords(const GrassPoint& w) const {
    check_same_grassmannian(base_, w);
    const CMatrix overlap = base_.frame().adjoint() * w.frame();
    Eigen::JacobiSVD<CMatrix> svd(overlap);
    if (svd.singularValues()(cols() - 1) < 1e-10)
      throw Error(ErrorKind::chart_infinity, "subspace outside the big cell");
    if (rows() == 0) return CVector(0);
    const CMatrix a = (perp_.adjoint() * w.frame()) * overlap.inverse();
    return Eigen::Map<const CVector>(a.data(), a.size());
  }

 private:
  GrassPoint base_;
  CMatrix perp_;
};

// ---------------------------------------------------------------------------
// Given W in F and F' with dim F' = dim F, the subspace pr_F^{-1}(W) cap F'.
// It has dim W and distance to W at most |F, F'|.
inline GrassPoint contained_subspace(const GrassPoint& w, const GrassPoint& f, const GrassPoint& f2) {
  check_same_grassmannian(f, f2);
  check_same_ambient(w.ambient(), f.ambient());
  require(w.dim() <= f.dim(), ErrorKind::precondition, "W is larger than F");
  const CMatrix outside = w.frame() - f.frame() * (f.frame().adjoint() * w.frame());
  if (outside.cwiseAbs().maxCoeff() > tol::structural) throw Error(ErrorKind::precondition, "W is not contained in F");
  // x in F' lies in pr_F^{-1}(W) iff its projection to F is orthogonal to F minus W.
  const CMatrix f_minus_w = f.frame() - w.frame() * (w.frame().adjoint() * f.frame());
  Eigen::JacobiSVD<CMatrix> svd_fw(f_minus_w, Eigen::ComputeThinU);
  const int extra = f.dim() - w.dim();
  const CMatrix rest = svd_fw.matrixU().leftCols(extra);
  const CMatrix g = f2.frame();
  if (extra == 0) return f2;
  Eigen::JacobiSVD<CMatrix> svd(rest.adjoint() * g, Eigen::ComputeFullV);
  // Singular values come in decreasing order; the null space is at the end.
  const CMatrix null = svd.matrixV().rightCols(w.dim());
  return GrassPoint::span(g * null);
}

// W-tilde plus V, where V is the orthogonal complement of W in F.
inline GrassPoint direct_sum_image(const GrassPoint& w_tilde, const GrassPoint& w, const GrassPoint& f) {
  check_same_grassmannian(w_tilde, w);
  const CMatrix v_part = f.frame() - w.frame() * (w.frame().adjoint() * f.frame());
  Eigen::JacobiSVD<CMatrix> svd(v_part, Eigen::ComputeThinU);
  const int extra = f.dim() - w.dim();
  CMatrix cols(f.ambient() + 1, f.dim());
  cols << w_tilde.frame(), svd.matrixU().leftCols(extra);
  return GrassPoint::span(cols);
}

// ---------------------------------------------------------------------------
// Incidence distance |V, V_Z|.

// For a zero-cycle: the nearest cycle point's sine distance to P(V). Any V'
// through z has |V, V'| >= |pr_{V-perp} z|, and rotating V onto z attains it.
inline double incidence_distance(const GrassPoint& v, const ZeroCycle& z) {
  check_same_ambient(v.ambient(), z.ambient());
  double best = 1;
  for (const auto& p : z.points()) best = std::min(best, point_subspace_distance(p.point, v));
  return best;
}

inline double incidence_distance(const GrassPoint& v, const LinearCycle& z) {
  check_same_ambient(v.ambient(), z.ambient());
  double best = 1;
  for (const auto& s : z.spaces()) best = std::min(best, min_angle_sine(v, s.space));
  return best;
}

inline double incidence_distance(const GrassPoint& v, const ProductDivisor& z) {
  return incidence_distance(v, hyperplane_cycle(z));
}

// Independent check for the zero-cycle formula: minimizes |V, V'| over V'
// containing z by random-perturbation descent on the complementary directions.
inline double incidence_local_search(const GrassPoint& v, const ProjPoint& z, Rng& rng, int iterations = 4000) {
  check_same_ambient(v.ambient(), z.ambient());
  const int n = v.ambient() + 1, k = v.dim();
  auto build = [&](const CMatrix& rest) {
    CMatrix cols(n, k);
    cols.col(0) = z.coords();
    if (k > 1) cols.rightCols(k - 1) = rest;
    return GrassPoint::span(cols);
  };
  // Start from the projection of V orthogonal to z.
  CMatrix rest = v.frame().leftCols(std::max(0, k - 1));
  if (k > 1) {
    rest -= z.coords() * (z.coords().adjoint() * rest);
    rest += 1e-3 * rng.gaussian_matrix(n, k - 1);
  }
  double best = grass_distance(v, build(rest));
  if (k == 1) return best;
  double step = 0.3;
  for (int it = 0; it < iterations && step > 1e-9; ++it) {
    const CMatrix trial = rest + step * rng.gaussian_matrix(n, k - 1);
    double d;
    try {
      d = grass_distance(v, build(trial));
    } catch (const Error&) {
      continue;
    }
    if (d < best) {
      best = d;
      rest = trial;
    } else if (it % 20 == 19) {
      step *= 0.7;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Far subspaces.

struct FarSubspace {
  GrassPoint space;
  int draws = 0;
  double distance = 0;
  double threshold = 0;
};

inline constexpr double kFarConstant = 4.0;

namespace detail {

inline int cycle_codim(const ZeroCycle& z) { return z.ambient(); }
inline int cycle_codim(const LinearCycle& z) { return z.codim(); }
inline int cycle_codim(const ProductDivisor&) { return 1; }

}  // namespace detail

// Draws Haar subspaces of codimension l until the incidence distance reaches
// 1 / (C deg Z).
template <class Cycle>
FarSubspace find_far_subspace(const Cycle& z, int l, std::uint64_t seed, int budget, double c = kFarConstant) {
  const int t = z.ambient();
  require(budget >= 1, ErrorKind::precondition, "budget must be positive");
  require(l >= 1 && l <= t, ErrorKind::precondition, "bad codimension");
  require(l >= t + 1 - detail::cycle_codim(z), ErrorKind::precondition, "codimension too small for the cycle");
  require(z.degree() >= 1, ErrorKind::precondition, "empty cycle");
  const double threshold = 1.0 / (c * z.degree());
  Rng rng(seed);
  for (int draw = 1; draw <= budget; ++draw) {
    GrassPoint v = random_subspace(t, t + 1 - l, rng);
    const double d = incidence_distance(v, z);
    if (d >= threshold) return {v, draw, d, threshold};
  }
  throw Error(ErrorKind::no_far_subspace, "no far subspace found");
}

// Fraction of Haar-random subspaces of dimension k within eps of V_Z.
// Chunked like log_norm_integral so the estimate is independent of workers.
template <class Cycle>
Estimate tube_measure(const Cycle& z, int k, double eps, int n_samples, std::uint64_t seed, int workers = 1) {
  require(eps > 0 && eps <= 1, ErrorKind::precondition, "eps must lie in (0, 1]");
  require(n_samples >= 1000, ErrorKind::precondition, "need at least 1000 samples");
  const int t = z.ambient();
  std::vector<long long> hits(kMonteCarloChunks, 0);
  auto run_chunk = [&](int c) {
    const int lo = static_cast<int>(static_cast<long long>(n_samples) * c / kMonteCarloChunks);
    const int hi = static_cast<int>(static_cast<long long>(n_samples) * (c + 1) / kMonteCarloChunks);
    Rng rng(seed, static_cast<std::uint64_t>(c));
    long long h = 0;
    for (int s = lo; s < hi; ++s)
      if (incidence_distance(random_subspace(t, k, rng), z) <= eps) ++h;
    hits[static_cast<std::size_t>(c)] = h;
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
  long long total = 0;
  for (long long h : hits) total += h;
  const double p = static_cast<double>(total) / n_samples;
  return {p, std::sqrt(p * (1 - p) / n_samples)};
}

}  // namespace algdist
