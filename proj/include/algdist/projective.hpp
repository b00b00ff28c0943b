#pragma once
// Points, subspaces and affine charts of complex projective space with the
// Fubini-Study (sine) distance.

#include "algdist/core.hpp"
#include "algdist/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace algdist {

class ProjPoint {
 public:
  ProjPoint() = default;

  // Normalizes any nonzero representative.
  explicit ProjPoint(const CVector& v) {
    const double n = v.norm();
    require(n > 0 && std::isfinite(n), ErrorKind::precondition, "zero vector is not a projective point");
    coords_ = v / n;
  }

  // Takes a representative that is already unit length, bit for bit.
  static ProjPoint from_unit(const CVector& v) {
    require(std::abs(v.norm() - 1.0) <= tol::unit_norm * 10, ErrorKind::precondition,
            "representative is not unit length");
    ProjPoint p;
    p.coords_ = v;
    return p;
  }

  const CVector& coords() const { return coords_; }
  int ambient() const { return static_cast<int>(coords_.size()) - 1; }
  Complex operator[](int i) const { return coords_[i]; }

 private:
  CVector coords_;
};

inline void check_same_ambient(int a, int b) {
  if (a != b) throw Error(ErrorKind::dimension_mismatch, "dimension mismatch");
}

inline double fs_distance(const ProjPoint& p, const ProjPoint& q) {
  check_same_ambient(p.ambient(), q.ambient());
  const Complex overlap = p.coords().dot(q.coords());
  const double s2 = 1.0 - std::norm(overlap);
  if (s2 > 1e-4) return std::sqrt(std::min(1.0, s2));
  // Near-coincident points: the residual keeps full relative precision.
  const double a = (p.coords() - q.coords() * q.coords().dot(p.coords())).norm();
  const double b = (q.coords() - p.coords() * p.coords().dot(q.coords())).norm();
  return std::min(1.0, 0.5 * (a + b));
}

class ProjSubspace {
 public:
  ProjSubspace() = default;

  static ProjSubspace from_orthonormal(const CMatrix& frame) {
    const CMatrix gram = frame.adjoint() * frame;
    require((gram - CMatrix::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff() <= tol::structural,
            ErrorKind::precondition, "frame is not orthonormal");
    ProjSubspace w;
    w.frame_ = frame;
    return w;
  }

  // Orthonormalizes the column span; the columns must be independent.
  static ProjSubspace span(const CMatrix& columns) {
    require(columns.cols() >= 1 && columns.cols() <= columns.rows(), ErrorKind::precondition,
            "bad spanning set");
    Eigen::JacobiSVD<CMatrix> svd(columns, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    require(sv(sv.size() - 1) > 1e-12 * std::max(1.0, sv(0)), ErrorKind::precondition,
            "spanning set is rank deficient");
    ProjSubspace w;
    w.frame_ = svd.matrixU();
    return w;
  }

  static ProjSubspace span(const ProjPoint& p) { return from_orthonormal(p.coords()); }

  const CMatrix& frame() const { return frame_; }
  int ambient() const { return static_cast<int>(frame_.rows()) - 1; }
  int dim() const { return static_cast<int>(frame_.cols()); }  // linear dimension k
  int codim() const { return ambient() + 1 - dim(); }

  // Orthonormal basis of the orthogonal complement (possibly empty).
  CMatrix complement() const {
    const int n = static_cast<int>(frame_.rows());
    Eigen::HouseholderQR<CMatrix> qr(frame_);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    return q.rightCols(n - dim());
  }

  CMatrix projector() const { return frame_ * frame_.adjoint(); }

 private:
  CMatrix frame_;
};

// |pr_{W-perp}(p)| for the unit representative.
inline double point_subspace_distance(const ProjPoint& p, const ProjSubspace& w) {
  check_same_ambient(p.ambient(), w.ambient());
  const CVector residual = p.coords() - w.frame() * (w.frame().adjoint() * p.coords());
  return std::min(1.0, residual.norm());
}

inline bool contains(const ProjSubspace& w, const ProjPoint& p) {
  return point_subspace_distance(p, w) < tol::structural;
}

// The line through (p,0) and (0,q) in P^{2t+1}.
inline ProjSubspace join_line(const ProjPoint& p, const ProjPoint& q) {
  check_same_ambient(p.ambient(), q.ambient());
  const int n = p.ambient() + 1;
  CMatrix frame = CMatrix::Zero(2 * n, 2);
  frame.col(0).head(n) = p.coords();
  frame.col(1).tail(n) = q.coords();
  return ProjSubspace::from_orthonormal(frame);
}

inline ProjPoint embed_first(const ProjPoint& p) {
  const int n = p.ambient() + 1;
  CVector v = CVector::Zero(2 * n);
  v.head(n) = p.coords();
  return ProjPoint::from_unit(v);
}

inline ProjPoint embed_second(const ProjPoint& q) {
  const int n = q.ambient() + 1;
  CVector v = CVector::Zero(2 * n);
  v.tail(n) = q.coords();
  return ProjPoint::from_unit(v);
}

// (theta, theta)/sqrt(2) in P^{2t+1}.
inline ProjPoint diagonal_point(const ProjPoint& theta) {
  const int n = theta.ambient() + 1;
  CVector v(2 * n);
  v.head(n) = theta.coords();
  v.tail(n) = theta.coords();
  return ProjPoint(v);
}

// The diagonal P(Delta) in P^{2t+1} as a subspace of dimension t+1.
inline ProjSubspace diagonal_subspace(int t) {
  const int n = t + 1;
  CMatrix frame = CMatrix::Zero(2 * n, n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    frame(i, i) = s;
    frame(n + i, i) = s;
  }
  return ProjSubspace::from_orthonormal(frame);
}

// Householder reflection H with H e_0 = theta-hat, where theta-hat is theta
// rotated so that its first coordinate is real and nonnegative.
inline CMatrix householder_to(const ProjPoint& theta) {
  const int n = theta.ambient() + 1;
  CVector target = theta.coords();
  const double a0 = std::abs(target[0]);
  if (a0 > 0) target *= std::conj(target[0]) / a0;
  CVector v = -target;
  v[0] += 1.0;
  const double vn = v.squaredNorm();
  CMatrix h = CMatrix::Identity(n, n);
  if (vn > 1e-30) h -= (2.0 / vn) * v * v.adjoint();
  return h;
}

class AffineChart {
 public:
  AffineChart() = default;
  explicit AffineChart(const ProjPoint& center) : center_(center), unitary_(householder_to(center)) {}

  AffineChart(const ProjPoint& center, const CMatrix& unitary) : center_(center), unitary_(unitary) {
    const int n = center.ambient() + 1;
    require(unitary.rows() == n && unitary.cols() == n, ErrorKind::dimension_mismatch, "dimension mismatch");
    require((unitary.adjoint() * unitary - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < tol::structural,
            ErrorKind::precondition, "chart matrix is not unitary");
    require(fs_distance(ProjPoint(CVector(unitary.col(0))), center) < tol::structural,
            ErrorKind::precondition, "chart matrix does not map e_0 to the center");
  }

  const ProjPoint& center() const { return center_; }
  const CMatrix& unitary() const { return unitary_; }
  int ambient() const { return center_.ambient(); }

  // U (1, w) as an unnormalized vector.
  CVector lift(const CVector& w) const {
    require(w.size() == ambient(), ErrorKind::dimension_mismatch, "dimension mismatch");
    return unitary_.col(0) + unitary_.rightCols(ambient()) * w;
  }

  ProjPoint point(const CVector& w) const { return ProjPoint(lift(w)); }

  CVector coords(const ProjPoint& p) const {
    check_same_ambient(p.ambient(), ambient());
    const CVector q = unitary_.adjoint() * p.coords();
    if (std::abs(q[0]) <= tol::chart_infinity) throw Error(ErrorKind::chart_infinity, "point at chart infinity");
    return q.tail(ambient()) / q[0];
  }

 private:
  ProjPoint center_;
  CMatrix unitary_;
};

inline ProjPoint chart_point(const AffineChart& chart, const CVector& w) { return chart.point(w); }
inline CVector chart_coords(const AffineChart& chart, const ProjPoint& p) { return chart.coords(p); }

// Unitary-invariant point: normalized complex Gaussian.
inline ProjPoint random_point(int t, Rng& rng) {
  require(t >= 1, ErrorKind::precondition, "ambient dimension must be at least 1");
  return ProjPoint(rng.gaussian_vector(t + 1));
}

inline ProjPoint random_point(int t, std::uint64_t seed) {
  Rng rng(seed);
  return random_point(t, rng);
}

// A point at prescribed distance d from theta, otherwise Haar random.
inline ProjPoint random_point_at_distance(const ProjPoint& theta, double d, Rng& rng) {
  CVector g = rng.gaussian_vector(theta.ambient() + 1);
  g -= theta.coords() * theta.coords().dot(g);
  g.normalize();
  const double c = std::sqrt(std::max(0.0, 1.0 - d * d));
  return ProjPoint(CVector(c * theta.coords() + d * g));
}

}  // namespace algdist
