#pragma once
// Shared types, error kinds and tolerances.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace algdist {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class ErrorKind {
  dimension_mismatch,
  chart_infinity,
  jet_singularity,
  jet_domain,
  jet_order,
  improper_intersection,
  non_generic,
  line_in_divisor,
  point_on_cycle,
  no_far_subspace,
  cutset_saturated,
  precondition,
  budget,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace tol {
inline constexpr double unit_norm = 1e-12;
inline constexpr double structural = 1e-10;
inline constexpr double derived = 1e-6;
inline constexpr double chart_infinity = 1e-12;
inline constexpr double jet_constant = 1e-14;
inline constexpr double genericity = 1e-10;
inline constexpr double root_cluster = 1e-7;
}  // namespace tol

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log((S+2)(D+2)); the clamped form keeps S=0 and D=1 meaningful.
inline double clamped_log(double s, double d) { return std::log((s + 2.0) * (d + 2.0)); }

inline double harmonic(int n) {
  double h = 0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

inline void require(bool ok, ErrorKind kind, const char* what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace algdist
