#pragma once
// Truncated multivariate real Taylor series (jets).
//
// Coefficients are stored densely in graded order: all multi-indices of total
// degree 0, then degree 1, ... up to the order S; inside one degree the order
// is lexicographic with the first variable most significant. Products are
// computed through an additive key K(I) = sum_k I_k (S+1)^k, which makes
// K(I+J) = K(I) + K(J) whenever |I+J| <= S.

#include "algdist/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace algdist {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// Number of coefficients of a jet with v variables and order S.
inline std::uint64_t jet_size(int nvars, int order) { return binomial(nvars + order, order); }

class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int nvars, int order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(nvars, order));
    return slot;
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_.size(); }
  int degree(std::size_t i) const { return degree_[i]; }
  // First index of degree d; degree_begin(order+1) == size().
  std::size_t degree_begin(int d) const { return offsets_[static_cast<std::size_t>(std::min(d, order_ + 1))]; }
  std::span<const std::uint8_t> exponents(std::size_t i) const {
    return {exps_.data() + i * static_cast<std::size_t>(nvars_), static_cast<std::size_t>(nvars_)};
  }
  std::uint64_t key(std::size_t i) const { return keys_[i]; }
  const std::uint64_t* keys() const { return keys_.data(); }
  double log_factorial(std::size_t i) const { return log_fact_[i]; }

  std::size_t index_of_key(std::uint64_t k) const {
    if (!dense_.empty()) return static_cast<std::size_t>(dense_[k]);
    return sparse_.at(k);
  }

  std::size_t index_of(std::span<const int> multi) const {
    require(static_cast<int>(multi.size()) == nvars_, ErrorKind::dimension_mismatch, "dimension mismatch");
    int total = 0;
    std::uint64_t k = 0;
    for (int j = nvars_ - 1; j >= 0; --j) {
      require(multi[j] >= 0, ErrorKind::precondition, "negative multi-index");
      total += multi[j];
      k = k * static_cast<std::uint64_t>(order_ + 1) + static_cast<std::uint64_t>(std::min(multi[j], order_));
    }
    if (total > order_) throw Error(ErrorKind::jet_order, "multi-index exceeds jet order");
    return index_of_key(k);
  }

  // Index of the product monomial; requires degree(i)+degree(j) <= order.
  std::size_t sum_index(std::size_t i, std::size_t j) const { return index_of_key(keys_[i] + keys_[j]); }

 private:
  JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
    require(nvars >= 1 && order >= 0, ErrorKind::precondition, "jet needs v >= 1 and S >= 0");
    require(order < 256, ErrorKind::precondition, "jet order too large");
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(nvars), 0);
    offsets_.push_back(0);
    for (int d = 0; d <= order; ++d) {
      emit_degree(cur, 0, d);
      offsets_.push_back(degree_.size());
    }
    const std::size_t n = degree_.size();
    keys_.resize(n);
    log_fact_.resize(n);
    const std::uint64_t radix = static_cast<std::uint64_t>(order + 1);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t k = 0;
      double lf = 0;
      for (int j = nvars - 1; j >= 0; --j) {
        const int e = exps_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(j)];
        k = k * radix + static_cast<std::uint64_t>(e);
        lf += std::lgamma(e + 1.0);
      }
      keys_[i] = k;
      log_fact_[i] = lf;
    }
    // Dense key table when (S+1)^v is small enough.
    double space = std::pow(static_cast<double>(radix), nvars);
    if (space <= static_cast<double>(1u << 24)) {
      dense_.assign(static_cast<std::size_t>(space), -1);
      for (std::size_t i = 0; i < n; ++i) dense_[keys_[i]] = static_cast<std::int32_t>(i);
    } else {
      sparse_.reserve(n);
      for (std::size_t i = 0; i < n; ++i) sparse_.emplace(keys_[i], i);
    }
  }

  void emit_degree(std::vector<std::uint8_t>& cur, int var, int remaining) {
    if (var == nvars_ - 1) {
      cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
      exps_.insert(exps_.end(), cur.begin(), cur.end());
      int total = 0;
      for (auto e : cur) total += e;
      degree_.push_back(total);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
      emit_degree(cur, var + 1, remaining - e);
    }
  }

  int nvars_;
  int order_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint64_t> keys_;
  std::vector<double> log_fact_;
  std::vector<std::int32_t> dense_;
  std::unordered_map<std::uint64_t, std::size_t> sparse_;
};

class Jet {
 public:
  Jet() = default;
  explicit Jet(std::shared_ptr<const JetLayout> layout)
      : layout_(std::move(layout)), c_(layout_->size(), 0.0) {}
  Jet(int nvars, int order) : Jet(JetLayout::get(nvars, order)) {}

  static Jet constant(int nvars, int order, double value) {
    Jet j(nvars, order);
    j.c_[0] = value;
    return j;
  }
  static Jet constant_like(const Jet& like, double value) {
    Jet j(like.layout_);
    j.c_[0] = value;
    return j;
  }
  // The coordinate function x_var + value.
  static Jet variable(int nvars, int order, int var, double value = 0.0) {
    Jet j(nvars, order);
    j.c_[0] = value;
    if (order >= 1) j.c_[1 + static_cast<std::size_t>(var)] = 1.0;
    return j;
  }

  const JetLayout& layout() const { return *layout_; }
  const std::shared_ptr<const JetLayout>& layout_ptr() const { return layout_; }
  int order() const { return layout_->order(); }
  int nvars() const { return layout_->nvars(); }
  std::size_t size() const { return c_.size(); }
  double constant_term() const { return c_[0]; }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  std::vector<double>& coeffs() { return c_; }
  const std::vector<double>& coeffs() const { return c_; }

  double coeff(std::span<const int> multi) const { return c_[layout_->index_of(multi)]; }

  Jet& operator+=(const Jet& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  void check(const Jet& o) const {
    if (layout_ != o.layout_) throw Error(ErrorKind::dimension_mismatch, "jet layouts differ");
  }

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> c_;
};

namespace detail {

inline std::vector<std::size_t> nonzeros(const std::vector<double>& c, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> nz;
  for (std::size_t i = lo; i < hi; ++i)
    if (c[i] != 0.0) nz.push_back(i);
  return nz;
}

// out += scale * (a restricted to [alo,ahi)) * (b restricted to degrees <= bmaxdeg
// and the slice [blo,bhi)), truncated at the jet order.
inline void accumulate(const Jet& a, std::size_t alo, std::size_t ahi, const Jet& b, std::size_t blo,
                       std::size_t bhi, double scale, Jet& out) {
  const JetLayout& L = a.layout();
  const int order = L.order();
  const std::uint64_t* keys = L.keys();
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  auto& oc = out.coeffs();
  const auto anz = nonzeros(ac, alo, ahi);
  if (anz.empty()) return;
  const auto bnz = nonzeros(bc, blo, bhi);
  const bool b_sparse = bnz.size() * 3 < (bhi - blo);
  for (std::size_t i : anz) {
    const double ai = ac[i] * scale;
    const std::uint64_t ki = keys[i];
    const std::size_t jend = std::min(bhi, L.degree_begin(order - L.degree(i) + 1));
    if (b_sparse) {
      for (std::size_t j : bnz) {
        if (j >= jend) break;
        oc[L.index_of_key(ki + keys[j])] += ai * bc[j];
      }
    } else {
      for (std::size_t j = blo; j < jend; ++j) oc[L.index_of_key(ki + keys[j])] += ai * bc[j];
    }
  }
}

// out_{da+db} += scale * a_{da} * b_{db} on homogeneous parts.
inline void accumulate_parts(const Jet& a, int da, const Jet& b, int db, double scale, Jet& out) {
  const JetLayout& L = a.layout();
  if (da + db > L.order()) return;
  accumulate(a, L.degree_begin(da), L.degree_begin(da + 1), b, L.degree_begin(db), L.degree_begin(db + 1), scale,
             out);
}

}  // namespace detail

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator-(Jet a) { return a *= -1.0; }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator+(Jet a, double s) { return a += s; }
inline Jet operator+(double s, Jet a) { return a += s; }
inline Jet operator-(Jet a, double s) { return a += -s; }

inline Jet operator*(const Jet& a, const Jet& b) {
  a.check(b);
  Jet out(a.layout_ptr());
  // Put the sparser operand outside so zero coefficients are skipped.
  std::size_t nza = 0, nzb = 0;
  for (double x : a.coeffs()) nza += (x != 0.0);
  for (double x : b.coeffs()) nzb += (x != 0.0);
  if (nza <= nzb)
    detail::accumulate(a, 0, a.size(), b, 0, b.size(), 1.0, out);
  else
    detail::accumulate(b, 0, b.size(), a, 0, a.size(), 1.0, out);
  return out;
}

inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet reciprocal(const Jet& b);

inline Jet operator/(const Jet& a, const Jet& b) {
  a.check(b);
  const double b0 = b.constant_term();
  if (!(std::abs(b0) > tol::jet_constant)) throw Error(ErrorKind::jet_singularity, "jet singularity");
  const JetLayout& L = a.layout();
  Jet q(a.layout_ptr());
  for (int k = 0; k <= L.order(); ++k) {
    Jet acc(a.layout_ptr());
    for (int j = 1; j <= k; ++j) detail::accumulate_parts(b, j, q, k - j, 1.0, acc);
    for (std::size_t i = L.degree_begin(k); i < L.degree_begin(k + 1); ++i) q[i] = (a[i] - acc[i]) / b0;
  }
  return q;
}

inline Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }

inline Jet reciprocal(const Jet& b) { return Jet::constant_like(b, 1.0) / b; }

inline Jet pow(const Jet& a, double r) {
  const double a0 = a.constant_term();
  if (r == 0.0) return Jet::constant_like(a, 1.0);
  if (r == 1.0) return a;
  const bool integral = r == std::floor(r) && r > 0;
  if (!integral && !(a0 > tol::jet_constant)) throw Error(ErrorKind::jet_domain, "jet domain");
  if (integral && !(std::abs(a0) > tol::jet_constant)) {
    // Zero constant term with a positive integer exponent: repeated products.
    Jet out = Jet::constant_like(a, 1.0);
    for (int i = 0; i < static_cast<int>(r); ++i) out = out * a;
    return out;
  }
  const JetLayout& L = a.layout();
  Jet g(a.layout_ptr());
  g[0] = std::pow(a0, r);
  for (int k = 1; k <= L.order(); ++k) {
    Jet acc(a.layout_ptr());
    for (int j = 1; j <= k; ++j) {
      const double w = r * j - (k - j);
      if (w != 0.0) detail::accumulate_parts(a, j, g, k - j, w, acc);
    }
    const double denom = static_cast<double>(k) * a0;
    for (std::size_t i = L.degree_begin(k); i < L.degree_begin(k + 1); ++i) g[i] = acc[i] / denom;
  }
  return g;
}

inline Jet sqrt(const Jet& a) {
  if (!(a.constant_term() > tol::jet_constant)) throw Error(ErrorKind::jet_domain, "jet domain");
  return pow(a, 0.5);
}

inline Jet exp(const Jet& a) {
  const JetLayout& L = a.layout();
  Jet g(a.layout_ptr());
  g[0] = std::exp(a.constant_term());
  for (int k = 1; k <= L.order(); ++k) {
    Jet acc(a.layout_ptr());
    for (int j = 1; j <= k; ++j) detail::accumulate_parts(a, j, g, k - j, static_cast<double>(j), acc);
    for (std::size_t i = L.degree_begin(k); i < L.degree_begin(k + 1); ++i) g[i] = acc[i] / k;
  }
  return g;
}

inline Jet log(const Jet& a) {
  const double a0 = a.constant_term();
  if (!(a0 > tol::jet_constant)) throw Error(ErrorKind::jet_domain, "jet domain");
  const JetLayout& L = a.layout();
  Jet g(a.layout_ptr());
  g[0] = std::log(a0);
  for (int k = 1; k <= L.order(); ++k) {
    Jet acc(a.layout_ptr());
    for (int j = 1; j < k; ++j) detail::accumulate_parts(a, k - j, g, j, static_cast<double>(j), acc);
    for (std::size_t i = L.degree_begin(k); i < L.degree_begin(k + 1); ++i)
      g[i] = (k * a[i] - acc[i]) / (k * a0);
  }
  return g;
}

enum class JetOp { add, sub, mul, div, sqrt, exp, log, power };

inline Jet jet_compose(JetOp op, const Jet& a, const Jet& b) {
  switch (op) {
    case JetOp::add: return a + b;
    case JetOp::sub: return a - b;
    case JetOp::mul: return a * b;
    case JetOp::div: return a / b;
    case JetOp::sqrt: return sqrt(a);
    case JetOp::exp: return exp(a);
    case JetOp::log: return log(a);
    case JetOp::power: break;
  }
  throw Error(ErrorKind::precondition, "power takes a real exponent");
}

inline Jet jet_compose(JetOp op, const Jet& a, double b) {
  switch (op) {
    case JetOp::add: return a + b;
    case JetOp::sub: return a - b;
    case JetOp::mul: return a * b;
    case JetOp::div:
      if (!(std::abs(b) > tol::jet_constant)) throw Error(ErrorKind::jet_singularity, "jet singularity");
      return a / b;
    case JetOp::power: return pow(a, b);
    case JetOp::sqrt: return sqrt(a);
    case JetOp::exp: return exp(a);
    case JetOp::log: return log(a);
  }
  return a;
}

// Coordinate jets x_j = values[j] + eps_j.
inline std::vector<Jet> jet_seed(std::span<const double> values, int order) {
  const int v = static_cast<int>(values.size());
  require(v >= 1 && order >= 0, ErrorKind::precondition, "jet needs v >= 1 and S >= 0");
  std::vector<Jet> out;
  out.reserve(values.size());
  for (int j = 0; j < v; ++j) out.push_back(Jet::variable(v, order, j, values[static_cast<std::size_t>(j)]));
  return out;
}

// Mixed partial derivative d^I at the expansion point: I! * c_I.
inline double extract_partial(const Jet& a, std::span<const int> multi) {
  const std::size_t i = a.layout().index_of(multi);
  return std::exp(a.layout().log_factorial(i)) * a[i];
}

// sup over |I| = s of log |d^I|, for s = 0..S, shifted by log_scale.
// Entries are -inf when every partial of that order vanishes.
inline std::vector<double> per_order_sup_log(const Jet& a, int S, double log_scale = 0.0) {
  const JetLayout& L = a.layout();
  if (S > L.order()) throw Error(ErrorKind::jet_order, "order exceeds jet order");
  std::vector<double> out(static_cast<std::size_t>(S) + 1, neg_inf);
  for (int s = 0; s <= S; ++s) {
    double best = neg_inf;
    for (std::size_t i = L.degree_begin(s); i < L.degree_begin(s + 1); ++i) {
      if (a[i] == 0.0) continue;
      best = std::max(best, L.log_factorial(i) + std::log(std::abs(a[i])));
    }
    out[static_cast<std::size_t>(s)] = best == neg_inf ? neg_inf : best + log_scale;
  }
  return out;
}

inline double sup_log_partial(const Jet& a, int S, double log_scale = 0.0) {
  const auto per = per_order_sup_log(a, S, log_scale);
  return *std::max_element(per.begin(), per.end());
}

inline bool is_vanishing(double sup_log) { return std::isinf(sup_log) && sup_log < 0; }

}  // namespace algdist
