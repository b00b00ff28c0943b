#pragma once
// Effective cycles: weighted points, weighted linear subspaces, homogeneous
// forms and products of linear forms. Linear forms act bilinearly,
// a(z) = sum_i a_i z_i.

#include "algdist/jet.hpp"
#include "algdist/projective.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

namespace algdist {

struct WeightedPoint {
  ProjPoint point;
  int mult = 1;
};

class ZeroCycle {
 public:
  ZeroCycle() = default;
  explicit ZeroCycle(int t) : t_(t) {}
  ZeroCycle(int t, std::vector<WeightedPoint> pts) : t_(t) {
    for (auto& p : pts) add(p.point, p.mult);
  }

  void add(const ProjPoint& p, int mult = 1) {
    check_same_ambient(p.ambient(), t_);
    require(mult >= 1, ErrorKind::precondition, "multiplicity must be positive");
    points_.push_back({p, mult});
  }

  int ambient() const { return t_; }
  const std::vector<WeightedPoint>& points() const { return points_; }
  int degree() const {
    int d = 0;
    for (const auto& p : points_) d += p.mult;
    return d;
  }
  bool empty() const { return points_.empty(); }

  // Each point repeated by its multiplicity.
  std::vector<ProjPoint> expanded() const {
    std::vector<ProjPoint> out;
    for (const auto& p : points_)
      for (int m = 0; m < p.mult; ++m) out.push_back(p.point);
    return out;
  }

  friend ZeroCycle operator+(ZeroCycle a, const ZeroCycle& b) {
    check_same_ambient(a.t_, b.t_);
    for (const auto& p : b.points_) a.points_.push_back(p);
    return a;
  }

 private:
  int t_ = 0;
  std::vector<WeightedPoint> points_;
};

struct WeightedSubspace {
  ProjSubspace space;
  int mult = 1;
};

class LinearCycle {
 public:
  LinearCycle() = default;
  LinearCycle(int t, int codim) : t_(t), codim_(codim) {}

  void add(const ProjSubspace& w, int mult = 1) {
    check_same_ambient(w.ambient(), t_);
    require(w.codim() == codim_, ErrorKind::precondition, "members must share codimension");
    require(mult >= 1, ErrorKind::precondition, "multiplicity must be positive");
    spaces_.push_back({w, mult});
  }

  int ambient() const { return t_; }
  int codim() const { return codim_; }
  const std::vector<WeightedSubspace>& spaces() const { return spaces_; }
  int degree() const {
    int d = 0;
    for (const auto& s : spaces_) d += s.mult;
    return d;
  }

 private:
  int t_ = 0;
  int codim_ = 0;
  std::vector<WeightedSubspace> spaces_;
};

// Complex polynomial whose monomials are indexed by a JetLayout (all degrees
// up to the layout order). Used for forms (only the top degree is populated)
// and for dehomogenized affine polynomials.
class ComplexPoly {
 public:
  ComplexPoly() = default;
  ComplexPoly(int nvars, int max_degree) : layout_(JetLayout::get(nvars, max_degree)), c_(layout_->size()) {}

  const JetLayout& layout() const { return *layout_; }
  int nvars() const { return layout_->nvars(); }
  int max_degree() const { return layout_->order(); }
  std::size_t size() const { return c_.size(); }
  Complex& operator[](std::size_t i) { return c_[i]; }
  Complex operator[](std::size_t i) const { return c_[i]; }
  const std::vector<Complex>& coeffs() const { return c_; }

  Complex coeff(std::span<const int> exps) const { return c_[layout_->index_of(exps)]; }
  Complex& coeff_ref(std::span<const int> exps) { return c_[layout_->index_of(exps)]; }

  Complex eval(const CVector& z) const {
    const int v = nvars();
    require(z.size() == v, ErrorKind::dimension_mismatch, "dimension mismatch");
    const int dmax = max_degree();
    std::vector<Complex> pw(static_cast<std::size_t>(v * (dmax + 1)));
    for (int i = 0; i < v; ++i) {
      pw[static_cast<std::size_t>(i * (dmax + 1))] = 1.0;
      for (int e = 1; e <= dmax; ++e)
        pw[static_cast<std::size_t>(i * (dmax + 1) + e)] = pw[static_cast<std::size_t>(i * (dmax + 1) + e - 1)] * z[i];
    }
    Complex sum = 0;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == Complex(0)) continue;
      Complex term = c_[k];
      auto e = layout_->exponents(k);
      for (int i = 0; i < v; ++i) term *= pw[static_cast<std::size_t>(i * (dmax + 1) + e[static_cast<std::size_t>(i)])];
      sum += term;
    }
    return sum;
  }

  // Product truncated at max_degree.
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    require(a.layout_ == b.layout_, ErrorKind::dimension_mismatch, "polynomial layouts differ");
    const JetLayout& L = *a.layout_;
    ComplexPoly out;
    out.layout_ = a.layout_;
    out.c_.assign(a.c_.size(), 0.0);
    std::vector<std::size_t> bnz;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != Complex(0)) bnz.push_back(j);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == Complex(0)) continue;
      const int room = L.order() - L.degree(i);
      for (std::size_t j : bnz) {
        if (L.degree(j) > room) break;
        out.c_[L.sum_index(i, j)] += a.c_[i] * b.c_[j];
      }
    }
    return out;
  }

  static ComplexPoly constant(int nvars, int max_degree, Complex c) {
    ComplexPoly p(nvars, max_degree);
    p.c_[0] = c;
    return p;
  }
  // c0 + sum_j lin[j] w_j.
  static ComplexPoly affine(int max_degree, Complex c0, const CVector& lin) {
    ComplexPoly p(static_cast<int>(lin.size()), max_degree);
    p.c_[0] = c0;
    if (max_degree >= 1)
      for (Eigen::Index j = 0; j < lin.size(); ++j) p.c_[1 + static_cast<std::size_t>(j)] = lin[j];
    return p;
  }

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<Complex> c_;
};

// Homogeneous form of degree D in t+1 variables.
class DivisorForm {
 public:
  DivisorForm() = default;
  DivisorForm(int t, int degree) : t_(t), d_(degree), poly_(t + 1, degree) {
    require(t >= 1 && degree >= 1, ErrorKind::precondition, "divisor needs t >= 1 and D >= 1");
  }

  int ambient() const { return t_; }
  int degree() const { return d_; }
  const ComplexPoly& poly() const { return poly_; }

  std::size_t monomial_count() const { return poly_.size() - poly_.layout().degree_begin(d_); }
  std::size_t first_monomial() const { return poly_.layout().degree_begin(d_); }

  Complex coeff(std::span<const int> exps) const { return poly_.coeff(check_exps(exps)); }
  void set(std::span<const int> exps, Complex c) { poly_.coeff_ref(check_exps(exps)) = c; }
  Complex& at(std::size_t index) { return poly_[index]; }
  Complex at(std::size_t index) const { return poly_[index]; }

  bool is_zero() const {
    for (std::size_t i = first_monomial(); i < poly_.size(); ++i)
      if (poly_[i] != Complex(0)) return false;
    return true;
  }

  double coeff_norm() const {
    double s = 0;
    for (std::size_t i = first_monomial(); i < poly_.size(); ++i) s += std::norm(poly_[i]);
    return std::sqrt(s);
  }

  Complex eval(const CVector& z) const { return poly_.eval(z); }

  DivisorForm& operator*=(Complex s) {
    for (std::size_t i = first_monomial(); i < poly_.size(); ++i) poly_[i] *= s;
    return *this;
  }

 private:
  std::span<const int> check_exps(std::span<const int> exps) const {
    require(static_cast<int>(exps.size()) == t_ + 1, ErrorKind::dimension_mismatch, "dimension mismatch");
    require(std::accumulate(exps.begin(), exps.end(), 0) == d_, ErrorKind::precondition,
            "monomial degree differs from form degree");
    return exps;
  }

  int t_ = 0;
  int d_ = 0;
  ComplexPoly poly_;
};

// a(z) = sum_i a_i z_i.
inline Complex apply_form(const CVector& a, const CVector& z) { return (a.array() * z.array()).sum(); }

struct LinearFactor {
  CVector covector;
  int mult = 1;
};

class ProductDivisor {
 public:
  ProductDivisor() = default;
  explicit ProductDivisor(int t) : t_(t) {}

  void add(const CVector& covector, int mult = 1) {
    require(covector.size() == t_ + 1, ErrorKind::dimension_mismatch, "dimension mismatch");
    require(mult >= 1, ErrorKind::precondition, "multiplicity must be positive");
    require(covector.norm() > 0, ErrorKind::precondition, "zero linear form");
    factors_.push_back({covector, mult});
  }

  int ambient() const { return t_; }
  const std::vector<LinearFactor>& factors() const { return factors_; }
  int degree() const {
    int d = 0;
    for (const auto& f : factors_) d += f.mult;
    return d;
  }

  Complex eval(const CVector& z) const {
    Complex v = 1;
    for (const auto& f : factors_) v *= std::pow(apply_form(f.covector, z), f.mult);
    return v;
  }

  // The hyperplane {a(z) = 0} as a subspace.
  static ProjSubspace hyperplane(const CVector& covector) {
    ProjSubspace normal = ProjSubspace::from_orthonormal(CVector(covector.conjugate().normalized()));
    return ProjSubspace::from_orthonormal(normal.complement());
  }

 private:
  int t_ = 0;
  std::vector<LinearFactor> factors_;
};

// Random product of unit-norm linear forms with Haar-random normals.
inline ProductDivisor random_product_divisor(int t, int degree, Rng& rng) {
  ProductDivisor z(t);
  for (int k = 0; k < degree; ++k) z.add(rng.gaussian_vector(t + 1).normalized());
  return z;
}

inline DivisorForm expand(const ProductDivisor& z) {
  const int t = z.ambient(), D = z.degree();
  require(D >= 1, ErrorKind::precondition, "empty product divisor");
  const auto& L = JetLayout::get(t + 1, D);
  // Coefficients of all degrees live in one array; only degree d is populated
  // after d linear factors.
  std::vector<Complex> cur(L->size(), 0.0);
  cur[0] = 1.0;
  int d = 0;
  for (const auto& f : z.factors())
    for (int m = 0; m < f.mult; ++m) {
      std::vector<Complex> next(L->size(), 0.0);
      for (std::size_t i = L->degree_begin(d); i < L->degree_begin(d + 1); ++i) {
        if (cur[i] == Complex(0)) continue;
        for (int v = 0; v <= t; ++v) next[L->sum_index(i, 1 + static_cast<std::size_t>(v))] += cur[i] * f.covector[v];
      }
      cur.swap(next);
      ++d;
    }
  DivisorForm out(t, D);
  for (std::size_t i = out.first_monomial(); i < L->size(); ++i) out.at(i) = cur[i];
  return out;
}

// |f(p)| for the unit representative p.
inline double evaluate_section_norm(const DivisorForm& f, const ProjPoint& p) {
  check_same_ambient(f.ambient(), p.ambient());
  return std::abs(f.eval(p.coords()));
}

inline double evaluate_section_norm(const ProductDivisor& f, const ProjPoint& p) {
  check_same_ambient(f.ambient(), p.ambient());
  return std::abs(f.eval(p.coords()));
}

// F(w) = f(U (1, w)) as a polynomial of degree <= D in t variables.
inline ComplexPoly dehomogenize(const DivisorForm& f, const AffineChart& chart) {
  check_same_ambient(f.ambient(), chart.ambient());
  const int t = f.ambient(), D = f.degree();
  const CMatrix& U = chart.unitary();
  // Powers of the affine coordinate functions z_i(w) = U_{i0} + sum_j U_{i,j+1} w_j.
  std::vector<std::vector<ComplexPoly>> pw(static_cast<std::size_t>(t + 1));
  for (int i = 0; i <= t; ++i) {
    ComplexPoly zi = ComplexPoly::affine(D, U(i, 0), CVector(U.row(i).tail(t).transpose()));
    pw[i].push_back(ComplexPoly::constant(t, D, 1.0));
    for (int e = 1; e <= D; ++e) pw[i].push_back(pw[i].back() * zi);
  }
  ComplexPoly out(t, D);
  const JetLayout& L = f.poly().layout();
  for (std::size_t k = f.first_monomial(); k < L.size(); ++k) {
    const Complex c = f.at(k);
    if (c == Complex(0)) continue;
    auto e = L.exponents(k);
    ComplexPoly term = pw[0][e[0]];
    for (int i = 1; i <= t; ++i)
      if (e[static_cast<std::size_t>(i)] > 0) term = term * pw[i][e[static_cast<std::size_t>(i)]];
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * term[j];
  }
  return out;
}

inline ComplexPoly dehomogenize(const ProductDivisor& f, const AffineChart& chart) {
  check_same_ambient(f.ambient(), chart.ambient());
  const int t = f.ambient(), D = f.degree();
  const CMatrix& U = chart.unitary();
  ComplexPoly out = ComplexPoly::constant(t, D, 1.0);
  for (const auto& fac : f.factors()) {
    const CVector row = U.transpose() * fac.covector;  // a(U (1,w)) = row_0 + sum row_{j+1} w_j
    ComplexPoly lin = ComplexPoly::affine(D, row[0], CVector(row.tail(t)));
    for (int m = 0; m < fac.mult; ++m) out = out * lin;
  }
  return out;
}

namespace detail {

// Roots of sum_k c_k x^k (degree = c.size()-1, leading coefficient nonzero).
inline std::vector<Complex> poly_roots(const std::vector<Complex>& c) {
  const int m = static_cast<int>(c.size()) - 1;
  if (m <= 0) return {};
  if (m == 1) return {-c[0] / c[1]};
  CMatrix comp = CMatrix::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(m)];
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + m);
  return roots;
}

inline Complex horner(const std::vector<Complex>& c, Complex x) {
  Complex v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

// Group nearly equal points; multiplicity = cluster size.
inline ZeroCycle cluster_points(int t, const std::vector<ProjPoint>& pts, double tol) {
  std::vector<int> owner(pts.size(), -1);
  ZeroCycle out(t);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (owner[i] >= 0) continue;
    owner[i] = static_cast<int>(groups.size());
    groups.push_back({i});
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (owner[j] < 0 && fs_distance(pts[i], pts[j]) < tol) {
        owner[j] = owner[i];
        groups.back().push_back(j);
      }
  }
  for (const auto& g : groups) {
    // Average aligned representatives of the cluster.
    CVector acc = CVector::Zero(t + 1);
    const CVector& ref = pts[g[0]].coords();
    for (std::size_t k : g) {
      const Complex ph = ref.dot(pts[k].coords());
      acc += pts[k].coords() * (std::abs(ph) > 0 ? std::conj(ph) / std::abs(ph) : Complex(1));
    }
    out.add(ProjPoint(acc), static_cast<int>(g.size()));
  }
  return out;
}

}  // namespace detail

// Points of div f on the projective line P(L), with multiplicities.
inline ZeroCycle restrict_divisor_to_line(const DivisorForm& f, const ProjSubspace& line) {
  check_same_ambient(f.ambient(), line.ambient());
  require(line.dim() == 2, ErrorKind::precondition, "restriction needs a projective line");
  const int t = f.ambient(), D = f.degree();
  const CVector u = line.frame().col(0), v = line.frame().col(1);
  // g(rho) = f(u + rho v) as a univariate polynomial of degree <= D.
  std::vector<std::vector<std::vector<Complex>>> pw(static_cast<std::size_t>(t + 1));
  for (int i = 0; i <= t; ++i) {
    pw[i].push_back({1.0});
    for (int e = 1; e <= D; ++e) {
      const auto& prev = pw[i].back();
      std::vector<Complex> next(prev.size() + 1, 0.0);
      for (std::size_t k = 0; k < prev.size(); ++k) {
        next[k] += prev[k] * u[i];
        next[k + 1] += prev[k] * v[i];
      }
      pw[i].push_back(std::move(next));
    }
  }
  std::vector<Complex> g(static_cast<std::size_t>(D) + 1, 0.0);
  const JetLayout& L = f.poly().layout();
  for (std::size_t k = f.first_monomial(); k < L.size(); ++k) {
    const Complex c = f.at(k);
    if (c == Complex(0)) continue;
    auto e = L.exponents(k);
    std::vector<Complex> term = pw[0][e[0]];
    for (int i = 1; i <= t; ++i) {
      const auto& q = pw[i][e[static_cast<std::size_t>(i)]];
      std::vector<Complex> next(term.size() + q.size() - 1, 0.0);
      for (std::size_t a = 0; a < term.size(); ++a)
        for (std::size_t b = 0; b < q.size(); ++b) next[a + b] += term[a] * q[b];
      term.swap(next);
    }
    for (std::size_t a = 0; a < term.size(); ++a) g[a] += c * term[a];
  }
  double scale = 0;
  for (auto x : g) scale = std::max(scale, std::abs(x));
  const double fscale = std::max(f.coeff_norm(), 1e-300);
  if (scale <= 1e-13 * fscale) throw Error(ErrorKind::line_in_divisor, "line contained in divisor");
  int m = D;
  while (m > 0 && std::abs(g[static_cast<std::size_t>(m)]) <= 1e-13 * scale) --m;
  std::vector<Complex> gm(g.begin(), g.begin() + m + 1);
  std::vector<Complex> roots = detail::poly_roots(gm);
  // Newton polish on the unreduced polynomial.
  std::vector<Complex> dg(gm.size() > 1 ? gm.size() - 1 : 1, 0.0);
  for (std::size_t k = 1; k < gm.size(); ++k) dg[k - 1] = gm[k] * static_cast<double>(k);
  for (auto& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const Complex d = detail::horner(dg, r);
      if (std::abs(d) < 1e-8 * scale * std::max(1.0, std::abs(r))) break;
      const Complex step = detail::horner(gm, r) / d;
      if (!(std::abs(step) < 1e-3 * (1 + std::abs(r)))) break;
      r -= step;
    }
  }
  std::vector<ProjPoint> pts;
  for (auto r : roots) pts.emplace_back(CVector(u + r * v));
  for (int k = m; k < D; ++k) pts.push_back(ProjPoint(v));
  return detail::cluster_points(t, pts, tol::root_cluster);
}

// Exact slice of a product divisor by a line: one point per factor.
inline ZeroCycle restrict_divisor_to_line(const ProductDivisor& f, const ProjSubspace& line) {
  check_same_ambient(f.ambient(), line.ambient());
  require(line.dim() == 2, ErrorKind::precondition, "restriction needs a projective line");
  const CVector u = line.frame().col(0), v = line.frame().col(1);
  ZeroCycle out(f.ambient());
  for (const auto& fac : f.factors()) {
    const Complex au = apply_form(fac.covector, u), av = apply_form(fac.covector, v);
    if (std::hypot(std::abs(au), std::abs(av)) <= 1e-13 * fac.covector.norm())
      throw Error(ErrorKind::line_in_divisor, "line contained in divisor");
    out.add(ProjPoint(CVector(av * u - au * v)), fac.mult);
  }
  return out;
}

// Intersection points of two product divisors in P^2.
inline ZeroCycle intersect_product_divisors(const ProductDivisor& z0, const ProductDivisor& z1) {
  require(z0.ambient() == 2 && z1.ambient() == 2, ErrorKind::precondition, "intersection needs t = 2");
  std::vector<WeightedPoint> pts;
  for (const auto& a : z0.factors())
    for (const auto& b : z1.factors()) {
      const CVector an = a.covector.normalized(), bn = b.covector.normalized();
      CVector cross(3);
      cross[0] = an[1] * bn[2] - an[2] * bn[1];
      cross[1] = an[2] * bn[0] - an[0] * bn[2];
      cross[2] = an[0] * bn[1] - an[1] * bn[0];
      if (cross.norm() <= 1e-10) throw Error(ErrorKind::improper_intersection, "improper intersection");
      pts.push_back({ProjPoint(cross), a.mult * b.mult});
    }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (fs_distance(pts[i].point, pts[j].point) < tol::genericity)
        throw Error(ErrorKind::non_generic, "non-generic configuration");
  return ZeroCycle(2, std::move(pts));
}

inline LinearCycle join_cycles(const ZeroCycle& z0, const ZeroCycle& z1) {
  check_same_ambient(z0.ambient(), z1.ambient());
  const int t = z0.ambient();
  LinearCycle out(2 * t + 1, 2 * t);
  for (const auto& a : z0.points())
    for (const auto& b : z1.points()) out.add(join_line(a.point, b.point), a.mult * b.mult);
  return out;
}

// ---------------------------------------------------------------------------
// JSON serialization. Complex numbers are [re, im] pairs.

using Cycle = std::variant<ZeroCycle, LinearCycle, DivisorForm, ProductDivisor>;

namespace detail {

inline nlohmann::json complex_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline Complex complex_from(const nlohmann::json& j) {
  require(j.is_array() && j.size() == 2, ErrorKind::config, "complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json vector_json(const CVector& v) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v[i]));
  return a;
}

inline CVector vector_from(const nlohmann::json& j, int n) {
  require(j.is_array() && static_cast<int>(j.size()) == n, ErrorKind::config, "vector has wrong length");
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_from(j[static_cast<std::size_t>(i)]);
  return v;
}

}  // namespace detail

inline nlohmann::json to_json(const ZeroCycle& z) {
  nlohmann::json j = {{"type", "zero"}, {"ambient", z.ambient()}};
  auto pts = nlohmann::json::array();
  for (const auto& p : z.points())
    pts.push_back({{"coords", detail::vector_json(p.point.coords())}, {"multiplicity", p.mult}});
  j["points"] = pts;
  return j;
}

inline nlohmann::json to_json(const LinearCycle& z) {
  nlohmann::json j = {{"type", "linear"}, {"ambient", z.ambient()}, {"codim", z.codim()}};
  auto sp = nlohmann::json::array();
  for (const auto& s : z.spaces()) {
    auto cols = nlohmann::json::array();
    for (int c = 0; c < s.space.dim(); ++c) cols.push_back(detail::vector_json(s.space.frame().col(c)));
    sp.push_back({{"frame", cols}, {"multiplicity", s.mult}});
  }
  j["spaces"] = sp;
  return j;
}

inline nlohmann::json to_json(const DivisorForm& f) {
  nlohmann::json j = {{"type", "divisor"}, {"ambient", f.ambient()}, {"degree", f.degree()}};
  auto terms = nlohmann::json::array();
  const JetLayout& L = f.poly().layout();
  for (std::size_t k = f.first_monomial(); k < L.size(); ++k) {
    if (f.at(k) == Complex(0)) continue;
    auto e = L.exponents(k);
    terms.push_back({{"exponents", std::vector<int>(e.begin(), e.end())}, {"coeff", detail::complex_json(f.at(k))}});
  }
  j["terms"] = terms;
  return j;
}

inline nlohmann::json to_json(const ProductDivisor& z) {
  nlohmann::json j = {{"type", "product"}, {"ambient", z.ambient()}};
  auto fs = nlohmann::json::array();
  for (const auto& f : z.factors()) fs.push_back({{"covector", detail::vector_json(f.covector)}, {"multiplicity", f.mult}});
  j["factors"] = fs;
  return j;
}

inline nlohmann::json cycle_to_json(const Cycle& c) {
  return std::visit([](const auto& z) { return to_json(z); }, c);
}

inline Cycle cycle_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    const int t = j.at("ambient").get<int>();
    if (type == "zero") {
      ZeroCycle z(t);
      for (const auto& p : j.at("points"))
        z.add(ProjPoint::from_unit(detail::vector_from(p.at("coords"), t + 1)), p.at("multiplicity").get<int>());
      return z;
    }
    if (type == "linear") {
      LinearCycle z(t, j.at("codim").get<int>());
      for (const auto& s : j.at("spaces")) {
        const auto& cols = s.at("frame");
        CMatrix frame(t + 1, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) frame.col(static_cast<Eigen::Index>(c)) = detail::vector_from(cols[c], t + 1);
        z.add(ProjSubspace::from_orthonormal(frame), s.at("multiplicity").get<int>());
      }
      return z;
    }
    if (type == "divisor") {
      DivisorForm f(t, j.at("degree").get<int>());
      for (const auto& term : j.at("terms")) {
        const auto e = term.at("exponents").get<std::vector<int>>();
        f.set(e, detail::complex_from(term.at("coeff")));
      }
      require(!f.is_zero(), ErrorKind::config, "divisor form is identically zero");
      return f;
    }
    if (type == "product") {
      ProductDivisor z(t);
      for (const auto& f : j.at("factors")) z.add(detail::vector_from(f.at("covector"), t + 1), f.at("multiplicity").get<int>());
      return z;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, std::string("malformed cycle: ") + e.what());
  }
  throw Error(ErrorKind::config, "unknown cycle type");
}

}  // namespace algdist
