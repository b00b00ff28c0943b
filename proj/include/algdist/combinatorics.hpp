#pragma once
// The merge-order path through the grid of point pairs of two zero-cycles,
// the cut set of the S closest joins, and exact evaluation of the sum
// inequalities that compare joint distances with single-cycle tail sums.
//
// Indices: point indices l are 1-based as in the sums; the vectors themselves
// are 0-based. path.f[k] for k = 0..n0+n1 with f[0] = (0,0).

#include "algdist/cycles.hpp"
#include "algdist/projective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace algdist {

struct DistanceProfile {
  std::vector<double> d0, d1;  // ascending
  Eigen::MatrixXd joint;       // joint(i,j) = |z0_i # z1_j, (theta,theta)|, sorted indices

  int n0() const { return static_cast<int>(d0.size()); }
  int n1() const { return static_cast<int>(d1.size()); }
  const std::vector<double>& d(int which) const { return which == 0 ? d0 : d1; }
  int n(int which) const { return which == 0 ? n0() : n1(); }
  // joint distance with 1-based indices
  double at(int i, int j) const { return joint(i - 1, j - 1); }
  // |Z0 + Z1, theta|
  double min_distance() const { return std::min(d0.front(), d1.front()); }
};

namespace detail {

inline void validate_profile(const DistanceProfile& p) {
  require(p.n0() >= 1 && p.n1() >= 1, ErrorKind::precondition, "empty cycle");
  require(p.joint.rows() == p.n0() && p.joint.cols() == p.n1(), ErrorKind::dimension_mismatch, "dimension mismatch");
  std::vector<double> all(p.d0);
  all.insert(all.end(), p.d1.begin(), p.d1.end());
  for (int i = 0; i < p.n0(); ++i)
    for (int j = 0; j < p.n1(); ++j) {
      const double v = p.joint(i, j);
      const double lo = std::min(p.d0[static_cast<std::size_t>(i)], p.d1[static_cast<std::size_t>(j)]);
      const double hi = std::max(p.d0[static_cast<std::size_t>(i)], p.d1[static_cast<std::size_t>(j)]);
      require(v >= lo - 1e-10 && v <= hi + 1e-10, ErrorKind::precondition, "joint distance outside its bracket");
      all.push_back(v);
    }
  for (double v : all) require(v > 0, ErrorKind::point_on_cycle, "point on cycle");
  std::sort(all.begin(), all.end());
  for (std::size_t k = 1; k < all.size(); ++k)
    if (all[k] - all[k - 1] < tol::genericity) throw Error(ErrorKind::non_generic, "non-generic configuration");
}

}  // namespace detail

// From precomputed values; d0, d1 must be ascending and joint indexed to match.
inline DistanceProfile make_profile(std::vector<double> d0, std::vector<double> d1, Eigen::MatrixXd joint) {
  DistanceProfile p{std::move(d0), std::move(d1), std::move(joint)};
  require(std::is_sorted(p.d0.begin(), p.d0.end()) && std::is_sorted(p.d1.begin(), p.d1.end()),
          ErrorKind::precondition, "distance lists must be ascending");
  detail::validate_profile(p);
  return p;
}

inline DistanceProfile build_profile(const ZeroCycle& z0, const ZeroCycle& z1, const ProjPoint& theta) {
  check_same_ambient(z0.ambient(), theta.ambient());
  check_same_ambient(z1.ambient(), theta.ambient());
  auto expand_sorted = [&](const ZeroCycle& z) {
    std::vector<std::pair<double, ProjPoint>> v;
    for (const auto& p : z.points())
      for (int m = 0; m < p.mult; ++m) v.emplace_back(fs_distance(theta, p.point), p.point);
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  };
  const auto a = expand_sorted(z0), b = expand_sorted(z1);
  DistanceProfile p;
  for (const auto& x : a) p.d0.push_back(x.first);
  for (const auto& x : b) p.d1.push_back(x.first);
  p.joint.resize(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  const ProjPoint diag = diagonal_point(theta);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      p.joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          point_subspace_distance(diag, join_line(a[i].second, b[j].second));
  detail::validate_profile(p);
  return p;
}

// ---------------------------------------------------------------------------

struct Path {
  std::vector<std::array<int, 2>> f;  // f[0] = (0,0), ..., f[n0+n1] = (n0,n1)
  std::vector<int> i;                 // i[k] for k >= 1: the coordinate that did not increase; i[0] = -1

  int steps() const { return static_cast<int>(f.size()) - 1; }
  // The cycle index of the point added at step k, and its 1-based index.
  int added_cycle(int k) const { return 1 - i[static_cast<std::size_t>(k)]; }
  int added_index(int k) const { return f[static_cast<std::size_t>(k)][static_cast<std::size_t>(added_cycle(k))]; }
};

inline Path build_path(const DistanceProfile& p) {
  Path path;
  path.f.push_back({0, 0});
  path.i.push_back(-1);
  std::size_t a = 0, b = 0;
  while (a < p.d0.size() || b < p.d1.size()) {
    const bool take0 = b == p.d1.size() || (a < p.d0.size() && p.d0[a] < p.d1[b]);
    if (take0) ++a;
    else ++b;
    path.f.push_back({static_cast<int>(a), static_cast<int>(b)});
    path.i.push_back(take0 ? 1 : 0);
  }
  return path;
}

// sum over k of sum_{l > f_{i_k}(k)} log joint(new point, z^{i_k}_l). Equals
// the full double sum exactly. The legacy flag pairs with z^{1-i_k}_{f_{i_k}(k)}
// instead, which does not reproduce the double sum; out-of-range indices in
// that reading contribute nothing.
inline double reordered_joint_sum(const DistanceProfile& p, const Path& path, bool legacy = false) {
  double s = 0;
  for (int k = 1; k <= path.steps(); ++k) {
    const int ik = path.i[static_cast<std::size_t>(k)];
    const int other = 1 - ik;
    const int fk = path.f[static_cast<std::size_t>(k)][static_cast<std::size_t>(ik)];
    const int idx = legacy ? fk : path.added_index(k);
    if (idx < 1 || idx > p.n(other)) continue;
    for (int l = fk + 1; l <= p.n(ik); ++l) s += std::log(ik == 0 ? p.at(l, idx) : p.at(idx, l));
  }
  return s;
}

inline double joint_log_sum(const DistanceProfile& p) { return p.joint.array().log().sum(); }

// ---------------------------------------------------------------------------

struct CutSet {
  int S = 0;
  std::vector<std::vector<bool>> in;  // in[i-1][j-1]
  std::array<int, 2> nu{0, 0};
  int k0 = 1;
  std::vector<int> h;  // h[k] for k = 1..n0+n1; h[0] = 0

  bool contains(int i, int j) const { return in[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }
};

// M = the S smallest joint distances. h[k] counts the pairs formed at step k
// of the path that lie in M, which is zero from k0 on.
inline CutSet build_cutset(const DistanceProfile& p, const Path& path, int S) {
  const int n0 = p.n0(), n1 = p.n1();
  require(S >= 0 && S <= n0 * n1, ErrorKind::precondition, "S out of range");
  if (S == n0 * n1) throw Error(ErrorKind::cutset_saturated, "cut set saturates grid");
  CutSet c;
  c.S = S;
  c.in.assign(static_cast<std::size_t>(n0), std::vector<bool>(static_cast<std::size_t>(n1), false));
  std::vector<std::pair<double, std::pair<int, int>>> all;
  for (int i = 1; i <= n0; ++i)
    for (int j = 1; j <= n1; ++j) all.push_back({p.at(i, j), {i, j}});
  std::sort(all.begin(), all.end());
  for (int s = 0; s < S; ++s) {
    const auto [i, j] = all[static_cast<std::size_t>(s)].second;
    c.in[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = true;
  }
  // Downward closure.
  for (int i = 1; i <= n0; ++i)
    for (int j = 1; j <= n1; ++j)
      if (c.contains(i, j))
        for (int a = 1; a <= i; ++a)
          for (int b = 1; b <= j; ++b)
            if (!c.contains(a, b)) throw std::logic_error("cut set is not a staircase");
  auto clamped_in = [&](const std::array<int, 2>& f) { return c.contains(std::max(f[0], 1), std::max(f[1], 1)); };
  c.k0 = -1;
  for (int k = 1; k <= path.steps(); ++k)
    if (!clamped_in(path.f[static_cast<std::size_t>(k)])) {
      c.k0 = k;
      break;
    }
  if (c.k0 < 0) throw std::logic_error("no path point outside the cut set");
  c.nu = path.f[static_cast<std::size_t>(c.k0 - 1)];
  if (c.nu[0] * c.nu[1] > S) throw std::logic_error("nu0 * nu1 exceeds S");
  c.h.assign(static_cast<std::size_t>(path.steps() + 1), 0);
  for (int k = 1; k <= path.steps(); ++k) {
    const int ik = path.i[static_cast<std::size_t>(k)];
    const int idx = path.added_index(k);
    const int fk = path.f[static_cast<std::size_t>(k)][static_cast<std::size_t>(ik)];
    int lmin = p.n(ik) + 1;
    for (int l = 1; l <= p.n(ik); ++l) {
      const bool inside = ik == 0 ? c.contains(l, idx) : c.contains(idx, l);
      if (!inside) {
        lmin = l;
        break;
      }
    }
    c.h[static_cast<std::size_t>(k)] = std::max(0, lmin - (fk + 1));
  }
  for (int k = c.k0; k <= path.steps(); ++k)
    if (c.h[static_cast<std::size_t>(k)] != 0) throw std::logic_error("h is nonzero beyond k0");
  return c;
}

// ---------------------------------------------------------------------------

enum class CombVariant { comb1_1, comb1_2, comb2_1, comb2_2, comb2_3 };

inline const char* to_string(CombVariant v) {
  switch (v) {
    case CombVariant::comb1_1: return "comb1.1";
    case CombVariant::comb1_2: return "comb1.2";
    case CombVariant::comb2_1: return "comb2.1";
    case CombVariant::comb2_2: return "comb2.2";
    case CombVariant::comb2_3: return "comb2.3";
  }
  return "?";
}

inline CombVariant comb_variant_from_string(const std::string& s) {
  for (auto v : {CombVariant::comb1_1, CombVariant::comb1_2, CombVariant::comb2_1, CombVariant::comb2_2,
                 CombVariant::comb2_3})
    if (s == to_string(v)) return v;
  throw Error(ErrorKind::config, "unknown comb variant: " + s);
}

struct CombResult {
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

inline constexpr double kCombSlack = 1e-9;

namespace detail {

// sum_{l > from} log d_l (1-based l).
inline double tail_from(const std::vector<double>& d, int from) {
  double s = 0;
  for (int l = from + 1; l <= static_cast<int>(d.size()); ++l) s += std::log(d[static_cast<std::size_t>(l - 1)]);
  return s;
}

inline double outside_cut_sum(const DistanceProfile& p, const CutSet& c) {
  double s = 0;
  for (int i = 1; i <= p.n0(); ++i)
    for (int j = 1; j <= p.n1(); ++j)
      if (!c.contains(i, j)) s += std::log(p.at(i, j));
  return s;
}

}  // namespace detail

// `k` is K for the comb1 variants and comb2.1 (K >= k0 for the latter), and
// the step k >= k0 for comb2.2 / comb2.3. The comb1 variants ignore the cut set.
inline CombResult verify_comb(const DistanceProfile& p, const Path& path, const CutSet& cut, CombVariant which,
                              int k) {
  require(k >= 1 && k <= path.steps(), ErrorKind::precondition, "step out of range");
  CombResult r;
  const auto& fk = path.f[static_cast<std::size_t>(k)];
  switch (which) {
    case CombVariant::comb1_1: {
      r.lhs = joint_log_sum(p);
      for (int s = 1; s <= k; ++s) {
        const int is = path.i[static_cast<std::size_t>(s)];
        r.rhs += detail::tail_from(p.d(is), path.f[static_cast<std::size_t>(s)][static_cast<std::size_t>(is)]);
      }
      break;
    }
    case CombVariant::comb1_2: {
      r.lhs = joint_log_sum(p);
      r.rhs = fk[1] * detail::tail_from(p.d0, fk[0]) + fk[0] * detail::tail_from(p.d1, fk[1]);
      break;
    }
    case CombVariant::comb2_1: {
      require(k >= cut.k0, ErrorKind::precondition, "K must be at least k0");
      r.lhs = detail::outside_cut_sum(p, cut);
      for (int s = cut.k0; s <= k; ++s) {
        const int is = path.i[static_cast<std::size_t>(s)];
        const int from = path.f[static_cast<std::size_t>(s)][static_cast<std::size_t>(is)] - cut.h[static_cast<std::size_t>(s)];
        r.rhs += detail::tail_from(p.d(is), from);
      }
      break;
    }
    case CombVariant::comb2_2: {
      require(k >= cut.k0, ErrorKind::precondition, "k must be at least k0");
      r.lhs = detail::outside_cut_sum(p, cut);
      r.rhs = (fk[1] - cut.nu[1]) * detail::tail_from(p.d0, fk[0]) +
              (fk[0] - cut.nu[0]) * detail::tail_from(p.d1, fk[1]);
      break;
    }
    case CombVariant::comb2_3: {
      require(k >= cut.k0, ErrorKind::precondition, "k must be at least k0");
      const int cells = (fk[0] - cut.nu[0]) * (fk[1] - cut.nu[1]);
      r.lhs = cells * std::log(p.min_distance()) + detail::outside_cut_sum(p, cut);
      r.rhs = (fk[1] - cut.nu[1]) * detail::tail_from(p.d0, cut.nu[0]) +
              (fk[0] - cut.nu[0]) * detail::tail_from(p.d1, cut.nu[1]);
      break;
    }
  }
  r.pass = r.lhs <= r.rhs + kCombSlack;
  return r;
}

}  // namespace algdist
