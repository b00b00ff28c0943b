#pragma once
// Jet suites with explicit constants: products of point distances, products of
// subspace distances, and the derivated distance of zero and linear cycles.

#include "algdist/harness/suites_exact.hpp"
#include "algdist/oracles.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace algdist::suites {

// max over orders 0..s of the per-order sups.
inline std::vector<double> prefix_max(const std::vector<double>& per_order) {
  std::vector<double> out(per_order.size());
  double m = neg_inf;
  for (std::size_t s = 0; s < per_order.size(); ++s) out[s] = m = std::max(m, per_order[s]);
  return out;
}

inline bool is_jet_failure(const Error& e) {
  return e.kind() == ErrorKind::jet_singularity || e.kind() == ErrorKind::jet_domain || e.kind() == ErrorKind::point_on_cycle;
}

// Largest order whose full jet in 2t variables fits the budget.
inline int max_order_within(int t, std::uint64_t budget) {
  int S = 0;
  while (S < 200 && jet_size(2 * t, S + 1) <= budget) ++S;
  return S;
}

// log((2s+1)(3n^2)^{s+1} n^n)
inline double hilfzwei_lower_log_constant(int n, int s) {
  return std::log(2.0 * s + 1) + (s + 1) * std::log(3.0 * n * n) + n * std::log(static_cast<double>(n));
}

// Point at sine distance d from theta whose orthogonal complement is a
// Haar-like codimension p subspace: W-perp = span{d theta + sqrt(1-d^2) g, h_j}
// with g, h_j orthonormal and orthogonal to theta.
inline ProjSubspace random_subspace_at_distance(const ProjPoint& theta, int codim, double d, Rng& rng) {
  const int n = theta.ambient() + 1;
  require(codim >= 1 && codim < n, ErrorKind::precondition, "bad codimension");
  CMatrix g = rng.gaussian_matrix(n, codim);
  g -= theta.coords() * (theta.coords().adjoint() * g);
  const GrassPoint basis = GrassPoint::span(g);
  CMatrix perp = basis.frame();
  perp.col(0) = d * theta.coords() + std::sqrt(std::max(0.0, 1 - d * d)) * perp.col(0);
  const CMatrix comp = GrassPoint::from_orthonormal(perp).complement();
  return ProjSubspace::from_orthonormal(comp);
}

// ---------------------------------------------------------------------------
// Products of point distances: jets of F = prod |chart(w), z_i| against
// n^s prod_{i>s} |theta, z_i| from above and the hilf-type constant from below.

inline void hilfzwei_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {1, 2, 3};
  if (c.degrees.empty())
    for (int n = 3; n <= 30; ++n) c.degrees.push_back(n);
  if (c.trials == 0) c.trials = 200;
  if (c.tolerance == 0) c.tolerance = 1e-6;
  if (c.jet_budget == 0) c.jet_budget = 20000;
}

inline constexpr int kOracleTrials = 3;
inline constexpr int kSeriesOrder = 12;
inline constexpr double kFdTolerance = 1e-4;
inline constexpr double kSeriesTolerance = 1e-8;

struct OracleErrors {
  double fd = 0;
  double series = 0;
};

// Jet partials against finite differences (|I| <= 3) and, on P^1, against the
// series of the explicit product.
inline OracleErrors oracle_errors(const ProjPoint& theta, const ZeroCycle& z) {
  OracleErrors out;
  const int t = theta.ambient();
  const AffineChart chart(theta);
  const ScaledJet j = exp_distance_jet(chart, z, 3);
  const auto& L = j.jet.layout();
  std::vector<double> jv(L.size());
  double biggest = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    jv[i] = std::exp(j.log_scale + L.log_factorial(i)) * j.jet[i];
    biggest = std::max(biggest, std::abs(jv[i]));
  }
  auto g = [&](const std::vector<long double>& x) { return exp_distance_direct(chart, z, x); };
  // Truncation error scales like (h / nearest distance)^4, roundoff like h^-3.
  const long double h = std::min(0.002L, 0.005L * static_cast<long double>(sorted_distances(theta, z).front()));
  for (std::size_t i = 0; i < L.size(); ++i) {
    const std::vector<int> m(L.exponents(i).begin(), L.exponents(i).end());
    out.fd = std::max(out.fd, relative_error(jv[i], fd_partial(g, m, h), 1e-8 * biggest));
  }
  if (t == 1) {
    const ScaledJet js = exp_distance_jet(chart, z, kSeriesOrder);
    const auto p = series_partials_p1(chart, z, kSeriesOrder);
    double big = 0;
    for (int a = 0; a <= kSeriesOrder; ++a)
      for (int b = 0; a + b <= kSeriesOrder; ++b) big = std::max(big, std::abs(p[a][b]));
    for (int a = 0; a <= kSeriesOrder; ++a)
      for (int b = 0; a + b <= kSeriesOrder; ++b) {
        const double v = extract_partial(js.jet, std::vector<int>{a, b});
        out.series = std::max(out.series, relative_error(v, p[a][b], 1e-4 * big));
      }
  }
  return out;
}

inline Report run_hilfzwei(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  const double slack = std::log1p(cfg.tolerance);
  long long full_jets = 0, subset_jets = 0;
  for (int t : cfg.t)
    for (int n : cfg.degrees) {
      require(t >= 1 && n >= 1, ErrorKind::config, "t and degrees must be positive");
      const int smax = n / 3;
      const int full_order = std::min(3 * smax, max_order_within(t, cfg.jet_budget));
      if (full_order < smax) throw Error(ErrorKind::budget, "jet budget below the upper-bound order");
      const bool need_subset = 3 * smax > full_order;
      const std::string base = cell_name({{"t", t}, {"n", n}});
      const std::uint64_t stream = cell_stream(cfg, base);
      struct Trial {
        std::uint64_t digest = 0;
        int redraws = 0;
        std::vector<TrialOutcome> per_s;
        std::vector<double> tightness;
      };
      auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
        Rng rng(stream, static_cast<std::uint64_t>(i));
        Trial tr;
        for (;;) {
          const ProjPoint theta = random_point(t, rng);
          ZeroCycle z(t);
          std::vector<double> inputs;
          for (int k = 0; k < n; ++k) {
            const double d = rng.uniform(0.05, 0.95);
            z.add(random_point_at_distance(theta, d, rng));
            inputs.push_back(d);
          }
          std::vector<double> full, subset;
          try {
            const AffineChart chart(theta);
            const ScaledJet jf = exp_distance_jet(chart, z, full_order);
            full = prefix_max(per_order_sup_log(jf.jet, full_order, jf.log_scale));
            if (need_subset) {
              const ScaledJet js = exp_distance_jet(chart, z, 3 * smax, 1, 1);
              subset = prefix_max(per_order_sup_log(js.jet, 3 * smax, js.log_scale));
            }
          } catch (const Error& e) {
            if (!is_jet_failure(e)) throw;
            ++tr.redraws;
            continue;
          }
          const auto d = sorted_distances(theta, z);
          tr.digest = fnv1a64(inputs);
          for (int s = 0; s <= smax; ++s) {
            const double tail = tail_log_sum(d, s);
            TrialOutcome up, low;
            up.lhs = full[static_cast<std::size_t>(s)];
            up.rhs = s * std::log(static_cast<double>(n)) + tail;
            up.gap = up.lhs - up.rhs - slack;
            low.lhs = 2 * tail - hilfzwei_lower_log_constant(n, s);
            low.rhs = 3 * s <= full_order ? full[static_cast<std::size_t>(3 * s)] : subset[static_cast<std::size_t>(3 * s)];
            low.gap = low.lhs - low.rhs - slack;
            TrialOutcome o = up.gap >= low.gap ? up : low;
            o.trial = i;
            o.digest = tr.digest;
            o.pass = up.gap <= 0 && low.gap <= 0;
            tr.per_s.push_back(o);
            tr.tightness.push_back(up.lhs - up.rhs);
          }
          return tr;
        }
      });
      for (int s = 0; s <= smax; ++s) {
        CellRecord rec;
        rec.cell = cell_name({{"t", t}, {"n", n}, {"s", s}});
        rec.params = cell_params({{"t", t}, {"n", n}, {"s", s}});
        double tight = neg_inf;
        for (const auto& tr : trials) {
          rec.add(tr.per_s[static_cast<std::size_t>(s)]);
          if (s == 0) rec.redraws += tr.redraws;
          tight = std::max(tight, tr.tightness[static_cast<std::size_t>(s)]);
        }
        rec.extra["lower_bound_jet"] = 3 * s <= full_order ? "full" : "subset";
        rec.extra["upper_log_tightness_max"] = tight;
        if (3 * s <= full_order)
          full_jets += rec.trials;
        else
          subset_jets += rec.trials;
        rep.records.push_back(std::move(rec));
      }

      // Oracle cross-checks on a few draws.
      const std::uint64_t ostream = cell_stream(cfg, base + ",oracle");
      auto oracle = parallel_trials<TrialOutcome>(kOracleTrials, jobs, [&](int i) {
        Rng rng(ostream, static_cast<std::uint64_t>(i));
        const ProjPoint theta = random_point(t, rng);
        ZeroCycle z(t);
        std::vector<double> inputs;
        for (int k = 0; k < n; ++k) {
          const double d = rng.uniform(0.05, 0.95);
          z.add(random_point_at_distance(theta, d, rng));
          inputs.push_back(d);
        }
        const OracleErrors e = oracle_errors(theta, z);
        TrialOutcome o;
        o.trial = i;
        o.digest = fnv1a64(inputs);
        o.lhs = e.fd;
        o.rhs = e.series;
        o.gap = std::max(e.fd - kFdTolerance, t == 1 ? e.series - kSeriesTolerance : neg_inf);
        o.pass = o.gap <= 0;
        return o;
      });
      CellRecord rec;
      rec.cell = base + ",oracle";
      rec.params = cell_params({{"t", t}, {"n", n}});
      double fd = 0, series = 0;
      for (const auto& o : oracle) {
        rec.add(o);
        fd = std::max(fd, o.lhs);
        series = std::max(series, o.rhs);
      }
      rec.extra["fd_max_relative_error"] = fd;
      rec.extra["fd_order"] = 3;
      if (t == 1) {
        rec.extra["series_max_relative_error"] = series;
        rec.extra["series_order"] = kSeriesOrder;
      }
      rep.records.push_back(std::move(rec));
    }
  rep.aggregate["lower_bound_full_jet_cells_trials"] = full_jets;
  rep.aggregate["lower_bound_subset_jet_cells_trials"] = subset_jets;
  rep.notes.push_back("lower bounds beyond the jet budget use the partials along the first chart coordinate only");
  rep.passed = rep.total_passes() == rep.total_trials();
  return rep;
}

// ---------------------------------------------------------------------------
// Products of subspace distances: sup_{|I|<=s} |d^I F(0)| <= n^s prod_{i>s}.

inline void hilfdrei_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {2, 3};
  if (c.degrees.empty())
    for (int n = 3; n <= 30; ++n) c.degrees.push_back(n);
  if (c.trials == 0) c.trials = 200;
  if (c.tolerance == 0) c.tolerance = 1e-6;
  if (c.jet_budget == 0) c.jet_budget = 20000;
}

inline Report run_hilfdrei(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  const double slack = std::log1p(cfg.tolerance);
  long long all_i_violations = 0;
  for (int t : cfg.t)
    for (int p = 1; p < t; ++p)
      for (int n : cfg.degrees) {
        require(n >= 1, ErrorKind::config, "degrees must be positive");
        const int smax = n / 3;
        detail::check_budget(t, smax, cfg.jet_budget);
        const std::string base = cell_name({{"t", t}, {"codim", p}, {"n", n}});
        const std::uint64_t stream = cell_stream(cfg, base);
        struct Trial {
          std::vector<TrialOutcome> per_s;
          std::vector<int> all_i_fail;
          int redraws = 0;
        };
        auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
          Rng rng(stream, static_cast<std::uint64_t>(i));
          Trial tr;
          for (;;) {
            const ProjPoint theta = random_point(t, rng);
            LinearCycle z(t, p);
            std::vector<double> inputs;
            for (int k = 0; k < n; ++k) {
              const double d = rng.uniform(0.05, 0.95);
              z.add(random_subspace_at_distance(theta, p, d, rng));
              inputs.push_back(d);
            }
            std::vector<double> sup;
            try {
              const ScaledJet j = exp_distance_jet(AffineChart(theta), z, smax);
              sup = prefix_max(per_order_sup_log(j.jet, smax, j.log_scale));
            } catch (const Error& e) {
              if (!is_jet_failure(e)) throw;
              ++tr.redraws;
              continue;
            }
            const auto d = sorted_distances(theta, z);
            const std::uint64_t digest = fnv1a64(inputs);
            for (int s = 0; s <= smax; ++s) {
              TrialOutcome o;
              o.trial = i;
              o.digest = digest;
              o.lhs = sup[static_cast<std::size_t>(s)];
              o.rhs = s * std::log(static_cast<double>(n)) + tail_log_sum(d, s);
              o.gap = o.lhs - o.rhs - slack;
              o.pass = o.gap <= 0;
              tr.per_s.push_back(o);
              tr.all_i_fail.push_back(o.lhs > s * std::log(static_cast<double>(n)) + tail_log_sum(d, 0) + slack);
            }
            return tr;
          }
        });
        for (int s = 0; s <= smax; ++s) {
          CellRecord rec;
          rec.cell = cell_name({{"t", t}, {"codim", p}, {"n", n}, {"s", s}});
          rec.params = cell_params({{"t", t}, {"codim", p}, {"n", n}, {"s", s}});
          long long all_i = 0;
          for (const auto& tr : trials) {
            rec.add(tr.per_s[static_cast<std::size_t>(s)]);
            if (s == 0) rec.redraws += tr.redraws;
            all_i += tr.all_i_fail[static_cast<std::size_t>(s)];
          }
          rec.extra["product_over_all_i_violations"] = all_i;
          all_i_violations += all_i;
          rep.records.push_back(std::move(rec));
        }
      }
  rep.aggregate["product_over_all_i_violations"] = all_i_violations;
  rep.notes.push_back("asserted bound uses the product over i > s; the product over all i is reported as a count only");
  rep.passed = rep.total_passes() == rep.total_trials();
  return rep;
}

// ---------------------------------------------------------------------------
// Derivated distance of Haar-random zero-cycles and hyperplane cycles.

inline void punkte_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {1, 2};
  if (c.degrees.empty())
    for (int n = 3; n <= 30; ++n) c.degrees.push_back(n);
  if (c.trials == 0) c.trials = 100;
  if (c.tolerance == 0) c.tolerance = 1e-8;
  if (c.jet_budget == 0) c.jet_budget = kDefaultJetBudget;
}

inline constexpr double kPunkteMinDistance = 1e-4;

inline Report run_punkte(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  long long subset_lower = 0;
  std::pair<long long, long long> haar_tally{0, 0}, window_tally{0, 0};
  for (int t : cfg.t)
    for (int n : cfg.degrees) {
      require(t >= 1 && n >= 1, ErrorKind::config, "t and degrees must be positive");
      const int smax = n / 3;
      const int full_order = std::min(3 * smax, max_order_within(t, cfg.jet_budget));
      if (full_order < smax) throw Error(ErrorKind::budget, "jet budget below the upper-bound order");
      const bool need_subset = 3 * smax > full_order;
      if (need_subset) subset_lower += 1;
      for (const char* kind : {"points", "hyperplanes"})
        for (const char* domain : {"haar", "window"}) {
          const bool points = std::string(kind) == "points";
          const bool window = std::string(domain) == "window";
          // Haar cells carry the verdict; window cells keep every distance in
          // (0.05, 0.95) and show the bound holding once clustering is excluded.
          const std::string tag = window ? std::string(kind) + ",window" : std::string(kind);
          const std::string base = cell_name({{"t", t}, {"n", n}}, tag.c_str());
          const std::uint64_t stream = cell_stream(cfg, base);
          struct Trial {
            std::vector<TrialOutcome> per_s;
            int redraws = 0;
          };
          auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
            Rng rng(stream, static_cast<std::uint64_t>(i));
            Trial tr;
            for (;;) {
              const ProjPoint theta = random_point(t, rng);
              ZeroCycle zp(t);
              LinearCycle zl(t, 1);
              for (int k = 0; k < n; ++k) {
                if (window) {
                  const double dk = rng.uniform(0.05, 0.95);
                  if (points)
                    zp.add(random_point_at_distance(theta, dk, rng));
                  else
                    zl.add(random_subspace_at_distance(theta, 1, dk, rng));
                } else if (points) {
                  zp.add(random_point(t, rng));
                } else {
                  zl.add(ProductDivisor::hyperplane(rng.gaussian_vector(t + 1)));
                }
              }
              const auto d = points ? sorted_distances(theta, zp) : sorted_distances(theta, zl);
              if (d.front() < kPunkteMinDistance) {
                ++tr.redraws;
                continue;
              }
              const AffineChart chart(theta);
              const int order = points ? full_order : smax;
              ScaledJet j = points ? exp_distance_jet(chart, zp, order) : exp_distance_jet(chart, zl, order);
              const auto sup = prefix_max(per_order_sup_log(j.jet, order, j.log_scale));
              std::vector<double> sub;
              if (points && need_subset) {
                const ScaledJet js = exp_distance_jet(chart, zp, 3 * smax, 1, 1);
                sub = prefix_max(per_order_sup_log(js.jet, 3 * smax, js.log_scale));
              }
              const std::uint64_t digest = fnv1a64(d);
              for (int s = 0; s <= smax; ++s) {
                const double tail = tail_log_sum(d, s);
                TrialOutcome up;
                up.lhs = sup[static_cast<std::size_t>(s)];
                up.rhs = tail + s * std::log(static_cast<double>(n));
                up.gap = up.lhs - up.rhs - cfg.tolerance;
                TrialOutcome o = up;
                if (points) {
                  TrialOutcome low;
                  low.lhs = 2 * tail;
                  low.rhs = (3 * s <= full_order ? sup[static_cast<std::size_t>(3 * s)] : sub[static_cast<std::size_t>(3 * s)]) +
                            hilfzwei_lower_log_constant(n, s);
                  low.gap = low.lhs - low.rhs - cfg.tolerance;
                  if (low.gap > o.gap) o = low;
                  o.pass = up.gap <= 0 && low.gap <= 0;
                } else {
                  o.pass = up.gap <= 0;
                }
                o.trial = i;
                o.digest = digest;
                tr.per_s.push_back(o);
              }
              return tr;
            }
          });
          for (int s = 0; s <= smax; ++s) {
            CellRecord rec;
            rec.cell = cell_name({{"t", t}, {"n", n}, {"S", s}}, tag.c_str());
            rec.params = cell_params({{"t", t}, {"n", n}, {"S", s}});
            rec.params["cycle"] = kind;
            rec.params["domain"] = domain;
            for (const auto& tr : trials) {
              rec.add(tr.per_s[static_cast<std::size_t>(s)]);
              if (s == 0) rec.redraws += tr.redraws;
            }
            if (points) rec.extra["lower_bound_jet"] = 3 * s <= full_order ? "full" : "subset";
            auto& tally = window ? window_tally : haar_tally;
            tally.first += rec.passes;
            tally.second += rec.trials;
            rep.records.push_back(std::move(rec));
          }
        }
    }
  rep.aggregate["degrees_with_subset_lower_jets"] = subset_lower;
  rep.aggregate["haar_passes"] = haar_tally.first;
  rep.aggregate["haar_trials"] = haar_tally.second;
  rep.aggregate["window_passes"] = window_tally.first;
  rep.aggregate["window_trials"] = window_tally.second;
  rep.passed = haar_tally.first == haar_tally.second;
  return rep;
}

}  // namespace algdist::suites
