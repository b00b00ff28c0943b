#pragma once
// Suites whose inequalities are exact: elementary symmetric bounds, the join
// inequality, the subspace constructions and the path combinatorics.

#include "algdist/combinatorics.hpp"
#include "algdist/grassmann.hpp"
#include "algdist/harness/report.hpp"
#include "algdist/hilf.hpp"

#include <string>
#include <vector>

namespace algdist::suites {

inline std::string cell_name(std::initializer_list<std::pair<const char*, int>> kv, const char* tag = nullptr) {
  std::string s;
  for (const auto& [k, v] : kv) s += (s.empty() ? "" : ",") + std::string(k) + "=" + std::to_string(v);
  if (tag) s += std::string(",") + tag;
  return s;
}

inline ojson cell_params(std::initializer_list<std::pair<const char*, int>> kv) {
  ojson j = ojson::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// Roots on the real line.

inline constexpr int kHilfExactMaxDegree = 20;
inline constexpr int kHilfStep2MaxDegree = 30;
inline constexpr int kHilfStep2Trials = 200;

inline void hilf_defaults(ExperimentConfig& c) {
  if (c.degrees.empty())
    for (int n = 3; n <= 60; ++n) c.degrees.push_back(n);
  if (c.trials == 0) c.trials = 10000;
  if (c.tolerance == 0) c.tolerance = 1e-12;
}

inline Report run_lemma_hilf(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  long long exact_checked = 0, exact_failures = 0, step2_checked = 0, step2_failures = 0;
  for (int n : cfg.degrees) {
    require(n >= 1, ErrorKind::config, "degrees must be positive");
    const int s_low = (n - 1) / 3;  // largest s with 3s < n
    struct Trial {
      std::uint64_t digest = 0;
      std::vector<HilfBounds> bounds;
      std::vector<int> exact_ok;  // per s, -1 when not checked
      std::vector<int> step2_ok;
    };
    const std::uint64_t stream = cell_stream(cfg, cell_name({{"n", n}}));
    auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
      Rng rng(stream, static_cast<std::uint64_t>(i));
      const DyadicSample x = draw_dyadic_sample(n, rng);
      Trial tr;
      tr.digest = fnv1a64(x.x);
      tr.bounds = hilf_bounds_float(x.x, n, cfg.tolerance);
      tr.exact_ok.assign(static_cast<std::size_t>(n + 1), -1);
      tr.step2_ok.assign(static_cast<std::size_t>(n + 1), -1);
      if (n <= kHilfExactMaxDegree) {
        const auto e = hilf_bounds_exact(x.m, n);
        for (int s = 0; s <= n; ++s)
          tr.exact_ok[static_cast<std::size_t>(s)] = e[static_cast<std::size_t>(s)].lower_ok && e[static_cast<std::size_t>(s)].upper_ok;
      }
      if (n <= kHilfStep2MaxDegree && i < kHilfStep2Trials)
        for (const auto& p : hilf_step2_checkpoints(x.x, s_low)) tr.step2_ok[static_cast<std::size_t>(p.s)] = p.ok;
      return tr;
    });

    for (int s = 0; s <= s_low; ++s) {
      CellRecord rec;
      rec.cell = cell_name({{"n", n}, {"s", s}});
      rec.params = cell_params({{"n", n}, {"s", s}});
      long long float_fail = 0, ex_n = 0, ex_f = 0, st_n = 0, st_f = 0;
      double tight = neg_inf;
      for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& tr = trials[i];
        const auto& b = tr.bounds[static_cast<std::size_t>(s)];
        const int ex = tr.exact_ok[static_cast<std::size_t>(s)], st = tr.step2_ok[static_cast<std::size_t>(s)];
        ex_n += ex >= 0;
        ex_f += ex == 0;
        st_n += st >= 0;
        st_f += st == 0;
        float_fail += !(b.lower_ok && b.upper_ok);
        tight = std::max(tight, b.upper_lhs - b.upper_rhs);
        TrialOutcome o;
        o.trial = static_cast<int>(i);
        o.digest = tr.digest;
        const double g_low = b.lower_lhs - b.lower_rhs, g_up = b.upper_lhs - b.upper_rhs;
        if (g_low >= g_up) {
          o.lhs = b.lower_lhs;
          o.rhs = b.lower_rhs;
        } else {
          o.lhs = b.upper_lhs;
          o.rhs = b.upper_rhs;
        }
        o.gap = std::max(g_low, g_up);
        o.pass = b.lower_ok && b.upper_ok && ex != 0 && st != 0;
        rec.add(o);
      }
      rec.extra["float_failures"] = float_fail;
      rec.extra["exact_checked"] = ex_n;
      rec.extra["exact_failures"] = ex_f;
      rec.extra["step2_checked"] = st_n;
      rec.extra["step2_failures"] = st_f;
      rec.extra["upper_log_tightness_max"] = tight;
      exact_checked += ex_n;
      exact_failures += ex_f;
      step2_checked += st_n;
      step2_failures += st_f;
      rep.records.push_back(std::move(rec));
    }

    // Upper bound for the remaining orders s in [s_low + 1, n].
    if (s_low < n) {
      CellRecord rec;
      rec.cell = cell_name({{"n", n}}, "upper,s>n/3");
      rec.params = cell_params({{"n", n}, {"s_from", s_low + 1}, {"s_to", n}});
      for (std::size_t i = 0; i < trials.size(); ++i) {
        TrialOutcome o;
        o.trial = static_cast<int>(i);
        o.digest = trials[i].digest;
        o.gap = neg_inf;
        o.pass = true;
        for (int s = s_low + 1; s <= n; ++s) {
          const auto& b = trials[i].bounds[static_cast<std::size_t>(s)];
          if (b.upper_lhs - b.upper_rhs > o.gap) {
            o.gap = b.upper_lhs - b.upper_rhs;
            o.lhs = b.upper_lhs;
            o.rhs = b.upper_rhs;
          }
          o.pass = o.pass && b.upper_ok && trials[i].exact_ok[static_cast<std::size_t>(s)] != 0;
        }
        rec.add(o);
      }
      rep.records.push_back(std::move(rec));
    }
  }
  rep.aggregate["exact_checked"] = exact_checked;
  rep.aggregate["exact_failures"] = exact_failures;
  rep.aggregate["step2_checked"] = step2_checked;
  rep.aggregate["step2_failures"] = step2_failures;
  rep.passed = rep.total_passes() == rep.total_trials();
  return rep;
}

// ---------------------------------------------------------------------------
// Join inequality: min(|x,theta|, |y,theta|) <= |x # y, (theta,theta)| <= max.

inline void jpabsch_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {1, 2, 3};
  if (c.trials == 0) c.trials = 33334;
  if (c.tolerance == 0) c.tolerance = 1e-10;
}

inline Report run_jpabsch(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  for (int t : cfg.t) {
    require(t >= 1, ErrorKind::config, "t must be positive");
    const std::string name = cell_name({{"t", t}});
    const std::uint64_t stream = cell_stream(cfg, name);
    struct Trial {
      TrialOutcome o;
      double closed_form = 0;
    };
    auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
      Rng rng(stream, static_cast<std::uint64_t>(i));
      const ProjPoint x = random_point(t, rng), y = random_point(t, rng), theta = random_point(t, rng);
      const double dx = fs_distance(x, theta), dy = fs_distance(y, theta);
      const double joint = point_subspace_distance(diagonal_point(theta), join_line(x, y));
      Trial tr;
      tr.o.trial = i;
      tr.o.digest = fnv1a64(std::vector<double>{dx, dy, joint});
      tr.o.lhs = std::min(dx, dy);
      tr.o.rhs = std::max(dx, dy);
      tr.o.gap = std::max(tr.o.lhs - joint, joint - tr.o.rhs);
      tr.o.pass = tr.o.gap <= cfg.tolerance;
      tr.closed_form = std::abs(joint * joint - 0.5 * (dx * dx + dy * dy));
      return tr;
    });
    CellRecord rec;
    rec.cell = name;
    rec.params = cell_params({{"t", t}});
    double cf = 0;
    for (const auto& tr : trials) {
      rec.add(tr.o);
      cf = std::max(cf, tr.closed_form);
    }
    rec.extra["closed_form_max_error"] = cf;
    rep.records.push_back(std::move(rec));
  }
  rep.passed = rep.total_passes() == rep.total_trials();
  return rep;
}

// ---------------------------------------------------------------------------
// Subspace constructions: W' = pr_F^{-1}(W) cap F' with |W, W'| <= |F, F'|,
// and the direct sum W-tilde + (W-perp in F) no farther from F than W-tilde
// is from W.

inline void trfunk0_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {2, 3, 4, 5};
  if (c.trials == 0) c.trials = 10000;
  if (c.tolerance == 0) c.tolerance = 1e-10;
}

inline Report run_trfunk0(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  for (int t : cfg.t) require(t >= 2, ErrorKind::config, "t must be at least 2");
  auto pick_t = [&](Rng& rng) { return cfg.t[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(cfg.t.size()) - 1))]; };

  {
    const std::uint64_t stream = cell_stream(cfg, "contained_subspace");
    auto trials = parallel_trials<TrialOutcome>(cfg.trials, jobs, [&](int i) {
      Rng rng(stream, static_cast<std::uint64_t>(i));
      const int t = pick_t(rng);
      const int fd = rng.uniform_int(2, t), wd = rng.uniform_int(1, fd - 1);
      const GrassPoint f = random_subspace(t, fd, rng);
      const GrassPoint w = GrassPoint::span(CMatrix(f.frame() * random_subspace(fd - 1, wd, rng).frame()));
      const GrassPoint f2 = random_subspace(t, fd, rng);
      const GrassPoint w2 = contained_subspace(w, f, f2);
      TrialOutcome o;
      o.trial = i;
      o.lhs = grass_distance(w, w2);
      o.rhs = grass_distance(f, f2);
      o.digest = fnv1a64(std::vector<double>{static_cast<double>(t), static_cast<double>(fd), static_cast<double>(wd), o.lhs, o.rhs});
      const double inside = (w2.frame() - f2.projector() * w2.frame()).cwiseAbs().maxCoeff();
      o.gap = std::max(o.lhs - o.rhs, inside);
      o.pass = w2.dim() == wd && o.gap <= cfg.tolerance;
      return o;
    });
    CellRecord rec;
    rec.cell = "contained_subspace";
    for (const auto& o : trials) rec.add(o);
    rep.records.push_back(std::move(rec));
  }
  {
    const std::uint64_t stream = cell_stream(cfg, "direct_sum_image");
    struct Trial {
      TrialOutcome o;
      int redraws = 0;
    };
    auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
      Rng rng(stream, static_cast<std::uint64_t>(i));
      Trial tr;
      for (;;) {
        const int t = pick_t(rng);
        const int fd = rng.uniform_int(2, t + 1), wd = rng.uniform_int(1, fd - 1);
        const GrassPoint f = random_subspace(t, fd, rng);
        const GrassPoint w = GrassPoint::span(CMatrix(f.frame().leftCols(wd)));
        BruhatChart chart(w);
        const CVector u = rng.gaussian_vector(chart.parameter_count()) * std::pow(10.0, rng.uniform(-3, 0));
        const GrassPoint w_tilde = chart.point(u);
        GrassPoint image;
        try {
          image = direct_sum_image(w_tilde, w, f);
        } catch (const Error&) {
          ++tr.redraws;  // W-tilde meets the complement of W in F
          continue;
        }
        tr.o.trial = i;
        tr.o.lhs = grass_distance(f, image);
        tr.o.rhs = grass_distance(w, w_tilde);
        tr.o.digest = fnv1a64(std::vector<double>{static_cast<double>(t), static_cast<double>(fd), static_cast<double>(wd), tr.o.lhs, tr.o.rhs});
        tr.o.gap = tr.o.lhs - tr.o.rhs;
        tr.o.pass = tr.o.gap <= cfg.tolerance;
        return tr;
      }
    });
    CellRecord rec;
    rec.cell = "direct_sum_image";
    for (const auto& tr : trials) {
      rec.add(tr.o);
      rec.redraws += tr.redraws;
    }
    rep.records.push_back(std::move(rec));
  }
  rep.passed = rep.total_passes() == rep.total_trials();
  return rep;
}

// ---------------------------------------------------------------------------
// Path combinatorics.

inline void comb_defaults(ExperimentConfig& c) {
  if (c.degrees.empty())
    for (int n = 1; n <= 12; ++n) c.degrees.push_back(n);
  if (c.t.empty()) c.t = {1, 2, 3};
  if (c.trials == 0) c.trials = 1000;
  if (c.tolerance == 0) c.tolerance = 1e-10;
}

inline Report run_comb(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  constexpr CombVariant variants[] = {CombVariant::comb1_1, CombVariant::comb1_2, CombVariant::comb2_1,
                                      CombVariant::comb2_2, CombVariant::comb2_3};
  long long legacy_total = 0, legacy_fail = 0;
  for (int n0 : cfg.degrees)
    for (int n1 : cfg.degrees) {
      const std::string name = cell_name({{"n0", n0}, {"n1", n1}});
      const std::uint64_t stream = cell_stream(cfg, name);
      struct Trial {
        TrialOutcome o;
        int redraws = 0;
        bool legacy_fails = false;
        std::array<int, 5> variant_failures{};
        std::array<double, 5> variant_gap{};
      };
      auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
        Rng rng(stream, static_cast<std::uint64_t>(i));
        Trial tr;
        tr.variant_gap.fill(neg_inf);
        for (;;) {
          const int t = cfg.t[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(cfg.t.size()) - 1))];
          ZeroCycle z0(t), z1(t);
          for (int k = 0; k < n0; ++k) z0.add(random_point(t, rng));
          for (int k = 0; k < n1; ++k) z1.add(random_point(t, rng));
          const ProjPoint theta = random_point(t, rng);
          const int S = rng.uniform_int(0, n0 * n1 - 1);
          DistanceProfile p;
          try {
            p = build_profile(z0, z1, theta);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::non_generic) throw;
            ++tr.redraws;
            continue;
          }
          const Path path = build_path(p);
          const CutSet cut = build_cutset(p, path, S);
          const double full = joint_log_sum(p);
          const double reordered = reordered_joint_sum(p, path);
          tr.legacy_fails = std::abs(reordered_joint_sum(p, path, true) - full) > cfg.tolerance;
          tr.o.trial = i;
          std::vector<double> inputs(p.d0);
          inputs.insert(inputs.end(), p.d1.begin(), p.d1.end());
          inputs.push_back(S);
          tr.o.digest = fnv1a64(inputs);
          tr.o.lhs = reordered;
          tr.o.rhs = full;
          tr.o.gap = std::abs(reordered - full) - cfg.tolerance;
          tr.o.pass = tr.o.gap <= 0;
          for (std::size_t v = 0; v < 5; ++v) {
            const bool cut_based = v >= 2;
            for (int k = cut_based ? cut.k0 : 1; k <= path.steps(); ++k) {
              const CombResult r = verify_comb(p, path, cut, variants[v], k);
              tr.variant_gap[v] = std::max(tr.variant_gap[v], r.lhs - r.rhs);
              if (!r.pass) {
                ++tr.variant_failures[v];
                tr.o.pass = false;
                if (r.lhs - r.rhs > tr.o.gap) {
                  tr.o.gap = r.lhs - r.rhs;
                  tr.o.lhs = r.lhs;
                  tr.o.rhs = r.rhs;
                }
              }
            }
          }
          return tr;
        }
      });
      CellRecord rec;
      rec.cell = name;
      rec.params = cell_params({{"n0", n0}, {"n1", n1}});
      long long lf = 0;
      std::array<long long, 5> vf{};
      std::array<double, 5> vg;
      vg.fill(neg_inf);
      for (const auto& tr : trials) {
        rec.add(tr.o);
        rec.redraws += tr.redraws;
        lf += tr.legacy_fails;
        for (std::size_t v = 0; v < 5; ++v) {
          vf[v] += tr.variant_failures[v];
          vg[v] = std::max(vg[v], tr.variant_gap[v]);
        }
      }
      rec.extra["legacy_reading_identity_failures"] = lf;
      for (std::size_t v = 0; v < 5; ++v) {
        rec.extra[std::string(to_string(variants[v])) + "_failures"] = vf[v];
        rec.extra[std::string(to_string(variants[v])) + "_max_lhs_minus_rhs"] = vg[v];
      }
      legacy_total += static_cast<long long>(trials.size());
      legacy_fail += lf;
      rep.records.push_back(std::move(rec));
    }
  rep.aggregate["legacy_reading_identity_failures"] = legacy_fail;
  rep.aggregate["legacy_reading_instances"] = legacy_total;
  rep.passed = rep.total_passes() == rep.total_trials();
  return rep;
}

}  // namespace algdist::suites
