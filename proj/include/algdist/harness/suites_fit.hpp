#pragma once
// Suites whose statements carry an O(.) term: the implied constant is fitted
// over a degree grid and checked for stability instead of pointwise.

#include "algdist/comparisons.hpp"
#include "algdist/harness/fit.hpp"
#include "algdist/harness/suites_jet.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace algdist::suites {

inline constexpr int kMaxRedraws = 1000;

inline bool is_redrawable(const Error& e) {
  return is_jet_failure(e) || e.kind() == ErrorKind::non_generic || e.kind() == ErrorKind::improper_intersection ||
         e.kind() == ErrorKind::line_in_divisor;
}

// One fitted quantity of a draw: the normalized violation and its normalizer.
struct FitSample {
  double gap = 0;
  double normalizer = 1;
};

struct FitDraw {
  TrialOutcome outcome;
  std::vector<FitSample> samples;  // one per fitted quantity
  int redraws = 0;
};

// Repeats `draw` until it does not throw a redrawable error.
template <class F>
FitDraw with_redraws(Rng& rng, F&& draw) {
  int redraws = 0;
  for (;;) {
    try {
      FitDraw d = draw(rng);
      d.redraws = redraws;
      return d;
    } catch (const Error& e) {
      if (!is_redrawable(e) || ++redraws > kMaxRedraws) throw;
    }
  }
}

// Accumulates fit records per (group, quantity).
class FitCollector {
 public:
  explicit FitCollector(std::vector<std::string> quantities) : quantities_(std::move(quantities)) {}

  void add(const std::string& group, int degree, const FitDraw& d) {
    for (std::size_t q = 0; q < quantities_.size(); ++q)
      records_[{group, quantities_[q]}].push_back({degree, d.samples[q].normalizer, d.samples[q].gap});
  }

  // Fits every (group, quantity); `ok` decides per fit. Returns the conjunction.
  bool finish(Report& rep, const std::function<bool(const std::string&, const FitResult&, ojson&)>& ok) const {
    bool all = true;
    ojson fits = ojson::object();
    for (const auto& [key, recs] : records_) {
      ojson j;
      try {
        const FitResult f = fit_implied_constant(recs);
        j = to_json(f);
        const bool good = ok(key.second, f, j);
        j["stable"] = good;
        all = all && good;
      } catch (const Error& e) {
        j["error"] = e.what();
        all = false;
      }
      fits[key.first + "/" + key.second] = j;
    }
    rep.aggregate["fits"] = fits;
    return all;
  }

 private:
  std::vector<std::string> quantities_;
  std::map<std::pair<std::string, std::string>, std::vector<FitRecord>> records_;
};

inline void add_draws(CellRecord& rec, const std::vector<FitDraw>& draws) {
  for (const auto& d : draws) {
    rec.add(d.outcome);
    rec.redraws += d.redraws;
  }
}

// Slope CI containing 0 and per-degree constants within a factor 3.
inline bool stable_constant(const FitResult& f, ojson& j) {
  j["spread_ratio"] = spread_ratio(f);
  return slope_ci_contains_zero(f) && spread_ratio(f) < 3;
}

inline void fit_grid_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {1, 2};
  if (c.degrees.empty()) c.degrees = {6, 12, 24, 40};
  if (c.orders.empty()) c.orders = {0, 1, 2, 3};
  if (c.trials == 0) c.trials = 100;
  if (c.jet_budget == 0) c.jet_budget = kDefaultJetBudget;
}

inline std::string group_name(int t) { return "t=" + std::to_string(t); }

// ---------------------------------------------------------------------------
// D^S of a product divisor against the coefficient sup of its local polynomial.

inline Report run_hypeb(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  FitCollector fits({"c_min"});
  for (int t : cfg.t)
    for (int deg : cfg.degrees)
      for (int S : cfg.orders) {
        const std::string name = cell_name({{"t", t}, {"deg", deg}, {"S", S}});
        const std::uint64_t stream = cell_stream(cfg, name);
        auto draws = parallel_trials<FitDraw>(cfg.trials, jobs, [&](int i) {
          Rng rng(stream, static_cast<std::uint64_t>(i));
          return with_redraws(rng, [&](Rng& r) {
            const ProductDivisor z = random_product_divisor(t, deg, r);
            const ProjPoint theta = random_point(t, r);
            const HypebComparison h = hypeb_compare(z, theta, S, cfg.jet_budget);
            FitDraw d;
            d.outcome = {i, fnv1a64(std::vector<double>{h.lhs, h.rhs_sup}), h.lhs, h.rhs_sup, h.c_min,
                         std::isfinite(h.c_min)};
            d.samples = {{h.c_min, h.normalizer}};
            return d;
          });
        });
        CellRecord rec;
        rec.cell = name;
        rec.params = cell_params({{"t", t}, {"deg", deg}, {"S", S}});
        add_draws(rec, draws);
        for (const auto& d : draws) fits.add(group_name(t), deg, d);
        rep.records.push_back(std::move(rec));
      }
  const bool stable = fits.finish(rep, [](const std::string&, const FitResult& f, ojson& j) { return stable_constant(f, j); });
  rep.passed = stable && rep.total_passes() == rep.total_trials();
  return rep;
}

// ---------------------------------------------------------------------------
// Tail sums of the slice through a random line: D^S against the sum over
// i > S, and 2 x tail against D^{3S}.

// The slicing subspace exists by hypothesis only. Among a few Haar lines
// through theta, take the one whose matched distance term D(P(F), Z) is
// closest to 0; at S = 0 that term is the whole of lhs - rhs. On P^1 the
// line is the whole space and the choice is moot.
inline constexpr int kMain2LineCandidates = 16;

inline ProjPoint main2_line_direction(const ProductDivisor& z, const ProjPoint& theta, Rng& rng) {
  const int t = theta.ambient();
  ProjPoint best = random_point(t, rng);
  if (t == 1) return best;
  const double offset = divisor_normalization_offset(z) - matched_offset(z.degree(), 1);
  double best_term = std::abs(subspace_cycle_distance(line_through(theta, best), z) + offset);
  for (int k = 1; k < kMain2LineCandidates; ++k) {
    const ProjPoint v = random_point(t, rng);
    const double term = std::abs(subspace_cycle_distance(line_through(theta, v), z) + offset);
    if (term < best_term) {
      best_term = term;
      best = v;
    }
  }
  return best;
}

inline Report run_main2(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  FitCollector fits({"gap1", "gap2"});
  for (int t : cfg.t)
    for (int deg : cfg.degrees)
      for (int S : cfg.orders) {
        if (3 * S >= deg) continue;
        const std::string name = cell_name({{"t", t}, {"deg", deg}, {"S", S}});
        const std::uint64_t stream = cell_stream(cfg, name);
        auto draws = parallel_trials<FitDraw>(cfg.trials, jobs, [&](int i) {
          Rng rng(stream, static_cast<std::uint64_t>(i));
          return with_redraws(rng, [&](Rng& r) {
            const ProductDivisor z = random_product_divisor(t, deg, r);
            const ProjPoint theta = random_point(t, r);
            const ProjPoint v = main2_line_direction(z, theta, r);
            const Main2Check m = main2_check(z, theta, v, S, cfg.jet_budget);
            FitDraw d;
            d.outcome = {i, fnv1a64(std::vector<double>{m.lhs, m.rhs, m.lhs_triple}), m.lhs, m.rhs,
                         std::max(m.gap1, m.gap2), std::isfinite(m.gap1) && std::isfinite(m.gap2)};
            d.samples = {{m.gap1, std::max(S, 1) * std::log(deg + 2.0)},
                         {m.gap2, (deg + S) * std::log((S + 2.0) * deg)}};
            return d;
          });
        });
        CellRecord rec;
        rec.cell = name;
        rec.params = cell_params({{"t", t}, {"deg", deg}, {"S", S}});
        add_draws(rec, draws);
        double g1 = neg_inf, g2 = neg_inf;
        for (const auto& d : draws) {
          fits.add(group_name(t), deg, d);
          g1 = std::max(g1, d.samples[0].gap);
          g2 = std::max(g2, d.samples[1].gap);
        }
        rec.extra["gap1_max"] = g1;
        rec.extra["gap2_max"] = g2;
        rep.records.push_back(std::move(rec));
      }
  const bool stable = fits.finish(rep, [](const std::string&, const FitResult& f, ojson& j) { return stable_constant(f, j); });
  rep.passed = stable && rep.total_passes() == rep.total_trials();
  return rep;
}

// ---------------------------------------------------------------------------
// Full D^S against the slice D^S plus the distance of the line.

inline Report run_zerl(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  FitCollector fits({"gap_equality", "gap_upper"});
  for (int t : cfg.t) {
    require(t >= 2, ErrorKind::config, "zerl needs t >= 2");
    for (int deg : cfg.degrees)
      for (int S : cfg.orders) {
        if (3 * S > deg) continue;
        const std::string name = cell_name({{"t", t}, {"deg", deg}, {"S", S}});
        const std::uint64_t stream = cell_stream(cfg, name);
        auto draws = parallel_trials<FitDraw>(cfg.trials, jobs, [&](int i) {
          Rng rng(stream, static_cast<std::uint64_t>(i));
          return with_redraws(rng, [&](Rng& r) {
            const ProductDivisor z = random_product_divisor(t, deg, r);
            const ProjPoint theta = random_point(t, r);
            const ProjSubspace line = line_through(theta, random_point(t, r));
            const ZerlCheck c = zerl_check(z, theta, line, S, cfg.jet_budget);
            FitDraw d;
            d.outcome = {i, fnv1a64(std::vector<double>{c.full, c.slice, c.line_distance}), c.full,
                         c.slice + c.line_distance, std::max(c.gap_equality, c.gap_upper),
                         std::isfinite(c.gap_equality) && std::isfinite(c.gap_upper)};
            d.samples = {{c.gap_equality, c.normalizer}, {c.gap_upper, c.normalizer}};
            return d;
          });
        });
        CellRecord rec;
        rec.cell = name;
        rec.params = cell_params({{"t", t}, {"deg", deg}, {"S", S}});
        add_draws(rec, draws);
        for (const auto& d : draws) fits.add(group_name(t), deg, d);
        rep.records.push_back(std::move(rec));
      }
  }
  const bool bounded = fits.finish(rep, [](const std::string&, const FitResult& f, ojson& j) {
    j["no_blow_up"] = no_blow_up(f);
    return no_blow_up(f);
  });
  rep.passed = bounded && rep.total_passes() == rep.total_trials();
  return rep;
}

inline void zerl_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {2};
  fit_grid_defaults(c);
}

// ---------------------------------------------------------------------------
// Reciprocal derivated distance over the family of hyperplanes, for cycles
// whose hyperplanes are all far from F.

inline Report run_raumabl(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  FitCollector fits({"reciprocal"});
  for (int t : cfg.t)
    for (int deg : cfg.degrees)
      for (int S : cfg.orders) {
        if (S > deg) continue;
        const std::string name = cell_name({{"t", t}, {"deg", deg}, {"S", S}});
        const std::uint64_t stream = cell_stream(cfg, name);
        auto draws = parallel_trials<FitDraw>(cfg.trials, jobs, [&](int i) {
          Rng rng(stream, static_cast<std::uint64_t>(i));
          return with_redraws(rng, [&](Rng& r) {
            const ProjSubspace f = ProductDivisor::hyperplane(r.gaussian_vector(t + 1));
            const ProjPoint nf = hyperplane_normal(f);
            ProductDivisor z(t);
            for (int k = 0; k < deg; ++k)
              z.add(CVector(random_point_at_distance(nf, r.uniform(0.9, 1.0), r).coords().conjugate()));
            const RaumablCheck c = raumabl_check(z, f, S, cfg.jet_budget);
            FitDraw d;
            d.outcome = {i, fnv1a64(std::vector<double>{c.distance, c.derivated, c.reciprocal}), c.reciprocal,
                         c.normalizer, c.reciprocal / c.normalizer, std::isfinite(c.reciprocal)};
            d.samples = {{c.reciprocal / c.normalizer, c.normalizer}};
            return d;
          });
        });
        CellRecord rec;
        rec.cell = name;
        rec.params = cell_params({{"t", t}, {"deg", deg}, {"S", S}});
        add_draws(rec, draws);
        for (const auto& d : draws) fits.add(group_name(t), deg, d);
        rep.records.push_back(std::move(rec));
      }
  const bool bounded = fits.finish(rep, [](const std::string&, const FitResult& f, ojson& j) {
    j["no_blow_up"] = no_blow_up(f);
    return no_blow_up(f);
  });
  rep.passed = bounded && rep.total_passes() == rep.total_trials();
  return rep;
}

}  // namespace algdist::suites
