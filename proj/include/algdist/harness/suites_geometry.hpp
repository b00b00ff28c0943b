#pragma once
// Grassmannian sampling suites: the measure of tubes around incidence sets and
// the number of Haar draws needed to find a far hyperplane.

#include "algdist/harness/fit.hpp"
#include "algdist/harness/suites_exact.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace algdist::suites {

// ---------------------------------------------------------------------------
// Tube measure of the lines meeting a zero-cycle in P^2, as a function of eps.

inline void tube_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {2};
  if (c.degrees.empty()) c.degrees = {1, 2, 4, 8};
  if (c.epsilons.empty())
    for (int k = 1; k <= 10; ++k) c.epsilons.push_back(0.02 * k);
  if (c.mc_samples == 0) c.mc_samples = 20000;
  if (c.trials == 0) c.trials = 4;
}

struct LinearFit {
  double slope = 0, intercept = 0;
  double slope_stderr = 0, intercept_stderr = 0;
  double quadratic = 0;  // least squares q in p = q eps^2, for comparison
  double quadratic_r2 = 0, linear_r2 = 0;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  require(x.size() >= 3 && x.size() == y.size(), ErrorKind::precondition, "need at least 3 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sse += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  const double s2 = sse / (n - 2);
  f.slope_stderr = std::sqrt(s2 / sxx);
  f.intercept_stderr = std::sqrt(s2 * (1 / n + mx * mx / sxx));
  f.linear_r2 = syy > 0 ? 1 - sse / syy : 1.0;
  double s44 = 0, s2y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s44 += std::pow(x[i], 4);
    s2y += x[i] * x[i] * y[i];
  }
  f.quadratic = s2y / s44;
  double sseq = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sseq += std::pow(y[i] - f.quadratic * x[i] * x[i], 2);
  f.quadratic_r2 = syy > 0 ? 1 - sseq / syy : 1.0;
  return f;
}

inline Report run_tube(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  const int t = cfg.t.front();
  require(cfg.t.size() == 1 && t >= 2, ErrorKind::config, "tube takes a single t >= 2");
  bool intercepts_ok = true;
  std::vector<double> c2;
  ojson per_degree = ojson::array();
  for (int deg : cfg.degrees) {
    std::vector<double> xs, ys;
    for (double eps : cfg.epsilons) {
      char eps_name[32];
      std::snprintf(eps_name, sizeof eps_name, "eps=%.4g", eps);
      const std::string name = cell_name({{"t", t}, {"deg", deg}}, eps_name);
      // Cycles depend on the degree only, so every eps sees the same cycles.
      const std::uint64_t cycles = cell_stream(cfg, cell_name({{"t", t}, {"deg", deg}}));
      auto outcomes = parallel_trials<TrialOutcome>(cfg.trials, jobs, [&](int i) {
        Rng rng(cycles, static_cast<std::uint64_t>(i));
        ZeroCycle z(t);
        for (int k = 0; k < deg; ++k) z.add(random_point(t, rng));
        const Estimate e = tube_measure(z, t, eps, cfg.mc_samples, rng.bits());
        TrialOutcome o;
        o.trial = i;
        o.digest = fnv1a64(std::vector<double>{e.value, e.stderr_});
        o.lhs = e.value;
        o.rhs = deg * eps;
        o.gap = e.value - deg * eps;
        o.pass = true;
        return o;
      });
      CellRecord rec;
      rec.cell = name;
      rec.params = cell_params({{"t", t}, {"deg", deg}});
      rec.params["eps"] = eps;
      double mean = 0;
      for (const auto& o : outcomes) {
        rec.add(o);
        xs.push_back(eps);
        ys.push_back(o.lhs);
        mean += o.lhs / static_cast<double>(outcomes.size());
      }
      rec.extra["mean_fraction"] = mean;
      rep.records.push_back(std::move(rec));
    }
    const LinearFit f = fit_line(xs, ys);
    const bool ok = std::abs(f.intercept) <= 3 * f.intercept_stderr;
    intercepts_ok = intercepts_ok && ok;
    c2.push_back(f.slope / deg);
    ojson j;
    j["deg"] = deg;
    j["slope"] = f.slope;
    j["slope_stderr"] = f.slope_stderr;
    j["intercept"] = f.intercept;
    j["intercept_stderr"] = f.intercept_stderr;
    j["intercept_within_3_stderr"] = ok;
    j["linear_r2"] = f.linear_r2;
    j["c2"] = f.slope / deg;
    j["quadratic_coefficient"] = f.quadratic;
    j["quadratic_r2"] = f.quadratic_r2;
    per_degree.push_back(j);
  }
  const double c2_max = *std::max_element(c2.begin(), c2.end()), c2_min = *std::min_element(c2.begin(), c2.end());
  const bool c2_stable = c2_min > 0 && c2_max / c2_min < 3;
  rep.aggregate["per_degree"] = per_degree;
  rep.aggregate["c2_max"] = c2_max;
  rep.aggregate["c2_spread_ratio"] = c2_min > 0 ? c2_max / c2_min : std::numeric_limits<double>::infinity();
  rep.aggregate["c2_grid_stable"] = c2_stable;
  rep.aggregate["intercepts_within_3_stderr"] = intercepts_ok;
  rep.passed = intercepts_ok && c2_stable;
  return rep;
}

// ---------------------------------------------------------------------------
// Haar hyperplanes at incidence distance at least 1 / (C deg Z).

inline void pf_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {1, 2, 3};
  if (c.degrees.empty()) c.degrees = {1, 2, 4, 8, 16, 32};
  if (c.trials == 0) c.trials = 200;
  if (c.far_constant == 0) c.far_constant = kFarConstant;
}

inline constexpr int kFarBudget = 1000;
inline constexpr double kMeanDrawsBound = 4.0;

inline Report run_pf_far_subspace(const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  bool means_ok = true;
  double worst_mean = 0;
  for (int t : cfg.t)
    for (int deg : cfg.degrees) {
      const std::string name = cell_name({{"t", t}, {"deg", deg}});
      const std::uint64_t stream = cell_stream(cfg, name);
      auto outcomes = parallel_trials<TrialOutcome>(cfg.trials, jobs, [&](int i) {
        Rng rng(stream, static_cast<std::uint64_t>(i));
        ZeroCycle z(t);
        for (int k = 0; k < deg; ++k) z.add(random_point(t, rng));
        TrialOutcome o;
        o.trial = i;
        try {
          const FarSubspace f = find_far_subspace(z, 1, rng.bits(), kFarBudget, cfg.far_constant);
          o.lhs = f.draws;
          o.rhs = f.threshold;
          o.digest = fnv1a64(std::vector<double>{f.distance, f.threshold});
          o.gap = f.draws - kMeanDrawsBound;
          o.pass = true;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::no_far_subspace) throw;
          o.lhs = kFarBudget;
          o.gap = kFarBudget - kMeanDrawsBound;
          o.pass = false;
        }
        return o;
      });
      CellRecord rec;
      rec.cell = name;
      rec.params = cell_params({{"t", t}, {"deg", deg}});
      double mean = 0;
      for (const auto& o : outcomes) {
        rec.add(o);
        mean += o.lhs / static_cast<double>(outcomes.size());
      }
      rec.extra["mean_draws"] = mean;
      means_ok = means_ok && mean <= kMeanDrawsBound;
      worst_mean = std::max(worst_mean, mean);
      rep.records.push_back(std::move(rec));
    }
  rep.aggregate["max_mean_draws"] = worst_mean;
  rep.passed = means_ok && rep.total_passes() == rep.total_trials();
  return rep;
}

}  // namespace algdist::suites
