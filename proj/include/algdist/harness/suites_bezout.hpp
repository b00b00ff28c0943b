#pragma once
// Pairs of product divisors in P^2: the distance of the pair and of their
// intersection against derivated distances of the two divisors.

#include "algdist/harness/suites_fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace algdist::suites {

enum class BezoutVariant { dmbt1, cor2, cor4 };

inline const char* to_string(BezoutVariant v) {
  switch (v) {
    case BezoutVariant::dmbt1: return "dmbt1";
    case BezoutVariant::cor2: return "cor2";
    case BezoutVariant::cor4: return "cor4";
  }
  return "?";
}

inline void bezout_defaults(ExperimentConfig& c) {
  if (c.t.empty()) c.t = {2};
  if (c.degrees.empty()) c.degrees = {2, 4, 8, 16};
  if (c.trials == 0) c.trials = 100;
  if (c.jet_budget == 0) c.jet_budget = kDefaultJetBudget;
}

struct BezoutPair {
  ProductDivisor z0, z1;
  ZeroCycle x;
  double d01 = 0;   // D(Z0, Z1)
  double dx = 0;    // D(X, theta)
  std::vector<double> p0, p1;  // D^a(Z_i, theta) for a = 0..order
  std::vector<double> px;      // D^S(X, theta) for S = 0..x_order
  std::uint64_t digest = 0;
};

inline BezoutPair draw_bezout_pair(int deg, int order, int x_order, std::uint64_t budget, Rng& rng) {
  BezoutPair b;
  b.z0 = random_product_divisor(2, deg, rng);
  b.z1 = random_product_divisor(2, deg, rng);
  const ProjPoint theta = random_point(2, rng);
  b.x = intersect_product_divisors(b.z0, b.z1);
  if (b.x.degree() != deg * deg) throw Error(ErrorKind::improper_intersection, "improper intersection");
  b.d01 = cycle_cycle_distance(b.z0, b.z1);
  b.dx = algebraic_distance(theta, b.x).value;
  b.p0 = prefix_max(derivated_distance(theta, b.z0, order, budget).per_order);
  b.p1 = prefix_max(derivated_distance(theta, b.z1, order, budget).per_order);
  b.px = prefix_max(derivated_distance(theta, b.x, x_order, budget).per_order);
  b.digest = fnv1a64(std::vector<double>{b.d01, b.dx, b.p0[0], b.p1[0]});
  return b;
}

// Minimum over monotone lattice paths from (0,0) to (n0,n1) of the summed
// step costs: a step that leaves the first coordinate at a costs
// D^a(Z0), a step that leaves the second at b costs D^b(Z1).
inline double min_path_sum(const std::vector<double>& p0, const std::vector<double>& p1, int n0, int n1) {
  std::vector<std::vector<double>> best(static_cast<std::size_t>(n0 + 1), std::vector<double>(static_cast<std::size_t>(n1 + 1)));
  for (int a = 0; a <= n0; ++a)
    for (int b = 0; b <= n1; ++b) {
      if (a == 0 && b == 0) {
        best[0][0] = 0;
        continue;
      }
      double v = std::numeric_limits<double>::infinity();
      if (b > 0) v = std::min(v, best[static_cast<std::size_t>(a)][static_cast<std::size_t>(b - 1)] + p0[static_cast<std::size_t>(a)]);
      if (a > 0) v = std::min(v, best[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)] + p1[static_cast<std::size_t>(b)]);
      best[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
    }
  return best[static_cast<std::size_t>(n0)][static_cast<std::size_t>(n1)];
}

inline double bezout_normalizer(int deg, int S) {
  const double n = static_cast<double>(deg) * deg;
  return (n + S) * std::log((S + 2.0) * n);
}

struct BezoutCase {
  int S = 0, S0 = 0, S1 = 0;
  std::string name;
};

inline std::vector<BezoutCase> bezout_cases(BezoutVariant v, int deg) {
  std::vector<BezoutCase> out;
  switch (v) {
    case BezoutVariant::dmbt1:
      out.push_back({0, 0, 0, ""});
      break;
    case BezoutVariant::cor2:
      for (int S = 0; 3 * S <= deg; ++S) out.push_back({S, 0, 0, "S=" + std::to_string(S)});
      break;
    case BezoutVariant::cor4: {
      const int cap = std::min(deg / 3, 2);
      for (int s0 = 0; s0 <= cap; ++s0)
        for (int s1 = 0; s1 <= cap; ++s1)
          out.push_back({s0 * s1, s0, s1, "S0=" + std::to_string(s0) + ",S1=" + std::to_string(s1)});
      break;
    }
  }
  return out;
}

inline Report run_bezout(BezoutVariant variant, const ExperimentConfig& cfg, int jobs) {
  Report rep;
  rep.config = cfg;
  require(cfg.t.size() == 1 && cfg.t.front() == 2, ErrorKind::config, "intersections are computed in P^2 only");
  FitCollector fits({"violation"});
  for (int deg : cfg.degrees) {
    require(deg >= 1, ErrorKind::config, "degrees must be positive");
    const auto cases = bezout_cases(variant, deg);
    int order = 0, x_order = 0;
    for (const auto& c : cases) {
      x_order = std::max(x_order, c.S);
      order = std::max({order, 9 * c.S0, 9 * c.S1, std::max(3 * c.S - 1, 0)});
    }
    if (variant == BezoutVariant::dmbt1) order = deg;
    const std::string base = cell_name({{"deg", deg}});
    const std::uint64_t stream = cell_stream(cfg, base);
    struct Trial {
      std::vector<FitDraw> per_case;
      int redraws = 0;
    };
    auto trials = parallel_trials<Trial>(cfg.trials, jobs, [&](int i) {
      Rng rng(stream, static_cast<std::uint64_t>(i));
      Trial tr;
      for (;;) {
        BezoutPair b;
        try {
          b = draw_bezout_pair(deg, order, x_order, cfg.jet_budget, rng);
        } catch (const Error& e) {
          if (!is_redrawable(e) || ++tr.redraws > kMaxRedraws) throw;
          continue;
        }
        for (const auto& c : cases) {
          const auto at = [](const std::vector<double>& p, int k) { return p[static_cast<std::size_t>(k)]; };
          double lhs = 2 * b.d01 + 2 * at(b.px, c.S), rhs = 0;
          switch (variant) {
            case BezoutVariant::dmbt1:
              lhs = 2 * b.d01 + 2 * b.dx;
              rhs = min_path_sum(b.p0, b.p1, deg, deg);
              break;
            case BezoutVariant::cor2:
              rhs = std::max(c.S * at(b.p0, 0), at(b.p1, std::max(3 * c.S - 1, 0)));
              break;
            case BezoutVariant::cor4:
              rhs = std::max(c.S1 * at(b.p0, 9 * c.S0), c.S0 * at(b.p1, 9 * c.S1));
              break;
          }
          const double norm = bezout_normalizer(deg, c.S);
          FitDraw d;
          d.outcome = {i, b.digest, lhs, rhs, (lhs - rhs) / norm, std::isfinite(lhs) && std::isfinite(rhs)};
          d.samples = {{(lhs - rhs) / norm, norm}};
          tr.per_case.push_back(d);
        }
        return tr;
      }
    });
    for (std::size_t k = 0; k < cases.size(); ++k) {
      CellRecord rec;
      rec.cell = cases[k].name.empty() ? base : base + "," + cases[k].name;
      rec.params = cell_params({{"deg", deg}, {"S", cases[k].S}});
      if (variant == BezoutVariant::cor4) {
        rec.params["S0"] = cases[k].S0;
        rec.params["S1"] = cases[k].S1;
      }
      for (const auto& tr : trials) {
        rec.add(tr.per_case[k].outcome);
        fits.add(to_string(variant), deg, tr.per_case[k]);
        if (k == 0) rec.redraws += tr.redraws;
      }
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

}  // namespace algdist::suites
