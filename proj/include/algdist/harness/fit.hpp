#pragma once
// Fitting the implied constant of an O(.) bound across a degree grid.

#include "algdist/harness/report.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <map>
#include <vector>

namespace algdist {

struct FitRecord {
  int degree = 0;
  double normalizer = 1;  // the O(.) argument for this record
  double gap = 0;         // violation divided by the normalizer
};

struct FitResult {
  double c_hat = 0;                            // max normalized violation
  std::vector<std::pair<int, double>> per_degree;  // (degree, max normalized violation)
  double slope = 0;                            // of per-degree c_hat against log degree
  double slope_stderr = 0;
  double slope_ci_lo = 0, slope_ci_hi = 0;     // 95%
  double ls_constant = 0;                      // least squares of raw violation on the normalizer
  double r2 = 0;
  double min_c = 0, max_c = 0;
};

inline FitResult fit_implied_constant(const std::vector<FitRecord>& records) {
  std::map<int, double> best;
  for (const auto& r : records) {
    auto [it, fresh] = best.emplace(r.degree, r.gap);
    if (!fresh) it->second = std::max(it->second, r.gap);
  }
  if (records.size() < 8 || best.size() < 3)
    throw Error(ErrorKind::precondition, "insufficient spread: need at least 8 records over 3 degrees");

  FitResult out;
  out.per_degree.assign(best.begin(), best.end());
  out.c_hat = out.min_c = out.max_c = out.per_degree.front().second;
  for (const auto& [d, c] : out.per_degree) {
    out.c_hat = std::max(out.c_hat, c);
    out.min_c = std::min(out.min_c, c);
    out.max_c = std::max(out.max_c, c);
  }

  // Ordinary least squares of c_hat_d on log d with a Student-t interval.
  const double k = static_cast<double>(out.per_degree.size());
  double mx = 0, my = 0;
  for (const auto& [d, c] : out.per_degree) {
    mx += std::log(d) / k;
    my += c / k;
  }
  double sxx = 0, sxy = 0;
  for (const auto& [d, c] : out.per_degree) {
    sxx += (std::log(d) - mx) * (std::log(d) - mx);
    sxy += (std::log(d) - mx) * (c - my);
  }
  out.slope = sxy / sxx;
  double sse = 0;
  for (const auto& [d, c] : out.per_degree) {
    const double res = c - my - out.slope * (std::log(d) - mx);
    sse += res * res;
  }
  out.slope_stderr = std::sqrt(sse / (k - 2) / sxx);
  const boost::math::students_t dist(k - 2);
  const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
  out.slope_ci_lo = out.slope - q * out.slope_stderr;
  out.slope_ci_hi = out.slope + q * out.slope_stderr;

  // Raw violation against the normalizer, through the origin.
  double snn = 0, sgn = 0, mean_raw = 0;
  for (const auto& r : records) {
    const double raw = r.gap * r.normalizer;
    snn += r.normalizer * r.normalizer;
    sgn += raw * r.normalizer;
    mean_raw += raw / static_cast<double>(records.size());
  }
  out.ls_constant = sgn / snn;
  double ss_res = 0, ss_tot = 0;
  for (const auto& r : records) {
    const double raw = r.gap * r.normalizer;
    ss_res += std::pow(raw - out.ls_constant * r.normalizer, 2);
    ss_tot += std::pow(raw - mean_raw, 2);
  }
  out.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
  return out;
}

inline bool slope_ci_contains_zero(const FitResult& f) { return f.slope_ci_lo <= 0 && 0 <= f.slope_ci_hi; }

// max c_hat_d / min c_hat_d; only meaningful when every c_hat_d is positive.
inline double spread_ratio(const FitResult& f) { return f.min_c > 0 ? f.max_c / f.min_c : std::numeric_limits<double>::infinity(); }

// No growth beyond a factor 3 over the smallest degree, with violations below
// one normalizer unit treated as one.
inline bool no_blow_up(const FitResult& f) {
  return f.max_c <= 3 * std::max(f.per_degree.front().second, 1.0);
}

inline ojson to_json(const FitResult& f) {
  ojson j;
  j["c_hat"] = f.c_hat;
  ojson per = ojson::array();
  for (const auto& [d, c] : f.per_degree) per.push_back(ojson::array({d, c}));
  j["per_degree"] = per;
  j["slope_log_degree"] = f.slope;
  j["slope_stderr"] = f.slope_stderr;
  j["slope_ci95"] = ojson::array({f.slope_ci_lo, f.slope_ci_hi});
  j["ls_constant"] = f.ls_constant;
  j["r2"] = f.r2;
  j["min_c"] = f.min_c;
  j["max_c"] = f.max_c;
  return j;
}

}  // namespace algdist
