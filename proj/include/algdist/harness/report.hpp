#pragma once
// Experiment configuration, per-cell records and report serialization.

#include "algdist/core.hpp"
#include "algdist/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace algdist {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Hashing.

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::vector<double>& xs) {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(xs.data()), xs.size() * sizeof(double)));
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// JSON text with a fixed layout: two-space indentation, keys in insertion
// order, floating point numbers with 17 significant digits.

namespace detail {

inline void write_string(std::string& out, const std::string& s) { out += ojson(s).dump(); }

inline void write_json(std::string& out, const ojson& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        write_string(out, it.key());
        out += ": ";
        write_json(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalars = true;
      for (const auto& e : j) scalars &= !e.is_structured();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad_in;
        write_json(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ojson::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) {
        out += "\"nan\"";
      } else if (std::isinf(v)) {
        out += v > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        // Keep the value recognisably floating point.
        if (std::string_view(buf).find_first_of(".eE") == std::string_view::npos) out += ".0";
      }
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string to_json_text(const ojson& j) {
  std::string out;
  detail::write_json(out, j, 0);
  out += "\n";
  return out;
}

// Reads numbers written by to_json_text, including the quoted non-finite ones.
inline double json_number(const ojson& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

// ---------------------------------------------------------------------------
// Configuration.

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::vector<int> t;
  std::vector<int> degrees;
  std::vector<int> orders;
  int trials = 0;
  int mc_samples = 0;
  double tolerance = 0;
  std::uint64_t jet_budget = 0;
  std::vector<double> epsilons;
  double far_constant = 0;
};

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"experiment", "seed",       "t",         "degrees",
                                                "orders",     "trials",     "mc_samples", "tolerance",
                                                "jet_budget", "epsilons",   "far_constant"};
  return keys;
}

inline ojson to_json(const ExperimentConfig& c) {
  ojson j;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["t"] = c.t;
  j["degrees"] = c.degrees;
  j["orders"] = c.orders;
  j["trials"] = c.trials;
  j["mc_samples"] = c.mc_samples;
  j["tolerance"] = c.tolerance;
  j["jet_budget"] = c.jet_budget;
  j["epsilons"] = c.epsilons;
  j["far_constant"] = c.far_constant;
  return j;
}

namespace detail {

template <class T>
T config_value(const ojson& j, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) throw Error(ErrorKind::config, "config key '" + key + "' must be a number");
      return j.get<double>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!j.is_number_unsigned()) throw Error(ErrorKind::config, "config key '" + key + "' must be a nonnegative integer");
      return j.get<std::uint64_t>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!j.is_number_integer()) throw Error(ErrorKind::config, "config key '" + key + "' must be an integer");
      return j.get<int>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!j.is_string()) throw Error(ErrorKind::config, "config key '" + key + "' must be a string");
      return j.get<std::string>();
    } else {
      if (!j.is_array()) throw Error(ErrorKind::config, "config key '" + key + "' must be an array");
      T out;
      for (const auto& e : j) out.push_back(config_value<typename T::value_type>(e, key));
      return out;
    }
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::config, "config key '" + key + "' has the wrong type");
  }
}

}  // namespace detail

// Strict: unknown keys are rejected, missing keys keep their zero value and
// are filled by the experiment's defaults.
inline ExperimentConfig config_from_json(const ojson& j) {
  if (!j.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  ExperimentConfig c;
  const auto& keys = config_keys();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw Error(ErrorKind::config, "unknown config key '" + it.key() + "'");
  if (!j.contains("experiment")) throw Error(ErrorKind::config, "config needs an 'experiment'");
  c.experiment = detail::config_value<std::string>(j.at("experiment"), "experiment");
  if (j.contains("seed")) c.seed = detail::config_value<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("t")) c.t = detail::config_value<std::vector<int>>(j.at("t"), "t");
  if (j.contains("degrees")) c.degrees = detail::config_value<std::vector<int>>(j.at("degrees"), "degrees");
  if (j.contains("orders")) c.orders = detail::config_value<std::vector<int>>(j.at("orders"), "orders");
  if (j.contains("trials")) c.trials = detail::config_value<int>(j.at("trials"), "trials");
  if (j.contains("mc_samples")) c.mc_samples = detail::config_value<int>(j.at("mc_samples"), "mc_samples");
  if (j.contains("tolerance")) c.tolerance = detail::config_value<double>(j.at("tolerance"), "tolerance");
  if (j.contains("jet_budget")) c.jet_budget = detail::config_value<std::uint64_t>(j.at("jet_budget"), "jet_budget");
  if (j.contains("epsilons")) c.epsilons = detail::config_value<std::vector<double>>(j.at("epsilons"), "epsilons");
  if (j.contains("far_constant")) c.far_constant = detail::config_value<double>(j.at("far_constant"), "far_constant");
  return c;
}

inline std::string config_hash(const ExperimentConfig& c) { return "fnv1a64:" + hex64(fnv1a64(to_json_text(to_json(c)))); }

// ---------------------------------------------------------------------------
// Records.

struct TrialOutcome {
  int trial = 0;
  std::uint64_t digest = 0;
  double lhs = 0, rhs = 0;
  double gap = 0;  // > 0 means the inequality failed by that much (suite-specific units)
  bool pass = true;
};

struct CellRecord {
  std::string cell;
  ojson params = ojson::object();
  long long trials = 0, passes = 0, redraws = 0;
  bool has_worst = false;
  TrialOutcome worst;
  ojson extra = ojson::object();

  void add(const TrialOutcome& o) {
    ++trials;
    passes += o.pass;
    const bool worse = !has_worst || std::isnan(o.gap) || (!std::isnan(worst.gap) && o.gap > worst.gap);
    if (worse) {
      worst = o;
      has_worst = true;
    }
  }
  double pass_rate() const { return trials ? static_cast<double>(passes) / static_cast<double>(trials) : 1.0; }
};

inline ojson to_json(const CellRecord& r) {
  ojson j;
  j["cell"] = r.cell;
  j["params"] = r.params;
  j["trials"] = r.trials;
  j["passes"] = r.passes;
  j["redraws"] = r.redraws;
  if (r.has_worst) {
    ojson w;
    w["trial"] = r.worst.trial;
    w["digest"] = hex64(r.worst.digest);
    w["lhs"] = r.worst.lhs;
    w["rhs"] = r.worst.rhs;
    w["gap"] = r.worst.gap;
    w["pass"] = r.worst.pass;
    j["worst"] = w;
  }
  j["extra"] = r.extra;
  return j;
}

struct Report {
  ExperimentConfig config;
  std::vector<CellRecord> records;
  ojson aggregate = ojson::object();
  std::vector<std::string> notes;
  bool complete = true;
  bool passed = true;
  double wall_time = -1;  // only serialized when measured

  long long total_trials() const {
    long long n = 0;
    for (const auto& r : records) n += r.trials;
    return n;
  }
  long long total_passes() const {
    long long n = 0;
    for (const auto& r : records) n += r.passes;
    return n;
  }
  double max_gap() const {
    double g = neg_inf;
    for (const auto& r : records)
      if (r.has_worst) g = std::isnan(r.worst.gap) ? r.worst.gap : std::max(g, r.worst.gap);
    return g;
  }
};

inline ojson to_json(const Report& r) {
  ojson j;
  j["experiment"] = r.config.experiment;
  j["config_hash"] = config_hash(r.config);
  j["config"] = to_json(r.config);
  j["complete"] = r.complete;
  j["passed"] = r.passed;
  ojson agg;
  const long long n = r.total_trials(), p = r.total_passes();
  agg["trials"] = n;
  agg["passes"] = p;
  agg["pass_rate"] = n ? static_cast<double>(p) / static_cast<double>(n) : 1.0;
  agg["max_gap"] = r.max_gap();
  for (auto it = r.aggregate.begin(); it != r.aggregate.end(); ++it) agg[it.key()] = it.value();
  j["aggregate"] = agg;
  j["notes"] = r.notes;
  ojson recs = ojson::array();
  for (const auto& c : r.records) recs.push_back(to_json(c));
  j["records"] = recs;
  if (r.wall_time >= 0) j["wall_time_seconds"] = r.wall_time;
  return j;
}

inline std::string report_text(const Report& r) { return to_json_text(to_json(r)); }

// One row per cell; extra columns are the union of the cells' extra keys.
inline std::string report_csv(const Report& r) {
  std::vector<std::string> extra_keys;
  for (const auto& c : r.records)
    for (auto it = c.extra.begin(); it != c.extra.end(); ++it)
      if (!it.value().is_structured() && std::find(extra_keys.begin(), extra_keys.end(), it.key()) == extra_keys.end())
        extra_keys.push_back(it.key());
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto scalar = [&](const ojson& v) -> std::string {
    if (v.is_number_float()) return num(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  std::ostringstream out;
  out << "cell,trials,passes,redraws,worst_trial,worst_digest,worst_lhs,worst_rhs,worst_gap";
  for (const auto& k : extra_keys) out << "," << k;
  out << "\n";
  for (const auto& c : r.records) {
    out << '"' << c.cell << '"' << "," << c.trials << "," << c.passes << "," << c.redraws;
    if (c.has_worst)
      out << "," << c.worst.trial << "," << hex64(c.worst.digest) << "," << num(c.worst.lhs) << "," << num(c.worst.rhs)
          << "," << num(c.worst.gap);
    else
      out << ",,,,,";
    for (const auto& k : extra_keys) out << "," << (c.extra.contains(k) ? scalar(c.extra.at(k)) : "");
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Deterministic parallel map over trials. Trial i always sees the same RNG
// stream and its result lands in slot i, so the output does not depend on
// the number of workers.

inline std::uint64_t cell_stream(const ExperimentConfig& c, const std::string& cell) {
  return derive_seed(c.seed, fnv1a64(cell));
}

template <class R, class F>
std::vector<R> parallel_trials(int count, int jobs, F&& f) {
  std::vector<R> out(static_cast<std::size_t>(std::max(count, 0)));
  std::vector<std::exception_ptr> errors(out.size());
  jobs = std::clamp(jobs, 1, std::max(count, 1));
  auto work = [&](int w) {
    for (int i = w; i < count; i += jobs) {
      try {
        out[static_cast<std::size_t>(i)] = f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace algdist
