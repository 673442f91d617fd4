#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fdcp/errors.hpp"
#include "fdcp/filtered_derivative.hpp"
#include "fdcp/parallel.hpp"
#include "fdcp/random.hpp"
#include "fdcp/renewal.hpp"
#include "fdcp/window.hpp"

namespace fdcp {

using Json = nlohmann::ordered_json;

/// Rejection threshold of the multiple filter test, simulated from the
/// limit process under the null hypothesis.
struct ThresholdTable {
  double alpha = 0.05;
  std::vector<double> h_set;
  double T = 0.0;
  double grid_step = 0.0;
  std::size_t n_sims = 0;
  std::uint64_t seed = 0;
  double Q = 0.0;
  /// Same order statistic as Q, taken over the maxima of each window alone.
  std::vector<double> per_h_quantiles;

  static std::string cache_key(double T, std::span<const double> h_set, double grid_step,
                               double alpha, std::size_t n_sims, std::uint64_t seed) {
    std::vector<double> hs(h_set.begin(), h_set.end());
    std::sort(hs.begin(), hs.end());
    std::string text = "T=" + detail::format_double(T) + ";h=";
    for (double h : hs) text += detail::format_double(h) + ",";
    text += ";delta=" + detail::format_double(grid_step) + ";alpha=" + detail::format_double(alpha) +
            ";n_sims=" + std::to_string(n_sims) + ";seed=" + std::to_string(seed);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    return buf;
  }

  std::string cache_key() const { return cache_key(T, h_set, grid_step, alpha, n_sims, seed); }

  Json to_json() const {
    Json j;
    j["alpha"] = alpha;
    j["h_set"] = h_set;
    j["T"] = T;
    j["grid_step"] = grid_step;
    j["n_sims"] = n_sims;
    j["seed"] = seed;
    j["Q"] = Q;
    Json diag = Json::array();
    for (std::size_t i = 0; i < h_set.size(); ++i) {
      diag.push_back({{"h", h_set[i]}, {"max_quantile", per_h_quantiles[i]}});
    }
    j["per_h_max_quantiles"] = diag;
    return j;
  }

  static ThresholdTable from_json(const Json& j) {
    ThresholdTable t;
    try {
      t.alpha = j.at("alpha").get<double>();
      t.h_set = j.at("h_set").get<std::vector<double>>();
      t.T = j.at("T").get<double>();
      t.grid_step = j.at("grid_step").get<double>();
      t.n_sims = j.at("n_sims").get<std::size_t>();
      t.seed = j.at("seed").get<std::uint64_t>();
      t.Q = j.at("Q").get<double>();
      for (const auto& d : j.at("per_h_max_quantiles")) t.per_h_quantiles.push_back(d.at("max_quantile").get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigurationError(std::string("malformed threshold table: ") + e.what());
    }
    if (t.per_h_quantiles.size() != t.h_set.size()) {
      throw ConfigurationError("malformed threshold table: diagnostics do not match h_set");
    }
    return t;
  }
};

namespace detail {

/// Index of the (1 - alpha) order statistic, ceil((1 - alpha) n), 1-based.
inline std::size_t upper_order_index(double alpha, std::size_t n) {
  const double x = (1.0 - alpha) * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(x - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

inline double upper_quantile(std::vector<double> xs, double alpha) {
  std::sort(xs.begin(), xs.end());
  return xs[upper_order_index(alpha, xs.size()) - 1];
}

}  // namespace detail

/// max_t |L_{h,t}| for every h, all windows reading one Brownian path.
inline std::vector<double> null_path_maxima(const WindowConfig& cfg, RandomStream& rng) {
  const double step = cfg.grid_step();
  std::vector<long long> H;
  for (double h : cfg.h_set()) {
    if (!detail::near_integer(h / step)) throw ConfigurationError("grid step must divide every window size");
    H.push_back(std::llround(h / step));
  }
  const auto last = static_cast<std::size_t>(std::floor(cfg.T() / step + 1e-9));
  std::vector<double> path(last + 1, 0.0);
  const double sd = std::sqrt(step);
  for (std::size_t j = 1; j <= last; ++j) path[j] = path[j - 1] + sd * rng.normal();

  std::vector<double> maxima;
  for (std::size_t w = 0; w < H.size(); ++w) {
    const double h = cfg.h_set()[w];
    const auto hh = static_cast<std::size_t>(H[w]);
    const std::size_t points = cfg.grid(h).size();
    const double norm = std::sqrt(2.0 * h);
    double m = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
      const std::size_t i = hh + k;
      m = std::max(m, std::abs((path[i + hh] - path[i]) - (path[i] - path[i - hh])) / norm);
    }
    maxima.push_back(m);
  }
  return maxima;
}

inline ThresholdTable simulate_threshold(double T, std::vector<double> h_set, double grid_step, double alpha,
                                         std::size_t n_sims, std::uint64_t seed, unsigned workers = 1) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigurationError("alpha must lie in (0, 1)");
  if (n_sims < 100) throw ConfigurationError("threshold simulation needs n_sims >= 100");
  WindowConfig cfg = [&] {
    try {
      return WindowConfig(T, h_set, grid_step);
    } catch (const ParameterError& e) {
      throw ConfigurationError(e.what());
    }
  }();

  ThresholdTable table;
  table.alpha = alpha;
  table.h_set.assign(cfg.h_set().begin(), cfg.h_set().end());
  table.T = T;
  table.grid_step = grid_step;
  table.n_sims = n_sims;
  table.seed = seed;

  const std::size_t nh = table.h_set.size();
  std::vector<double> per_h(n_sims * nh);
  parallel_for(n_sims, workers, [&](std::size_t i) {
    RandomStream rng(seed, "threshold", i);
    const auto m = null_path_maxima(cfg, rng);
    std::copy(m.begin(), m.end(), per_h.begin() + static_cast<std::ptrdiff_t>(i * nh));
  });

  std::vector<double> global(n_sims, 0.0);
  for (std::size_t w = 0; w < nh; ++w) {
    std::vector<double> col(n_sims);
    for (std::size_t i = 0; i < n_sims; ++i) {
      col[i] = per_h[i * nh + w];
      global[i] = std::max(global[i], col[i]);
    }
    table.per_h_quantiles.push_back(detail::upper_quantile(std::move(col), alpha));
  }
  table.Q = detail::upper_quantile(std::move(global), alpha);
  return table;
}

struct ChangePoint {
  double location;
  double h;
  double statistic;
};

struct DetectionResult {
  bool reject = false;
  double Q = 0.0;
  double global_max = 0.0;
  std::vector<ChangePoint> change_points;
  std::vector<StatisticSeries> per_h_series;

  /// `series_paths`, if given, names the CSV file written for each series.
  Json to_json(std::span<const std::string> series_paths = {}) const {
    Json j;
    j["reject"] = reject;
    j["Q"] = Q;
    j["global_max"] = global_max;
    Json cps = Json::array();
    for (const auto& cp : change_points) {
      cps.push_back({{"c_hat", cp.location}, {"h", cp.h}, {"statistic", cp.statistic}});
    }
    j["change_points"] = cps;
    Json series = Json::array();
    for (std::size_t i = 0; i < per_h_series.size(); ++i) {
      Json s{{"h", per_h_series[i].h}};
      if (i < series_paths.size()) s["csv"] = series_paths[i];
      series.push_back(s);
    }
    j["series"] = series;
    return j;
  }
};

/// Successive argmax: take the largest valid |G|, stop once it is <= Q,
/// otherwise record it and blank out the open neighbourhood (t - h, t + h).
inline std::vector<ChangePoint> estimate_change_points(const StatisticSeries& series, double Q, double h) {
  std::vector<std::uint8_t> live = series.valid;
  std::vector<ChangePoint> found;
  for (;;) {
    std::size_t best = series.size();
    double best_abs = -1.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (live[i] && std::abs(series.values[i]) > best_abs) {
        best_abs = std::abs(series.values[i]);
        best = i;
      }
    }
    if (best == series.size() || best_abs <= Q) break;
    const double t = series.grid[best];
    found.push_back({t, h, series.values[best]});
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (std::abs(series.grid[i] - t) < h) live[i] = 0;
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.location < b.location; });
  return found;
}

/// Combines per-window estimates, smallest h first. An estimate is dropped
/// when it lies closer than min(h, h') to an already accepted one.
inline std::vector<ChangePoint> merge_across_windows(std::span<const std::vector<ChangePoint>> per_h) {
  std::vector<ChangePoint> all;
  for (const auto& list : per_h) all.insert(all.end(), list.begin(), list.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.h < b.h; });

  std::vector<ChangePoint> accepted;
  for (const auto& cp : all) {
    const bool clash = std::any_of(accepted.begin(), accepted.end(), [&](const ChangePoint& a) {
      return std::abs(a.location - cp.location) < std::min(a.h, cp.h);
    });
    if (!clash) accepted.push_back(cp);
  }
  std::sort(accepted.begin(), accepted.end(), [](const auto& a, const auto& b) { return a.location < b.location; });
  return accepted;
}

namespace detail {
inline bool same_value(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }
}  // namespace detail

/// Multiple filter test on one event sequence observed on (0, nT].
inline DetectionResult detect(const EventSequence& seq, double T, int n, std::span<const double> h_set,
                              const ThresholdTable& table) {
  std::vector<double> hs(h_set.begin(), h_set.end());
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  bool match = detail::same_value(T, table.T) && hs.size() == table.h_set.size();
  for (std::size_t i = 0; match && i < hs.size(); ++i) match = detail::same_value(hs[i], table.h_set[i]);
  if (!match) throw ConfigurationError("threshold table was built for a different T or window set");
  if (n < 1) throw ParameterError("scale n must be a positive integer");
  if (seq.horizon() < n * T * (1.0 - 1e-12)) {
    throw ConfigurationError("event sequence does not cover the horizon nT");
  }

  const WindowConfig cfg(T, hs, table.grid_step);
  DetectionResult res;
  res.Q = table.Q;
  for (double h : hs) {
    StatisticSeries g = G_process(seq, cfg, h, n);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.is_valid(i)) res.global_max = std::max(res.global_max, std::abs(g.values[i]));
    }
    res.per_h_series.push_back(std::move(g));
  }
  res.reject = res.global_max > res.Q;
  if (res.reject) {
    std::vector<std::vector<ChangePoint>> per_h;
    for (const auto& g : res.per_h_series) per_h.push_back(estimate_change_points(g, res.Q, g.h));
    res.change_points = merge_across_windows(per_h);
  }
  return res;
}

}  // namespace fdcp
