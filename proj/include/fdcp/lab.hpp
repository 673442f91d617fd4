#pragma once

// Seeded Monte Carlo experiments that check the limit behaviour of the
// filtered derivative empirically: marginal laws against the Gaussian limit,
// window laws of large numbers, and consistency of the local estimators.
//
// Convergence is judged by error decrease across scale levels plus a fixed
// threshold at the largest level. Reports never claim a trend from fewer than
// three levels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fdcp/detector.hpp"
#include "fdcp/filtered_derivative.hpp"
#include "fdcp/ks.hpp"
#include "fdcp/parallel.hpp"
#include "fdcp/random.hpp"
#include "fdcp/renewal.hpp"
#include "fdcp/theory.hpp"
#include "fdcp/window.hpp"

namespace fdcp::lab {

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct LabReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<int> n_levels;
  std::vector<std::pair<std::string, std::vector<double>>> metrics;
  std::vector<Criterion> criteria;
  std::vector<std::string> notes;

  bool pass() const {
    return !criteria.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
  }

  void add_metric(std::string name, std::vector<double> values) { metrics.emplace_back(std::move(name), std::move(values)); }

  const std::vector<double>& metric(const std::string& name) const {
    for (const auto& [k, v] : metrics) {
      if (k == name) return v;
    }
    throw ArgumentError("report has no metric '" + name + "'");
  }

  void add(std::string name, bool pass, std::string detail) {
    criteria.push_back({std::move(name), pass, std::move(detail)});
  }

  Json to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["n_levels"] = n_levels;
    Json m = Json::object();
    for (const auto& [k, v] : metrics) m[k] = v;
    j["metrics"] = m;
    Json c = Json::array();
    for (const auto& cr : criteria) c.push_back({{"name", cr.name}, {"pass", cr.pass}, {"detail", cr.detail}});
    j["criteria"] = c;
    j["notes"] = notes;
    j["pass"] = pass();
    return j;
  }

  std::string summary() const {
    std::ostringstream os;
    os << (pass() ? "PASS " : "FAIL ") << experiment << " (seed " << seed << ")\n";
    for (const auto& cr : criteria) os << "  [" << (cr.pass ? "ok" : "--") << "] " << cr.name << ": " << cr.detail << '\n';
    for (const auto& n : notes) os << "  note: " << n << '\n';
    return os.str();
  }
};

namespace detail {

/// Standard deviation of the limiting Kolmogorov distribution.
inline constexpr double kKolmogorovSd = 0.2606;

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

inline std::string series_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " -> " : "") + fmt(v[i]);
  return s;
}

inline std::string level_label(std::string_view experiment, int n, std::string_view what) {
  return std::string(experiment) + "/n=" + std::to_string(n) + "/" + std::string(what);
}

/// Guards shared by every experiment; returns false if the report is already void.
inline bool check_design(LabReport& r, std::size_t n_reps, std::size_t min_reps) {
  bool ok = true;
  if (r.n_levels.size() < 3) {
    r.add("levels", false, "convergence needs at least 3 scale levels, got " + std::to_string(r.n_levels.size()));
    ok = false;
  }
  if (n_reps < min_reps) {
    r.add("sufficient_data", false,
          "insufficient data: " + std::to_string(n_reps) + " replicates, need " + std::to_string(min_reps));
    r.notes.push_back("insufficient data; no statistics computed");
    ok = false;
  }
  for (int n : r.n_levels) {
    if (n < 1) throw ParameterError("scale levels must be positive integers");
  }
  return ok;
}

/// The model cut at T' (windows never read beyond it); keeps c <= T'.
inline ChangePointModel truncated(const ChangePointModel& m, double T) {
  ChangePointModel out = m;
  out.T = std::max(std::min(m.T, T), m.c);
  return out;
}

/// KS trend: the last level may not exceed the first by more than two
/// standard errors of the probe-averaged statistic.
inline void add_ks_trend(LabReport& r, const std::string& name, const std::vector<double>& mean_ks,
                         std::size_t probes, std::size_t n_reps) {
  const double ne = static_cast<double>(n_reps) / 2.0;
  const double se_diff = std::sqrt(2.0) * kKolmogorovSd / std::sqrt(static_cast<double>(probes) * ne);
  const bool ok = mean_ks.back() <= mean_ks.front() + 2.0 * se_diff;
  r.add(name, ok,
        "mean KS " + series_text(mean_ks) + "; last <= first + " + fmt(2.0 * se_diff) + " (2 s.e.)");
}

}  // namespace detail

/// Null hypothesis: marginals of D at fixed probes against those of the
/// limit (W_{t+h} - 2 W_t + W_{t-h}) / sqrt(2h).
inline LabReport check_H0_limit(const RenewalSpec& spec, double T, double h, std::vector<int> n_levels,
                                std::size_t n_reps, std::uint64_t seed, unsigned workers = 1) {
  LabReport r;
  r.experiment = "h0_limit";
  r.seed = seed;
  r.n_levels = std::move(n_levels);
  if (!(h > 0.0) || h > T / 2.0) throw ParameterError("window size h must lie in (0, T/2]");
  if (!detail::check_design(r, n_reps, 10)) return r;

  const std::vector<double> probes{h, T / 4.0, T / 2.0, 3.0 * T / 4.0, T - h};
  const std::size_t np = probes.size();
  const TheoryParams null{spec.mu(), spec.mu(), spec.sigma2(), spec.sigma2(), T / 2.0, T, h, 1};
  const double alpha_each = 0.05 / static_cast<double>(np);
  const double crit = ks::two_sample_critical_value(alpha_each, n_reps, n_reps);

  std::vector<std::vector<double>> ks_per_probe(np);
  std::vector<double> ks_mean;
  std::vector<std::vector<double>> last_d;
  for (int n : r.n_levels) {
    std::vector<std::vector<double>> d(np, std::vector<double>(n_reps));
    std::vector<std::vector<double>> l(np, std::vector<double>(n_reps));
    const double scale = flat_scale(h, n, spec.mu(), spec.sigma2());
    parallel_for(n_reps, workers, [&](std::size_t i) {
      RandomStream sim(seed, detail::level_label(r.experiment, n, "sim"), i);
      const EventSequence seq = simulate_renewal(spec, n * T, sim);
      RandomStream lim(seed, detail::level_label(r.experiment, n, "limit"), i);
      const auto lv = sample_L_at(null, probes, lim);
      for (std::size_t k = 0; k < np; ++k) {
        d[k][i] = count_difference(seq, probes[k], h, n) / scale;
        l[k][i] = lv[k];
      }
    });
    double sum = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
      const double s = ks::two_sample_statistic(d[k], l[k]);
      ks_per_probe[k].push_back(s);
      sum += s;
    }
    ks_mean.push_back(sum / static_cast<double>(np));
    last_d = std::move(d);
  }
  for (std::size_t k = 0; k < np; ++k) r.add_metric("ks_probe_t=" + detail::fmt(probes[k]), ks_per_probe[k]);
  r.add_metric("ks_mean", ks_mean);

  double worst = 0.0;
  for (const auto& v : ks_per_probe) worst = std::max(worst, v.back());
  r.add("final_below_critical", worst <= crit,
        "max KS at n=" + std::to_string(r.n_levels.back()) + " is " + detail::fmt(worst) + ", critical " +
            detail::fmt(crit) + " (5% family-wise, Bonferroni over " + std::to_string(np) + " probes)");
  detail::add_ks_trend(r, "ks_trend", ks_mean, np, n_reps);

  // Stationarity: every probe has the same law, compared against t = T/2.
  const double crit_pair = ks::two_sample_critical_value(0.05 / static_cast<double>(np - 1), n_reps, n_reps);
  double worst_pair = 0.0;
  for (std::size_t k = 0; k < np; ++k) {
    if (k != 2) worst_pair = std::max(worst_pair, ks::two_sample_statistic(last_d[k], last_d[2]));
  }
  r.add("stationary_probes", worst_pair <= crit_pair,
        "max KS between probes " + detail::fmt(worst_pair) + ", critical " + detail::fmt(crit_pair));
  return r;
}

/// Alternative with one change point: Gamma_t against L_t, and
/// G_t - Delta_t Lambda_t against Delta_t L_t, at c - h/2, c and c + h/2.
inline LabReport check_alternative_limit(const ChangePointModel& model, double h, std::vector<int> n_levels,
                                         std::size_t n_reps, std::uint64_t seed, unsigned workers = 1) {
  LabReport r;
  r.experiment = "alternative_limit";
  r.seed = seed;
  r.n_levels = std::move(n_levels);
  model.validate();
  const TheoryParams base = TheoryParams::from_model(model, h);
  if (!detail::check_design(r, n_reps, 10)) return r;

  const std::vector<double> probes{model.c - h / 2.0, model.c, model.c + h / 2.0};
  for (double t : probes) {
    if (t < h || t > model.T - h) throw ParameterError("probes c +- h/2 must lie in [h, T - h]");
  }
  const std::size_t np = probes.size();
  const double crit = ks::two_sample_critical_value(0.05 / static_cast<double>(np), n_reps, n_reps);
  const ChangePointModel cut = detail::truncated(model, probes.back() + h);

  std::vector<std::vector<double>> ks_gamma(np), ks_g(np);
  std::vector<double> mean_gamma, mean_g;
  for (int n : r.n_levels) {
    const TheoryParams p = base.with_scale(n);
    ChangePointModel mn = cut;
    mn.n = n;
    std::vector<std::vector<double>> gam(np, std::vector<double>(n_reps)), g(np, std::vector<double>(n_reps));
    std::vector<std::vector<double>> la(np, std::vector<double>(n_reps)), lb(np, std::vector<double>(n_reps));
    parallel_for(n_reps, workers, [&](std::size_t i) {
      const EventSequence seq = simulate_compound(mn, seed ^ fnv1a(detail::level_label(r.experiment, n, "sim")), i);
      RandomStream lim_a(seed, detail::level_label(r.experiment, n, "limit_gamma"), i);
      RandomStream lim_b(seed, detail::level_label(r.experiment, n, "limit_g"), i);
      const auto a = sample_L_at(p, probes, lim_a);
      const auto b = sample_L_at(p, probes, lim_b);
      for (std::size_t k = 0; k < np; ++k) {
        const double t = probes[k];
        const double diff = count_difference(seq, t, h, n);
        gam[k][i] = (diff - m_function(t, p)) / s_function(t, p);
        const double sh = s_hat(seq, t, h, n);
        const double dist = distortion(t, p);
        g[k][i] = (sh > 0.0 ? diff / sh : 0.0) - dist * shark_fin(t, p);
        la[k][i] = a[k];
        lb[k][i] = dist * b[k];
      }
    });
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
      ks_gamma[k].push_back(ks::two_sample_statistic(gam[k], la[k]));
      ks_g[k].push_back(ks::two_sample_statistic(g[k], lb[k]));
      sa += ks_gamma[k].back();
      sb += ks_g[k].back();
    }
    mean_gamma.push_back(sa / static_cast<double>(np));
    mean_g.push_back(sb / static_cast<double>(np));
  }
  for (std::size_t k = 0; k < np; ++k) {
    r.add_metric("ks_gamma_t=" + detail::fmt(probes[k]), ks_gamma[k]);
    r.add_metric("ks_g_t=" + detail::fmt(probes[k]), ks_g[k]);
  }
  r.add_metric("ks_gamma_mean", mean_gamma);
  r.add_metric("ks_g_mean", mean_g);
  r.add_metric("critical_1pct", {ks::two_sample_critical_value(0.01, n_reps, n_reps)});

  auto worst = [](const std::vector<std::vector<double>>& v) {
    double w = 0.0;
    for (const auto& x : v) w = std::max(w, x.back());
    return w;
  };
  const std::string bonf = " (5% family-wise, Bonferroni over " + std::to_string(np) + " probes)";
  r.add("gamma_final_below_critical", worst(ks_gamma) <= crit,
        "max KS " + detail::fmt(worst(ks_gamma)) + ", critical " + detail::fmt(crit) + bonf);
  r.add("g_final_below_critical", worst(ks_g) <= crit,
        "max KS " + detail::fmt(worst(ks_g)) + ", critical " + detail::fmt(crit) + bonf);
  detail::add_ks_trend(r, "gamma_ks_trend", mean_gamma, np, n_reps);
  detail::add_ks_trend(r, "g_ks_trend", mean_g, np, n_reps);
  return r;
}

/// Law of large numbers for window counts: count / (n h) against
/// 1 / mu_window(t), as a relative error, plus a time-reflection check.
inline LabReport check_window_lln(const ChangePointModel& model, double h, std::vector<int> n_levels,
                                  std::uint64_t seed, std::size_t n_reps = 4, unsigned workers = 1) {
  LabReport r;
  r.experiment = "window_lln";
  r.seed = seed;
  r.n_levels = std::move(n_levels);
  model.validate();
  const TheoryParams base = TheoryParams::from_model(model, h);
  if (!detail::check_design(r, n_reps, 1)) return r;

  const WindowConfig cfg = WindowConfig::single(model.T, h, model.c);
  const auto grid = cfg.grid(h);
  const TheoryParams mirror = base.reflected();

  double sym = 0.0;
  for (double t : grid) {
    sym = std::max(sym, std::abs(mu_ri_theory(t, base) - mu_le_theory(model.T - t, mirror)) / mu_ri_theory(t, base));
    sym = std::max(sym, std::abs(mu_le_theory(t, base) - mu_ri_theory(model.T - t, mirror)) / mu_le_theory(t, base));
  }
  r.add("reflection_theory", sym <= 1e-12, "max relative mismatch " + detail::fmt(sym));

  std::vector<double> sup_right, sup_left;
  bool mirror_counts = true;
  for (int n : r.n_levels) {
    ChangePointModel mn = model;
    mn.n = n;
    std::vector<double> right(n_reps), left(n_reps);
    std::vector<std::uint8_t> mirrored(n_reps, 1);
    parallel_for(n_reps, workers, [&](std::size_t i) {
      const EventSequence seq = simulate_compound(mn, seed ^ fnv1a(detail::level_label(r.experiment, n, "sim")), i);
      // Time-reversed copy: events nT - S_j, life times read backwards.
      const auto times = seq.times();
      std::vector<double> rev;
      rev.reserve(times.size());
      for (auto it = times.rbegin(); it != times.rend(); ++it) {
        const double v = n * model.T - *it;
        if (v > 0.0 && (rev.empty() || v > rev.back())) rev.push_back(v);
      }
      const bool exact_mirror = rev.size() == times.size();
      const EventSequence flipped = EventSequence::from_times(std::move(rev), n * model.T);

      double sr = 0.0, sl = 0.0;
      for (double t : grid) {
        const double nh = n * h;
        const double cr = static_cast<double>(count_in(seq, n * t, n * (t + h)));
        const double cl = static_cast<double>(count_in(seq, n * (t - h), n * t));
        sr = std::max(sr, std::abs(cr / nh * mu_ri_theory(t, base) - 1.0));
        sl = std::max(sl, std::abs(cl / nh * mu_le_theory(t, base) - 1.0));
        if (exact_mirror) {
          const double tm = model.T - t;
          const auto fl = count_in(flipped, n * (tm - h), n * tm);
          if (static_cast<double>(fl) != cr) mirrored[i] = 0;
        }
      }
      right[i] = sr;
      left[i] = sl;
    });
    double ar = 0.0, al = 0.0;
    for (std::size_t i = 0; i < n_reps; ++i) {
      ar += right[i];
      al += left[i];
      mirror_counts = mirror_counts && mirrored[i];
    }
    sup_right.push_back(ar / static_cast<double>(n_reps));
    sup_left.push_back(al / static_cast<double>(n_reps));
  }
  r.add_metric("sup_rel_error_right", sup_right);
  r.add_metric("sup_rel_error_left", sup_left);
  r.add("right_decreasing", detail::strictly_decreasing(sup_right), detail::series_text(sup_right));
  r.add("left_decreasing", detail::strictly_decreasing(sup_left), detail::series_text(sup_left));
  r.add("right_final_below_0.05", sup_right.back() < 0.05, detail::fmt(sup_right.back()));
  r.add("left_final_below_0.05", sup_left.back() < 0.05, detail::fmt(sup_left.back()));
  r.add("reflection_counts", mirror_counts,
        "right-window counts equal left-window counts of the time-reversed path");
  r.notes.push_back("errors are sup over the grid of |count/(nh) * mu_window - 1|, averaged over " +
                    std::to_string(n_reps) + " paths per level");
  return r;
}

/// Local estimators near the change: sup-norm errors of mu_hat_ri and
/// sigma2_hat_ri against their window limits, and of s / s_hat against Delta.
inline LabReport check_estimator_consistency(const ChangePointModel& model, double h, std::vector<int> n_levels,
                                             std::uint64_t seed, std::size_t n_reps = 4, unsigned workers = 1) {
  LabReport r;
  r.experiment = "estimator_consistency";
  r.seed = seed;
  r.n_levels = std::move(n_levels);
  model.validate();
  const TheoryParams base = TheoryParams::from_model(model, h);
  if (!detail::check_design(r, n_reps, 1)) return r;

  const WindowConfig cfg = WindowConfig::single(model.T, h, model.c);
  const auto grid = cfg.grid(h);
  std::vector<double> mu_ri(grid.size()), var_ri(grid.size()), delta(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    mu_ri[k] = mu_ri_theory(grid[k], base);
    var_ri[k] = sigma2_ri_theory(grid[k], base);
    delta[k] = distortion(grid[k], base);
  }

  std::vector<double> e_mu, e_var, e_ratio;
  for (int n : r.n_levels) {
    const TheoryParams p = base.with_scale(n);
    ChangePointModel mn = model;
    mn.n = n;
    std::vector<double> a(n_reps), b(n_reps), c(n_reps);
    parallel_for(n_reps, workers, [&](std::size_t i) {
      const EventSequence seq = simulate_compound(mn, seed ^ fnv1a(detail::level_label(r.experiment, n, "sim")), i);
      double sa = 0.0, sb = 0.0, sc = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const WindowStats wr = window_stats_right(seq, t, h, n);
        const WindowStats wl = window_stats_left(seq, t, h, n);
        const double sh = fdcp::detail::s_hat_from(wr, wl, h, n);
        sa = std::max(sa, std::abs(wr.mean_hat - mu_ri[k]));
        sb = std::max(sb, std::abs(wr.var_hat - var_ri[k]));
        sc = std::max(sc, sh > 0.0 ? std::abs(s_function(t, p) / sh - delta[k]) : 1.0);
      }
      a[i] = sa;
      b[i] = sb;
      c[i] = sc;
    });
    auto mean = [&](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    e_mu.push_back(mean(a));
    e_var.push_back(mean(b));
    e_ratio.push_back(mean(c));
  }
  r.add_metric("sup_error_mu_ri", e_mu);
  r.add_metric("sup_error_sigma2_ri", e_var);
  r.add_metric("sup_error_s_over_s_hat", e_ratio);
  r.add("mu_ri_decreasing", detail::strictly_decreasing(e_mu), detail::series_text(e_mu));
  r.add("sigma2_ri_decreasing", detail::strictly_decreasing(e_var), detail::series_text(e_var));
  r.add("s_ratio_decreasing", detail::strictly_decreasing(e_ratio), detail::series_text(e_ratio));
  r.add("s_ratio_final_below_0.05", e_ratio.back() < 0.05, detail::fmt(e_ratio.back()));
  r.notes.push_back("sup-norms over the grid, averaged over " + std::to_string(n_reps) + " paths per level");
  return r;
}

/// Sample variance of the life times between consecutive events inside
/// (lo, hi], found by a linear scan of the event times.
inline double brute_force_window_variance(const EventSequence& seq, double lo, double hi, std::size_t& terms) {
  std::vector<double> gaps;
  double prev = 0.0;
  bool have_prev = false;
  for (double s : seq.times()) {
    if (s <= lo) continue;
    if (s > hi) break;
    if (have_prev) gaps.push_back(s - prev);
    prev = s;
    have_prev = true;
  }
  terms = gaps.size();
  if (gaps.size() < 2) return 0.0;
  double m = 0.0;
  for (double g : gaps) m += g;
  m /= static_cast<double>(gaps.size());
  double ss = 0.0;
  for (double g : gaps) ss += (g - m) * (g - m);
  return ss / static_cast<double>(gaps.size() - 1);
}

/// Which closed form describes the variance of life times in a window that
/// straddles the change point: the mixture form or the printed variant.
/// Probes default to five equally spaced interior points of (c - h, c).
inline LabReport check_window_variance_form(const ChangePointModel& model, double h, int n, std::size_t n_reps,
                                            std::uint64_t seed, std::vector<double> probes = {},
                                            unsigned workers = 1) {
  LabReport r;
  r.experiment = "window_variance_form";
  r.seed = seed;
  r.n_levels = {n};
  model.validate();
  const TheoryParams p = TheoryParams::from_model(model, h).with_scale(n);
  if (probes.empty()) {
    for (int k = 1; k <= 5; ++k) probes.push_back(model.c - h + h * k / 6.0);
  }
  if (n_reps < 1000) {
    r.add("sufficient_data", false, "needs at least 1000 replicates, got " + std::to_string(n_reps));
    return r;
  }
  const ChangePointModel cut = [&] {
    ChangePointModel m = detail::truncated(model, *std::max_element(probes.begin(), probes.end()) + h);
    m.n = n;
    return m;
  }();

  const std::size_t np = probes.size();
  std::vector<double> sums(n_reps * np, 0.0);
  std::vector<std::uint8_t> used(n_reps * np, 0);
  parallel_for(n_reps, workers, [&](std::size_t i) {
    const EventSequence seq = simulate_compound(cut, seed ^ fnv1a(r.experiment + "/sim"), i);
    for (std::size_t k = 0; k < np; ++k) {
      std::size_t terms = 0;
      const double v = brute_force_window_variance(seq, n * probes[k], n * (probes[k] + h), terms);
      if (terms >= 2) {
        sums[i * np + k] = v;
        used[i * np + k] = 1;
      }
    }
  });

  std::vector<double> empirical(np), mixture(np), printed(np), dev_mix(np), dev_printed(np);
  bool mix_ok = true;
  bool printed_off = false;
  for (std::size_t k = 0; k < np; ++k) {
    double s = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < n_reps; ++i) {
      if (used[i * np + k]) {
        s += sums[i * np + k];
        ++cnt;
      }
    }
    empirical[k] = cnt ? s / static_cast<double>(cnt) : 0.0;
    mixture[k] = sigma2_ri_theory(probes[k], p, VarianceForm::mixture);
    printed[k] = sigma2_ri_theory(probes[k], p, VarianceForm::printed);
    dev_mix[k] = std::abs(mixture[k] / empirical[k] - 1.0);
    dev_printed[k] = std::abs(printed[k] / empirical[k] - 1.0);
    mix_ok = mix_ok && dev_mix[k] <= 0.02;
    printed_off = printed_off || dev_printed[k] > 0.02;
  }
  r.add_metric("probe_t", probes);
  r.add_metric("empirical_window_variance", empirical);
  r.add_metric("mixture_form", mixture);
  r.add_metric("printed_form", printed);
  r.add_metric("relative_deviation_mixture", dev_mix);
  r.add_metric("relative_deviation_printed", dev_printed);
  r.add("mixture_within_2pct", mix_ok, "max relative deviation " + detail::fmt(*std::max_element(dev_mix.begin(), dev_mix.end())));
  r.add("printed_outside_2pct", printed_off,
        "max relative deviation " + detail::fmt(*std::max_element(dev_printed.begin(), dev_printed.end())));
  r.notes.push_back("empirical value is the replicate mean of the unbiased sample variance of life times "
                    "between consecutive events in (nt, n(t+h)], " + std::to_string(n_reps) + " replicates");
  return r;
}

/// Default Gamma life-time models, all with T = 1000 and c = 500.
namespace fixtures {
inline ChangePointModel model(double p1, double l1, double p2, double l2, double c = 500.0, double T = 1000.0) {
  return {RenewalSpec::gamma(p1, l1), RenewalSpec::gamma(p2, l2), c, T, 1};
}
/// Rate 1 -> 20, dispersion 1 -> 20 (west-heading fin).
inline ChangePointModel rate_jump() { return model(1, 1, 1, 20); }
/// Rate 5 -> 20 with a shape change 1 -> 1/4.
inline ChangePointModel shape_change() { return model(1, 5, 0.25, 5); }
/// Rate 5 -> 10 at fixed shape 2.
inline ChangePointModel scale_change() { return model(2, 10, 2, 20); }
/// Equal means, variance 1 -> 1/4.
inline ChangePointModel variance_only() { return model(1, 1, 4, 4); }
}  // namespace fixtures

/// Every experiment on the default fixtures (T = 1000, c = 500, h = 150).
inline std::vector<LabReport> run_suite(std::uint64_t seed, std::size_t n_reps = 500, unsigned workers = 1) {
  const double h = 150.0;
  const std::vector<int> levels{1, 4, 16};
  std::vector<LabReport> out;
  out.push_back(check_H0_limit(RenewalSpec::gamma(1, 1), 1000.0, h, levels, n_reps, seed, workers));
  out.push_back(check_alternative_limit(fixtures::shape_change(), h, levels, n_reps, seed, workers));
  {
    LabReport cor = check_alternative_limit(fixtures::variance_only(), h, levels, n_reps, seed, workers);
    cor.experiment = "alternative_limit_equal_means";
    out.push_back(std::move(cor));
  }
  out.push_back(check_window_lln(fixtures::rate_jump(), h, {1, 4, 16, 64}, seed, 4, workers));
  for (const auto& [name, m] : {std::pair{"shape_change", fixtures::shape_change()},
                                std::pair{"scale_change", fixtures::scale_change()}}) {
    LabReport rep = check_estimator_consistency(m, h, levels, seed, 4, workers);
    rep.experiment += std::string("/") + name;
    out.push_back(std::move(rep));
  }
  out.push_back(check_window_variance_form(fixtures::shape_change(), h, 1, std::max<std::size_t>(n_reps * 2, 1000),
                                           seed, {}, workers));
  return out;
}

}  // namespace fdcp::lab
