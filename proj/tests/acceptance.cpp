// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "fdcp/fdcp.hpp"

using namespace fdcp;

namespace {

constexpr double kT = 1000.0;
constexpr double kC = 500.0;
constexpr double kH = 150.0;
constexpr std::uint64_t kSeed = 20240611;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

TheoryParams params(double p1, double l1, double p2, double l2) {
  return TheoryParams::from_specs(RenewalSpec::gamma(p1, l1), RenewalSpec::gamma(p2, l2), kC, kT, kH);
}

ChangePointModel rate_jump_model() { return lab::fixtures::rate_jump(); }

/// Criteria 2 and 3 share one batch of detections.
struct PowerRun {
  double Q = 0.0;
  std::size_t reps = 0;
  std::size_t detected = 0;
  std::size_t localized = 0;
};

const ThresholdTable& level_table() {
  static const ThresholdTable table = simulate_threshold(kT, {kH}, 3.0, 0.05, 10'000, kSeed, workers());
  return table;
}

const PowerRun& power_run() {
  static const PowerRun run = [] {
    PowerRun r;
    r.Q = level_table().Q;
    r.reps = 500;
    const std::vector<double> hs{kH};
    std::vector<std::uint8_t> det(r.reps, 0), loc(r.reps, 0);
    parallel_for(r.reps, workers(), [&](std::size_t i) {
      const auto seq = simulate_compound(rate_jump_model(), kSeed + 2, i);
      const auto res = detect(seq, kT, 1, hs, level_table());
      if (!res.reject || res.change_points.empty()) return;
      det[i] = 1;
      const auto best = std::max_element(res.change_points.begin(), res.change_points.end(), [](auto& a, auto& b) {
        return std::abs(a.statistic) < std::abs(b.statistic);
      });
      loc[i] = std::abs(best->location - kC) <= kH / 5.0;
    });
    for (std::size_t i = 0; i < r.reps; ++i) r.detected += det[i], r.localized += loc[i];
    return r;
  }();
  return run;
}

Outcome level_control() {
  const auto& table = level_table();
  const std::size_t reps = 1000;
  const std::vector<double> hs{kH};
  std::vector<std::uint8_t> rej(reps, 0);
  parallel_for(reps, workers(), [&](std::size_t i) {
    const auto seq = simulate_renewal(RenewalSpec::gamma(1, 1), kT, kSeed + 1, i);
    rej[i] = detect(seq, kT, 1, hs, table).reject;
  });
  const double rate = static_cast<double>(std::count(rej.begin(), rej.end(), 1)) / reps;
  return {rate >= 0.03 && rate <= 0.07,
          "Q=" + fmt(table.Q) + " from 10^4 paths; H0 rejection rate " + fmt(rate) + " over 1000 replicates, need [0.03, 0.07]"};
}

Outcome power_vs_bound() {
  const auto& run = power_run();
  const double bound = detection_bound(run.Q, TheoryParams::from_model(rate_jump_model(), kH));
  const double rate = static_cast<double>(run.detected) / run.reps;
  const double se = std::max(std::sqrt(bound * (1 - bound) / run.reps), std::sqrt(rate * (1 - rate) / run.reps));
  const bool ok = rate >= bound - 3.0 * se && rate >= 0.99;
  return {ok, "detection rate " + fmt(rate) + " over " + std::to_string(run.reps) + " replicates; bound " +
                  fmt(bound, 10) + ", 3 s.e. " + fmt(3 * se) + "; need >= bound - 3 s.e. and >= 0.99"};
}

Outcome localization() {
  const auto& run = power_run();
  if (run.detected == 0) return {false, "no detecting replicates"};
  const double frac = static_cast<double>(run.localized) / run.detected;
  return {frac >= 0.95, "c_hat within 500 +- 30 in " + fmt(frac) + " of " + std::to_string(run.detected) +
                            " detecting replicates, need >= 0.95"};
}

/// Sign of the monotonicity and curvature of Lambda on one side of c.
bool side_shape(const TheoryParams& p, double lo, double hi, int slope, int curvature, std::string& why) {
  const double step = 0.5;
  const double scale = shark_height(p);
  const double tol = 1e-12 * scale;
  std::vector<double> v;
  for (double t = lo; t <= hi + 1e-9; t += step) v.push_back(shark_fin(t, p));
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(slope * (v[i] - v[i - 1]) > 0.0)) {
      why = "monotonicity fails at t=" + fmt(lo + i * step);
      return false;
    }
  }
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double d2 = v[i + 1] - 2.0 * v[i] + v[i - 1];
    if (curvature * d2 < -tol) {
      why = "curvature sign fails at t=" + fmt(lo + i * step);
      return false;
    }
  }
  return true;
}

Outcome shark_geometry() {
  struct Case {
    const char* name;
    TheoryParams p;
    SharkShape shape;
    int left_slope, left_curv, right_slope, right_curv;
  };
  // curvature: -1 concave, +1 convex.
  const std::vector<Case> rows{
      {"rate up, dispersion up", params(1, 1, 1, 20), SharkShape::west_fin, +1, -1, -1, +1},
      {"rate up, dispersion down", params(0.05, 0.05, 20, 400), SharkShape::east_fin, +1, +1, -1, -1},
      {"rate down, dispersion up", params(20, 400, 0.05, 0.05), SharkShape::west_fin_inverted, -1, +1, +1, -1},
      {"rate down, dispersion down", params(1, 20, 1, 1), SharkShape::east_fin_inverted, -1, -1, +1, +1},
  };
  std::string detail;
  bool ok = true;
  for (const auto& r : rows) {
    const auto got = classify_shark(r.p);
    std::string why;
    bool row_ok = got == r.shape;
    if (!row_ok) why = "classified " + std::string(to_string(got));
    row_ok = row_ok && side_shape(r.p, kC - kH, kC, r.left_slope, r.left_curv, why);
    row_ok = row_ok && side_shape(r.p, kC + 0.5, kC + kH, r.right_slope, r.right_curv, why);
    detail += std::string(r.name) + ": " + std::string(to_string(got)) + (row_ok ? "" : " (" + why + ")") + "; ";
    ok = ok && row_ok;
  }
  return {ok, detail + "monotone and curvature signs on both flanks at step 0.5"};
}

Outcome scaling_law() {
  const auto p = params(1, 1, 1, 20);
  const double base = std::abs(shark_fin(kC, p));
  const double by_n = std::abs(shark_fin(kC, p.with_scale(4)));
  const auto wide = TheoryParams::from_specs(RenewalSpec::gamma(1, 1), RenewalSpec::gamma(1, 20), 1000.0, 2000.0, kH);
  const double by_h = std::abs(shark_fin(1000.0, wide.with_window(4 * kH)));
  const double e1 = std::abs(by_n / base - 2.0) / 2.0;
  const double e2 = std::abs(by_h / std::abs(shark_fin(1000.0, wide)) - 2.0) / 2.0;
  return {e1 <= 1e-12 && e2 <= 1e-12, "|Lambda_c| " + fmt(base, 10) + " -> " + fmt(by_n, 10) + " (n x4, rel err " +
                                          fmt(e1, 2) + "), h x4 rel err " + fmt(e2, 2)};
}

/// s / s~ evaluated from the closed forms, bypassing the exact shortcuts in distortion().
double raw_distortion(double t, const TheoryParams& p) { return s_function(t, p) / s_tilde(t, p); }

Outcome distortion_anchors() {
  double worst = 0.0;
  for (const auto& p : {params(1, 5, 0.25, 5), params(2, 10, 2, 20), params(1, 1, 1, 20), params(0.05, 0.05, 20, 400)}) {
    worst = std::max({worst, std::abs(distortion(kC, p) - 1.0), std::abs(raw_distortion(kC, p) - 1.0)});
    for (double t = kH; t <= kT - kH; t += 1.0) {
      if (std::abs(t - kC) > kH) worst = std::max(worst, std::abs(raw_distortion(t, p) - 1.0));
    }
  }
  const auto equal_means = params(1, 1, 4, 4);
  for (double t = kH; t <= kT - kH; t += 1.0) worst = std::max(worst, std::abs(raw_distortion(t, equal_means) - 1.0));
  double dev = 0.0;
  const auto shape_change = params(1, 5, 0.25, 5);
  for (double t = kH; t <= kT - kH; t += 0.5) dev = std::max(dev, std::abs(distortion(t, shape_change) - 1.0));
  return {worst <= 1e-12 && dev >= 0.01 && dev <= 0.25,
          "max |Delta - 1| at anchors " + fmt(worst, 2) + " (need <= 1e-12); shape-change model max deviation " +
              fmt(dev) + " (need [0.01, 0.25])"};
}

Outcome limit_marginals() {
  const auto p = params(1, 5, 0.25, 5);
  const WindowConfig cfg(kT, {kH}, 3.0, kC);
  const std::vector<double> probes{200.0, 425.0, 500.0, 575.0, 800.0};
  std::vector<std::size_t> idx;
  const auto grid = cfg.grid(kH);
  for (double t : probes) idx.push_back(static_cast<std::size_t>(std::find(grid.begin(), grid.end(), t) - grid.begin()));
  const std::size_t reps = 10'000;
  std::vector<std::vector<double>> x(probes.size(), std::vector<double>(reps));
  parallel_for(reps, workers(), [&](std::size_t i) {
    const auto path = simulate_L(cfg, p, kSeed + 7, i);
    for (std::size_t k = 0; k < probes.size(); ++k) x[k][i] = path.values[idx[k]];
  });
  const double crit = ks::critical_value(0.01, reps);
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    double m = 0.0, q = 0.0;
    for (double v : x[k]) m += v;
    m /= reps;
    for (double v : x[k]) q += (v - m) * (v - m);
    const double var = q / (reps - 1);
    const double d = ks::one_sample_statistic(x[k], normal_cdf);
    ok = ok && var >= 0.95 && var <= 1.05 && d < crit;
    detail += "t=" + fmt(probes[k]) + ": var " + fmt(var) + ", KS " + fmt(d, 3) + "; ";
  }
  return {ok, detail + "KS 1% critical " + fmt(crit, 3)};
}

Outcome estimator_consistency() {
  bool ok = true;
  std::string detail;
  for (const auto& [name, m] : {std::pair{"shape-change", lab::fixtures::shape_change()},
                                std::pair{"scale-change", lab::fixtures::scale_change()}}) {
    const auto r = lab::check_estimator_consistency(m, kH, {1, 4, 16}, kSeed + 8, 4, workers());
    ok = ok && r.pass();
    const auto& e = r.metric("sup_error_s_over_s_hat");
    detail += std::string(name) + ": mu " + lab::detail::series_text(r.metric("sup_error_mu_ri")) + "; sigma2 " +
              lab::detail::series_text(r.metric("sup_error_sigma2_ri")) + "; s/s_hat " + lab::detail::series_text(e) +
              (r.pass() ? "" : " [FAIL]") + ". ";
  }
  return {ok, detail};
}

Outcome variance_form() {
  const auto r = lab::check_window_variance_form(lab::fixtures::shape_change(), kH, 1, 2000, kSeed + 9, {}, workers());
  const auto& mix = r.metric("relative_deviation_mixture");
  const auto& pr = r.metric("relative_deviation_printed");
  return {r.pass(), "mixture max dev " + fmt(*std::max_element(mix.begin(), mix.end())) + " (<= 0.02), printed max dev " +
                        fmt(*std::max_element(pr.begin(), pr.end())) + " (> 0.02 somewhere), 2000 replicates at t = " +
                        lab::detail::series_text(r.metric("probe_t"))};
}

Outcome distributional_identity() {
  const auto r = lab::check_alternative_limit(lab::fixtures::shape_change(), kH, {1, 4, 16}, 500, kSeed + 10, workers());
  const double d = r.metric("ks_g_t=500").back();
  const double crit = ks::two_sample_critical_value(0.01, 500, 500);
  return {d <= crit, "KS(G_c - Delta_c Lambda_c, Delta_c L_c) at n=16 is " + fmt(d, 3) + ", 1% critical " + fmt(crit, 3) +
                         "; by level " + lab::detail::series_text(r.metric("ks_g_t=500"))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 level control", level_control},
      {"2 power vs detection bound", power_vs_bound},
      {"3 localization", localization},
      {"4 shark-fin geometry", shark_geometry},
      {"5 scaling law", scaling_law},
      {"6 distortion anchors", distortion_anchors},
      {"7 unit-variance limit marginals", limit_marginals},
      {"8 estimator consistency", estimator_consistency},
      {"9 window variance form", variance_form},
      {"10 distributional identity at c", distributional_identity},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
