#pragma once

// Closed-form objects describing the filtered derivative around one change
// point: the expectation hat m, the scaling s, the shark fin m / s, the
// window-mixture parameters seen by the local estimators, the distortion
// s / s~, the Gaussian limit process L and the detection-probability bound.

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "fdcp/errors.hpp"
#include "fdcp/normal.hpp"
#include "fdcp/random.hpp"
#include "fdcp/renewal.hpp"
#include "fdcp/window.hpp"

namespace fdcp {

struct TheoryParams {
  double mu1;
  double mu2;
  double sigma1_sq;
  double sigma2_sq;
  double c;
  double T;
  double h;
  int n = 1;

  static TheoryParams from_model(const ChangePointModel& m, double h) {
    TheoryParams p{m.phi1.mu(), m.phi2.mu(), m.phi1.sigma2(), m.phi2.sigma2(), m.c, m.T, h, m.n};
    p.validate();
    return p;
  }

  static TheoryParams from_specs(const RenewalSpec& phi1, const RenewalSpec& phi2, double c,
                                 double T, double h, int n = 1) {
    TheoryParams p{phi1.mu(), phi2.mu(), phi1.sigma2(), phi2.sigma2(), c, T, h, n};
    p.validate();
    return p;
  }

  void validate() const {
    if (!(mu1 > 0.0) || !(mu2 > 0.0) || !(sigma1_sq > 0.0) || !(sigma2_sq > 0.0)) {
      throw ParameterError("means and variances must be positive");
    }
    if (!(T > 0.0) || !(c > 0.0) || !(c < T)) throw ParameterError("need 0 < c < T");
    if (!(h > 0.0) || h > T / 2.0) throw ParameterError("window size h must lie in (0, T/2]");
    if (n < 1) throw ParameterError("scale n must be a positive integer");
  }

  double dispersion1() const noexcept { return sigma1_sq / (mu1 * mu1 * mu1); }
  double dispersion2() const noexcept { return sigma2_sq / (mu2 * mu2 * mu2); }

  TheoryParams with_scale(int scale) const {
    TheoryParams p = *this;
    p.n = scale;
    return p;
  }

  TheoryParams with_window(double window) const {
    TheoryParams p = *this;
    p.h = window;
    return p;
  }

  /// Mirror image under t -> T - t.
  TheoryParams reflected() const { return {mu2, mu1, sigma2_sq, sigma1_sq, T - c, T, h, n}; }
};

/// Expectation of the count difference (right minus left window).
inline double m_function(double t, const TheoryParams& p) {
  const double d = std::abs(t - p.c);
  if (d > p.h) return 0.0;
  return p.n * (1.0 / p.mu2 - 1.0 / p.mu1) * (p.h - d);
}

/// Constant scaling sqrt(2 n h sigma^2 / mu^3) of a process without change.
inline double flat_scale(double h, int n, double mu, double sigma2) {
  return std::sqrt(2.0 * n * h * sigma2 / (mu * mu * mu));
}

/// Standard deviation of the count difference; linear interpolation of the
/// variance across [c - h, c + h].
inline double s_function(double t, const TheoryParams& p) {
  if (p.dispersion1() == p.dispersion2() || t < p.c - p.h) {
    return flat_scale(p.h, p.n, p.mu1, p.sigma1_sq);
  }
  if (t > p.c + p.h) return flat_scale(p.h, p.n, p.mu2, p.sigma2_sq);
  return std::sqrt(p.n * ((t + p.h - p.c) * p.dispersion2() + (p.c - (t - p.h)) * p.dispersion1()));
}

inline double shark_fin(double t, const TheoryParams& p) { return m_function(t, p) / s_function(t, p); }

/// |Lambda_c| = |1/mu2 - 1/mu1| / sqrt(sigma2^2/mu2^3 + sigma1^2/mu1^3) * sqrt(n h).
inline double shark_height(const TheoryParams& p) {
  return std::abs(1.0 / p.mu2 - 1.0 / p.mu1) / std::sqrt(p.dispersion2() + p.dispersion1()) *
         std::sqrt(p.n * p.h);
}

enum class SharkShape { flat, hat, west_fin, east_fin, west_fin_inverted, east_fin_inverted };

inline std::string_view to_string(SharkShape s) {
  switch (s) {
    case SharkShape::flat: return "flat";
    case SharkShape::hat: return "hat";
    case SharkShape::west_fin: return "west_fin";
    case SharkShape::east_fin: return "east_fin";
    case SharkShape::west_fin_inverted: return "west_fin_inverted";
    case SharkShape::east_fin_inverted: return "east_fin_inverted";
  }
  return "unknown";
}

namespace detail {
inline bool rel_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }
}  // namespace detail

/// Orientation of the shark fin: m >= 0 (rate increase) points it up, a
/// growing scale s sends it west.
inline SharkShape classify_shark(const TheoryParams& p) {
  if (detail::rel_equal(p.mu1, p.mu2)) return SharkShape::flat;
  if (detail::rel_equal(p.dispersion1(), p.dispersion2())) return SharkShape::hat;
  const bool up = p.mu2 < p.mu1;
  const bool increasing = p.dispersion2() > p.dispersion1();
  if (up) return increasing ? SharkShape::west_fin : SharkShape::east_fin;
  return increasing ? SharkShape::west_fin_inverted : SharkShape::east_fin_inverted;
}

/// Which closed form to use for the variance of life times in a window that
/// straddles the change point.
enum class VarianceForm {
  mixture,  ///< two-component mixture variance, between-term (mu1 - mu2)^2
  printed,  ///< the published variant with (mu1 + mu2)^2, kept for comparison
};

/// Asymptotic mean and variance of the life times observed in one window.
struct WindowLaw {
  double mu;
  double sigma2;
};

/// Life-time law seen in the window (lo, lo + h]. Its share of length before
/// c is f1 and after c is f2; the life times form a mixture with weights
/// proportional to f1 / mu1 and f2 / mu2.
inline WindowLaw window_law(double lo, const TheoryParams& p, VarianceForm form = VarianceForm::mixture) {
  const double f1 = std::clamp(p.c - lo, 0.0, p.h);
  const double f2 = p.h - f1;
  if (f2 <= 0.0) return {p.mu1, p.sigma1_sq};
  if (f1 <= 0.0) return {p.mu2, p.sigma2_sq};
  const double a = f1 * p.mu2;
  const double b = f2 * p.mu1;
  const double ab = a + b;
  const double mu = p.h * p.mu1 * p.mu2 / ab;
  if (form == VarianceForm::printed) {
    const double s1 = std::sqrt(p.sigma1_sq);
    const double s2 = std::sqrt(p.sigma2_sq);
    const double cross = f2 * p.mu1 * s2 + f1 * p.mu2 * s1;
    const double num = p.mu1 * p.mu2 * f2 * f1 *
                           ((s1 - s2) * (s1 - s2) + (p.mu1 + p.mu2) * (p.mu1 + p.mu2)) +
                       cross * cross;
    return {mu, num / (ab * ab)};
  }
  const double dmu = p.mu1 - p.mu2;
  return {mu, (a * p.sigma1_sq + b * p.sigma2_sq) / ab + a * b * dmu * dmu / (ab * ab)};
}

inline double mu_ri_theory(double t, const TheoryParams& p) { return window_law(t, p).mu; }
inline double mu_le_theory(double t, const TheoryParams& p) { return window_law(t - p.h, p).mu; }

inline double sigma2_ri_theory(double t, const TheoryParams& p, VarianceForm form = VarianceForm::mixture) {
  return window_law(t, p, form).sigma2;
}
inline double sigma2_le_theory(double t, const TheoryParams& p, VarianceForm form = VarianceForm::mixture) {
  return window_law(t - p.h, p, form).sigma2;
}

/// The estimated scaling with the window parameters replaced by their limits.
inline double s_tilde(double t, const TheoryParams& p, VarianceForm form = VarianceForm::mixture) {
  const WindowLaw ri = window_law(t, p, form);
  const WindowLaw le = window_law(t - p.h, p, form);
  return std::sqrt((ri.sigma2 / (ri.mu * ri.mu * ri.mu) + le.sigma2 / (le.mu * le.mu * le.mu)) *
                   p.n * p.h);
}

/// Delta_t = s_t / s~_t at unit scale; 1 away from the change and at c.
inline double distortion(double t, const TheoryParams& p) {
  // Both identities hold exactly; short-circuit so rounding cannot break them.
  if (std::abs(t - p.c) > p.h || p.mu1 == p.mu2) return 1.0;
  const TheoryParams unit = p.with_scale(1);
  return s_function(t, unit) / s_tilde(t, unit);
}

/// Lower bound 1 - F(Q - |Lambda_c|) on P(max |D| > Q).
inline double detection_bound(double Q, const TheoryParams& p) {
  if (!(Q >= 0.0)) throw ArgumentError("threshold Q must be non-negative");
  return normal_sf(Q - shark_height(p));
}

/// L_t evaluated on a Brownian path `W` (any callable time -> value).
template <class Path>
double limit_value(double t, const TheoryParams& p, Path&& W) {
  const double h = p.h;
  const double c = p.c;
  const double a1 = p.dispersion1();
  const double a2 = p.dispersion2();
  if (std::abs(t - c) > h || a1 == a2) {
    return ((W(t + h) - W(t)) - (W(t) - W(t - h))) / std::sqrt(2.0 * h);
  }
  const double scale = s_function(t, p.with_scale(1));
  if (t <= c) {
    return (std::sqrt(a2) * (W(t + h) - W(c)) + std::sqrt(a1) * ((W(c) - W(t)) - (W(t) - W(t - h)))) /
           scale;
  }
  return (std::sqrt(a2) * ((W(t + h) - W(t)) - (W(t) - W(c))) - std::sqrt(a1) * (W(c) - W(t - h))) /
         scale;
}

/// One discretized path of L on the grid of window p.h.
///
/// The Brownian motion lives on a lattice of step grid_step through the grid
/// nodes; h must be a whole number of steps and, whenever a grid node sees the
/// change point, c must sit on the lattice.
inline StatisticSeries simulate_L(const WindowConfig& cfg, const TheoryParams& p, RandomStream& rng) {
  p.validate();
  const double step = cfg.grid_step();
  const double ratio = p.h / step;
  if (!detail::near_integer(ratio)) {
    throw ConfigurationError("grid step must divide the window size h");
  }
  const auto H = static_cast<long long>(std::llround(ratio));

  StatisticSeries out;
  out.grid = cfg.grid(p.h);
  out.h = p.h;
  out.n = 1;
  out.grid_step = step;
  out.values.assign(out.grid.size(), 0.0);
  out.valid.assign(out.grid.size(), 1);
  if (out.grid.empty()) return out;

  const double base = out.grid.front() - p.h;
  const bool sees_change = p.dispersion1() != p.dispersion2() &&
                           std::any_of(out.grid.begin(), out.grid.end(),
                                       [&](double t) { return std::abs(t - p.c) <= p.h; });
  if (sees_change && !detail::near_integer((p.c - base) / step)) {
    throw ConfigurationError("change point c is not aligned with the evaluation grid");
  }

  const std::size_t nodes = out.grid.size() + 2 * static_cast<std::size_t>(H);
  std::vector<double> path(nodes);
  const double sd = std::sqrt(step);
  path[0] = 0.0;
  for (std::size_t j = 1; j < nodes; ++j) path[j] = path[j - 1] + sd * rng.normal();

  auto W = [&](double time) {
    const auto idx = std::llround((time - base) / step);
    return path[static_cast<std::size_t>(std::clamp<long long>(idx, 0, static_cast<long long>(nodes) - 1))];
  };
  for (std::size_t k = 0; k < out.grid.size(); ++k) out.values[k] = limit_value(out.grid[k], p, W);
  return out;
}

inline StatisticSeries simulate_L(const WindowConfig& cfg, const TheoryParams& p, std::uint64_t seed,
                                  std::uint64_t replicate = 0) {
  RandomStream rng(seed, "limit_path", replicate);
  return simulate_L(cfg, p, rng);
}

/// Exact joint draw of (L_t) at arbitrary times, sampling the Brownian motion
/// only where the statistic reads it.
inline std::vector<double> sample_L_at(const TheoryParams& p, std::span<const double> times,
                                       RandomStream& rng) {
  std::vector<double> knots;
  knots.reserve(3 * times.size() + 1);
  for (double t : times) {
    knots.push_back(t - p.h);
    knots.push_back(t);
    knots.push_back(t + p.h);
  }
  knots.push_back(p.c);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<double> path(knots.size(), 0.0);
  for (std::size_t j = 1; j < knots.size(); ++j) {
    path[j] = path[j - 1] + std::sqrt(knots[j] - knots[j - 1]) * rng.normal();
  }
  auto W = [&](double time) {
    const auto it = std::lower_bound(knots.begin(), knots.end(), time);
    return path[static_cast<std::size_t>(it - knots.begin())];
  };
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(limit_value(t, p, W));
  return out;
}

}  // namespace fdcp
