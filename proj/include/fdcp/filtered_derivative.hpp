#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "fdcp/errors.hpp"
#include "fdcp/renewal.hpp"
#include "fdcp/theory.hpp"
#include "fdcp/window.hpp"

namespace fdcp {

/// Empirical life-time statistics of one window.
///
/// Only life times whose both end points lie in the window enter: for k
/// events that is k - 1 life times, the one straddling the left edge is
/// excluded. mean_hat needs k > 1 and var_hat k > 2; otherwise they are 0.
struct WindowStats {
  double mean_hat = 0.0;
  double var_hat = 0.0;
  std::size_t count = 0;
};

/// Statistics of the events in (lo, hi]. The variance is centred on the
/// same window's mean.
inline WindowStats window_stats(const EventSequence& seq, double lo, double hi) {
  const std::size_t first = seq.count_up_to(lo);
  const std::size_t last = seq.count_up_to(hi);
  WindowStats ws;
  ws.count = last - first;
  if (ws.count <= 1) return ws;

  // 0-based life_times()[i] is xi_{i+1}; the sum runs over xi_{first+2..last}.
  const auto life = seq.life_times().subspan(first + 1, ws.count - 1);
  double sum = 0.0;
  for (double xi : life) sum += xi;
  ws.mean_hat = sum / static_cast<double>(ws.count - 1);
  if (ws.count <= 2) return ws;

  double ss = 0.0;
  for (double xi : life) {
    const double d = xi - ws.mean_hat;
    ss += d * d;
  }
  ws.var_hat = ss / static_cast<double>(ws.count - 2);
  return ws;
}

namespace detail {
inline void check_inside(const EventSequence& seq, double lo, double hi) {
  const double tol = 1e-9 * std::max(1.0, seq.horizon());
  if (lo < -tol || hi > seq.horizon() + tol) {
    throw RangeError("window (" + format_double(lo) + ", " + format_double(hi) +
                     "] leaves the observation horizon");
  }
}
}  // namespace detail

/// Right window (nt, n(t + h)].
inline WindowStats window_stats_right(const EventSequence& seq, double t, double h, int n) {
  const double lo = n * t;
  const double hi = n * (t + h);
  detail::check_inside(seq, lo, hi);
  return window_stats(seq, lo, hi);
}

/// Left window (n(t - h), nt].
inline WindowStats window_stats_left(const EventSequence& seq, double t, double h, int n) {
  const double lo = n * (t - h);
  const double hi = n * t;
  detail::check_inside(seq, lo, hi);
  return window_stats(seq, lo, hi);
}

namespace detail {
/// sigma^2 / mu^3 of one window, 0 under the empty-window convention.
inline double window_dispersion(const WindowStats& ws) {
  if (ws.mean_hat <= 0.0 || ws.var_hat <= 0.0) return 0.0;
  return ws.var_hat / (ws.mean_hat * ws.mean_hat * ws.mean_hat);
}

inline double s_hat_from(const WindowStats& right, const WindowStats& left, double h, int n) {
  return std::sqrt((window_dispersion(right) + window_dispersion(left)) * n * h);
}
}  // namespace detail

/// Locally estimated scaling; 0 means the statistic is undefined at t.
inline double s_hat(const EventSequence& seq, double t, double h, int n) {
  return detail::s_hat_from(window_stats_right(seq, t, h, n), window_stats_left(seq, t, h, n), h, n);
}

/// (N_{n(t+h)} - N_{nt}) - (N_{nt} - N_{n(t-h)}).
inline double count_difference(const EventSequence& seq, double t, double h, int n) {
  const double lo = n * (t - h);
  const double mid = n * t;
  const double hi = n * (t + h);
  detail::check_inside(seq, lo, hi);
  const auto n_lo = static_cast<double>(seq.count_up_to(lo));
  const auto n_mid = static_cast<double>(seq.count_up_to(mid));
  const auto n_hi = static_cast<double>(seq.count_up_to(hi));
  return (n_hi - n_mid) - (n_mid - n_lo);
}

namespace detail {
inline StatisticSeries empty_series(const WindowConfig& cfg, double h, int n) {
  if (n < 1) throw ParameterError("scale n must be a positive integer");
  StatisticSeries s;
  s.grid = cfg.grid(h);
  s.h = h;
  s.n = n;
  s.grid_step = cfg.grid_step();
  s.values.assign(s.grid.size(), 0.0);
  s.valid.assign(s.grid.size(), 1);
  return s;
}
}  // namespace detail

/// Filtered derivative with known life-time parameters.
inline StatisticSeries D_process(const EventSequence& seq, const WindowConfig& cfg, double h, int n,
                                 double mu, double sigma2) {
  if (!(mu > 0.0) || !(sigma2 > 0.0)) throw ParameterError("D needs mu > 0 and sigma2 > 0");
  StatisticSeries s = detail::empty_series(cfg, h, n);
  const double scale = flat_scale(h, n, mu, sigma2);
  for (std::size_t k = 0; k < s.size(); ++k) s.values[k] = count_difference(seq, s.grid[k], h, n) / scale;
  return s;
}

/// Filtered derivative scaled by the local estimate s_hat; grid points with
/// s_hat = 0 are reported as value 0, valid = false.
inline StatisticSeries G_process(const EventSequence& seq, const WindowConfig& cfg, double h, int n) {
  StatisticSeries s = detail::empty_series(cfg, h, n);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = s.grid[k];
    const double sh = s_hat(seq, t, h, n);
    if (!(sh > 0.0)) {
      s.valid[k] = 0;
      continue;
    }
    s.values[k] = count_difference(seq, t, h, n) / sh;
  }
  return s;
}

/// Filtered derivative centred by m and scaled by s of a known change-point model.
inline StatisticSeries Gamma_process(const EventSequence& seq, const WindowConfig& cfg, double h, int n,
                                     const ChangePointModel& model) {
  StatisticSeries s = detail::empty_series(cfg, h, n);
  TheoryParams p{model.phi1.mu(), model.phi2.mu(), model.phi1.sigma2(), model.phi2.sigma2(),
                 model.c, model.T, h, n};
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = s.grid[k];
    s.values[k] = (count_difference(seq, t, h, n) - m_function(t, p)) / s_function(t, p);
  }
  return s;
}

}  // namespace fdcp
