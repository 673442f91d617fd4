#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdcp/errors.hpp"

namespace fdcp {

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

/// True when x is within a relative 1e-9 of an integer.
inline bool near_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

}  // namespace detail

/// Window sizes and the evaluation grid over each analysis region [h, T - h].
///
/// The grid is uniform with step `grid_step` and passes through `anchor`
/// (the change point in lab use); without an anchor it starts at h.
class WindowConfig {
 public:
  WindowConfig(double T, std::vector<double> h_set, double grid_step,
               std::optional<double> anchor = std::nullopt)
      : T_(T), h_set_(std::move(h_set)), step_(grid_step), anchor_(anchor) {
    if (!(T_ > 0.0) || !std::isfinite(T_)) throw ParameterError("T must be positive");
    if (h_set_.empty()) throw ParameterError("window set must not be empty");
    if (!(step_ > 0.0) || !std::isfinite(step_)) throw ParameterError("grid step must be positive");
    for (double h : h_set_) check_window(h);
    std::sort(h_set_.begin(), h_set_.end());
    h_set_.erase(std::unique(h_set_.begin(), h_set_.end()), h_set_.end());
  }

  /// Single window with the default step h / 50.
  static WindowConfig single(double T, double h, std::optional<double> anchor = std::nullopt) {
    return WindowConfig(T, {h}, h / 50.0, anchor);
  }

  double T() const noexcept { return T_; }
  std::span<const double> h_set() const noexcept { return h_set_; }
  double grid_step() const noexcept { return step_; }
  std::optional<double> anchor() const noexcept { return anchor_; }

  std::vector<double> grid(double h) const {
    check_window(h);
    const double a = anchor_.value_or(h);
    const double lo = h;
    const double hi = T_ - h;
    const auto k_min = static_cast<long long>(std::ceil((lo - a) / step_ - 1e-9));
    const auto k_max = static_cast<long long>(std::floor((hi - a) / step_ + 1e-9));
    std::vector<double> out;
    if (k_max < k_min) return out;
    out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (long long k = k_min; k <= k_max; ++k) {
      out.push_back(std::clamp(a + static_cast<double>(k) * step_, lo, hi));
    }
    return out;
  }

 private:
  void check_window(double h) const {
    if (!(h > 0.0) || h > T_ / 2.0) throw ParameterError("window size h must lie in (0, T/2]");
  }

  double T_;
  std::vector<double> h_set_;
  double step_;
  std::optional<double> anchor_;
};

/// A statistic path over the grid of one window size. Points flagged invalid
/// carry value 0 and must be ignored by consumers.
struct StatisticSeries {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
  double h = 0.0;
  int n = 1;
  double grid_step = 0.0;

  std::size_t size() const noexcept { return grid.size(); }
  bool is_valid(std::size_t i) const noexcept { return valid[i] != 0; }

  void write_csv(std::ostream& out) const {
    out << "# h=" << detail::format_double(h) << ",n=" << n
        << ",delta=" << detail::format_double(grid_step) << "\r\n";
    out << "t,value,valid\r\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << detail::format_double(grid[i]) << ',' << detail::format_double(values[i]) << ','
          << (valid[i] ? 1 : 0) << "\r\n";
    }
  }
};

}  // namespace fdcp
