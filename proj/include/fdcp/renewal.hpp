#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdcp/errors.hpp"
#include "fdcp/random.hpp"

namespace fdcp {

/// Life-time law of a renewal process, together with its mean and variance.
class RenewalSpec {
 public:
  enum class Family { gamma, exponential, generic };
  using Sampler = std::function<double(RandomStream&)>;

  /// Gamma(shape, rate): mean shape/rate, variance shape/rate^2.
  static RenewalSpec gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
      throw ParameterError("gamma life times need shape > 0 and rate > 0");
    }
    RenewalSpec s(Family::gamma, shape / rate, shape / (rate * rate));
    s.shape_ = shape;
    s.rate_ = rate;
    return s;
  }

  static RenewalSpec exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      throw ParameterError("exponential life times need rate > 0");
    }
    RenewalSpec s(Family::exponential, 1.0 / rate, 1.0 / (rate * rate));
    s.shape_ = 1.0;
    s.rate_ = rate;
    return s;
  }

  /// Any i.i.d. positive law. The caller vouches that `sampler` draws from a
  /// distribution with the stated mean and variance.
  static RenewalSpec generic(std::string id, double mu, double sigma2, Sampler sampler) {
    if (!(mu > 0.0) || !(sigma2 > 0.0)) {
      throw ParameterError("generic life times need mu > 0 and sigma2 > 0");
    }
    if (!sampler) throw ParameterError("generic life times need a sampler");
    RenewalSpec s(Family::generic, mu, sigma2);
    s.id_ = std::move(id);
    s.sampler_ = std::make_shared<const Sampler>(std::move(sampler));
    return s;
  }

  Family family() const noexcept { return family_; }
  double mu() const noexcept { return mu_; }
  double sigma2() const noexcept { return sigma2_; }
  double shape() const noexcept { return shape_; }
  double rate() const noexcept { return rate_; }
  const std::string& id() const noexcept { return id_; }

  /// sigma^2 / mu^3, the variance rate of the counting process.
  double dispersion() const noexcept { return sigma2_ / (mu_ * mu_ * mu_); }

  double sample(RandomStream& rng) const {
    switch (family_) {
      case Family::gamma:
        return rng.gamma(shape_, rate_);
      case Family::exponential:
        return rng.exponential(rate_);
      case Family::generic:
        break;
    }
    const double x = (*sampler_)(rng);
    if (!(x > 0.0)) throw ParameterError("generic sampler '" + id_ + "' produced a non-positive life time");
    return x;
  }

 private:
  RenewalSpec(Family f, double mu, double sigma2) : family_(f), mu_(mu), sigma2_(sigma2) {}

  Family family_;
  double mu_;
  double sigma2_;
  double shape_ = 0.0;
  double rate_ = 0.0;
  std::string id_;
  std::shared_ptr<const Sampler> sampler_;
};

/// Events 0 < S_1 <= S_2 <= ... <= horizon with their life times.
///
/// Built from explicit times the sequence must be strictly increasing.
/// Built from life times it keeps the exact (positive) life times, so event
/// times that coincide after rounding are tolerated.
class EventSequence {
 public:
  EventSequence() = default;

  static EventSequence from_times(std::vector<double> times, double horizon) {
    check_horizon(horizon);
    std::vector<double> life(times.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double s = times[i];
      if (!std::isfinite(s) || !(s > 0.0)) {
        throw ArgumentError("event " + std::to_string(i + 1) + " is not a positive time");
      }
      if (i > 0 && !(s > prev)) {
        throw ArgumentError("event " + std::to_string(i + 1) +
                            (s == prev ? " duplicates the previous event time"
                                       : " is not increasing"));
      }
      if (s > horizon) {
        throw ArgumentError("event " + std::to_string(i + 1) + " lies beyond the horizon");
      }
      life[i] = s - prev;
      prev = s;
    }
    return EventSequence(std::move(times), std::move(life), horizon);
  }

  static EventSequence from_life_times(std::vector<double> life, double horizon) {
    check_horizon(horizon);
    std::vector<double> times(life.size());
    double s = 0.0;
    for (std::size_t i = 0; i < life.size(); ++i) {
      if (!(life[i] > 0.0) || !std::isfinite(life[i])) {
        throw ArgumentError("life time " + std::to_string(i + 1) + " is not positive");
      }
      s += life[i];
      times[i] = s;
    }
    if (!times.empty() && times.back() > horizon) {
      throw ArgumentError("events extend beyond the horizon");
    }
    return EventSequence(std::move(times), std::move(life), horizon);
  }

  /// Times and life times recorded side by side by a simulator; times must be
  /// non-decreasing and life times positive.
  static EventSequence from_parts(std::vector<double> times, std::vector<double> life,
                                  double horizon) {
    check_horizon(horizon);
    if (times.size() != life.size()) throw ArgumentError("times and life times differ in length");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!(life[i] > 0.0) || !std::isfinite(life[i])) {
        throw ArgumentError("life time " + std::to_string(i + 1) + " is not positive");
      }
      if (!(times[i] > 0.0) || (i > 0 && times[i] < times[i - 1]) || times[i] > horizon) {
        throw ArgumentError("event " + std::to_string(i + 1) + " is out of order or range");
      }
    }
    return EventSequence(std::move(times), std::move(life), horizon);
  }

  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> life_times() const noexcept { return life_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  /// N_t = #{j : S_j <= t}.
  std::size_t count_up_to(double t) const {
    return static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) -
                                    times_.begin());
  }

 private:
  EventSequence(std::vector<double> times, std::vector<double> life, double horizon)
      : times_(std::move(times)), life_(std::move(life)), horizon_(horizon) {}

  static void check_horizon(double horizon) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
      throw ArgumentError("horizon must be a finite non-negative time");
    }
  }

  std::vector<double> times_;
  std::vector<double> life_;
  double horizon_ = 0.0;
};

/// N_b - N_a: events in the left-open, right-closed interval (a, b].
inline std::size_t count_in(const EventSequence& seq, double a, double b) {
  if (a > b) throw ArgumentError("count_in needs a <= b");
  return seq.count_up_to(b) - seq.count_up_to(a);
}

inline std::vector<double> life_times(const EventSequence& seq) {
  const auto life = seq.life_times();
  return {life.begin(), life.end()};
}

/// One rate change at nc: Phi1 on (0, nc], an independent Phi2 on (nc, nT].
struct ChangePointModel {
  RenewalSpec phi1;
  RenewalSpec phi2;
  double c;
  double T;
  int n = 1;

  /// c == T is accepted and means no change inside the horizon.
  void validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("T must be positive");
    if (!(c > 0.0) || c > T) throw ParameterError("change point c must lie in (0, T]");
    if (n < 1) throw ParameterError("scale n must be a positive integer");
  }

  /// Mirror image under t -> T - t: Phi2 first, change at T - c.
  ChangePointModel reflected() const { return {phi2, phi1, T - c, T, n}; }
};

namespace detail {

inline constexpr std::string_view kPhi1Stream = "phi1";
inline constexpr std::string_view kPhi2Stream = "phi2";

/// Life times of a renewal process started at 0, up to and including `horizon`.
inline std::vector<double> renewal_life_times(const RenewalSpec& spec, double horizon,
                                              RandomStream& rng) {
  std::vector<double> life;
  if (horizon <= 0.0) return life;
  life.reserve(static_cast<std::size_t>(horizon / spec.mu() * 1.05) + 16);
  double s = 0.0;
  for (;;) {
    const double xi = spec.sample(rng);
    s += xi;
    if (s > horizon) break;
    life.push_back(xi);
  }
  return life;
}

}  // namespace detail

inline EventSequence simulate_renewal(const RenewalSpec& spec, double horizon, RandomStream& rng) {
  if (!(horizon >= 0.0)) throw ArgumentError("horizon must be non-negative");
  return EventSequence::from_life_times(detail::renewal_life_times(spec, horizon, rng), horizon);
}

/// Draws on the Phi1 substream of `seed`, the same stream simulate_compound
/// uses for the segment before the change point.
inline EventSequence simulate_renewal(const RenewalSpec& spec, double horizon, std::uint64_t seed,
                                      std::uint64_t replicate = 0) {
  RandomStream rng(seed, detail::kPhi1Stream, replicate);
  return simulate_renewal(spec, horizon, rng);
}

inline EventSequence simulate_compound(const ChangePointModel& model, std::uint64_t seed,
                                       std::uint64_t replicate = 0) {
  model.validate();
  const double horizon = model.n * model.T;
  const double split = model.n * model.c;

  RandomStream rng1(seed, detail::kPhi1Stream, replicate);
  std::vector<double> life = detail::renewal_life_times(model.phi1, split, rng1);
  std::vector<double> times(life.size());
  double last = 0.0;
  for (std::size_t i = 0; i < life.size(); ++i) {
    last += life[i];
    times[i] = last;
  }
  if (split >= horizon) return EventSequence::from_parts(std::move(times), std::move(life), horizon);

  // Phi2 runs from time 0 so its first event after nc is a genuine forward
  // recurrence, not a fresh renewal started at nc.
  RandomStream rng2(seed, detail::kPhi2Stream, replicate);
  double s = 0.0;
  bool first = true;
  for (;;) {
    const double xi = model.phi2.sample(rng2);
    s += xi;
    if (s > horizon) break;
    if (s <= split) continue;
    life.push_back(first ? s - last : xi);
    times.push_back(s);
    first = false;
  }
  return EventSequence::from_parts(std::move(times), std::move(life), horizon);
}

}  // namespace fdcp
