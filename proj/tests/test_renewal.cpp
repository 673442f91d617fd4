#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "fdcp/random.hpp"
#include "fdcp/renewal.hpp"

namespace fdcp {
namespace {

EventSequence seq_of(std::vector<double> t, double horizon) { return EventSequence::from_times(std::move(t), horizon); }

TEST(RenewalSpec, GammaMomentsAreExact) {
  const auto s = RenewalSpec::gamma(2.0, 10.0);
  EXPECT_DOUBLE_EQ(s.mu(), 0.2);
  EXPECT_DOUBLE_EQ(s.sigma2(), 0.02);
  const auto e = RenewalSpec::exponential(4.0);
  EXPECT_DOUBLE_EQ(e.mu(), 0.25);
  EXPECT_DOUBLE_EQ(e.sigma2(), 0.0625);
}

TEST(RenewalSpec, RejectsNonPositiveParameters) {
  EXPECT_THROW(RenewalSpec::gamma(0.0, 1.0), ParameterError);
  EXPECT_THROW(RenewalSpec::gamma(1.0, 0.0), ParameterError);
  EXPECT_THROW(RenewalSpec::gamma(1.0, -2.0), ParameterError);
  EXPECT_THROW(RenewalSpec::exponential(0.0), ParameterError);
}

TEST(EventSequence, RejectsDuplicatesAndDisorder) {
  EXPECT_THROW(seq_of({1.0, 1.0, 2.0}, 3.0), ArgumentError);
  EXPECT_THROW(seq_of({1.0, 0.5}, 3.0), ArgumentError);
  EXPECT_THROW(seq_of({0.0, 1.0}, 3.0), ArgumentError);
  EXPECT_THROW(seq_of({1.0, 4.0}, 3.0), ArgumentError);
}

TEST(CountIn, EmptySequenceCountsZero) {
  const auto s = seq_of({}, 10.0);
  EXPECT_EQ(count_in(s, 0.0, 10.0), 0u);
  EXPECT_EQ(count_in(s, 3.0, 3.0), 0u);
}

TEST(CountIn, LeftOpenRightClosed) {
  const auto s = seq_of({1, 2, 3, 4}, 4.0);
  EXPECT_EQ(count_in(s, 1.0, 3.0), 2u);
  EXPECT_EQ(count_in(s, 0.0, 4.0), 4u);
}

TEST(CountIn, RejectsReversedInterval) {
  const auto s = seq_of({1, 2}, 4.0);
  EXPECT_THROW(count_in(s, 3.0, 1.0), ArgumentError);
}

TEST(CountIn, IsAdditive) {
  const auto s = simulate_renewal(RenewalSpec::gamma(1, 1), 200.0, 3);
  for (double a : {0.0, 17.5, 50.0}) {
    for (double b : {60.0, 99.9}) {
      for (double c : {120.0, 200.0}) EXPECT_EQ(count_in(s, a, b) + count_in(s, b, c), count_in(s, a, c));
    }
  }
}

TEST(LifeTimes, HandExamples) {
  EXPECT_EQ(life_times(seq_of({1, 2, 3}, 3.0)), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(life_times(seq_of({0.5, 2.5, 3.0}, 3.0)), (std::vector<double>{0.5, 2.0, 0.5}));
  EXPECT_TRUE(life_times(seq_of({}, 1.0)).empty());
}

TEST(SimulateRenewal, ZeroHorizonIsEmpty) {
  const auto s = simulate_renewal(RenewalSpec::gamma(1, 1), 0.0, 11);
  EXPECT_TRUE(s.empty());
  EXPECT_EQ(s.horizon(), 0.0);
}

TEST(SimulateRenewal, NegativeHorizonIsRejected) {
  EXPECT_THROW(simulate_renewal(RenewalSpec::gamma(1, 1), -1.0, 11), ArgumentError);
}

TEST(SimulateRenewal, RateMatchesMeanLifeTime) {
  const auto s = simulate_renewal(RenewalSpec::gamma(1, 20), 1000.0, 5);
  EXPECT_NEAR(static_cast<double>(s.size()) / 1000.0, 20.0, 0.5);
}

TEST(SimulateRenewal, EmpiricalMeanForShapeTwo) {
  const auto s = simulate_renewal(RenewalSpec::gamma(2, 10), 1e5, 9);
  const auto life = life_times(s);
  const double mean = std::accumulate(life.begin(), life.end(), 0.0) / static_cast<double>(life.size());
  EXPECT_NEAR(mean, 0.2, 0.005);
}

TEST(SimulateRenewal, InvariantsHoldAndRunIsDeterministic) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto a = simulate_renewal(RenewalSpec::gamma(0.5, 2), 300.0, seed);
    const auto b = simulate_renewal(RenewalSpec::gamma(0.5, 2), 300.0, seed);
    ASSERT_EQ(a.size(), b.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a.times()[i], b.times()[i]);
      EXPECT_GT(a.times()[i], prev);
      EXPECT_GT(a.life_times()[i], 0.0);
      EXPECT_LE(a.times()[i], 300.0);
      prev = a.times()[i];
    }
  }
}

TEST(Gamma, MomentsOverManySamples) {
  for (auto [p, l] : {std::pair{2.0, 10.0}, std::pair{0.25, 5.0}, std::pair{20.0, 400.0}}) {
    RandomStream rng(42, "gamma_moments");
    const auto spec = RenewalSpec::gamma(p, l);
    const std::size_t N = 1'000'000;
    double sum = 0.0, sq = 0.0;
    std::vector<double> x(N);
    for (auto& v : x) {
      v = spec.sample(rng);
      sum += v;
    }
    const double mean = sum / N;
    for (double v : x) sq += (v - mean) * (v - mean);
    const double var = sq / (N - 1);
    EXPECT_NEAR(mean, p / l, 3.0 * std::sqrt(p / (l * l) / N)) << "shape " << p;
    EXPECT_NEAR(var / (p / (l * l)), 1.0, 0.05) << "shape " << p;
  }
}

TEST(SimulateCompound, SegmentCountsFollowRates) {
  const ChangePointModel m{RenewalSpec::gamma(1, 1), RenewalSpec::gamma(1, 20), 500.0, 1000.0, 1};
  const auto s = simulate_compound(m, 7);
  EXPECT_NEAR(count_in(s, 0, 500) / 500.0, 1.0, 0.05);
  EXPECT_NEAR(count_in(s, 500, 1000) / 10000.0, 1.0, 0.05);
  EXPECT_EQ(s.horizon(), 1000.0);
}

TEST(SimulateCompound, ChangeAtHorizonReproducesPhi1) {
  const auto phi1 = RenewalSpec::gamma(2, 3);
  const ChangePointModel m{phi1, RenewalSpec::gamma(1, 20), 400.0, 400.0, 1};
  const auto a = simulate_compound(m, 21, 4);
  const auto b = simulate_renewal(phi1, 400.0, 21, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.times()[i], b.times()[i]);
}

TEST(SimulateCompound, ChangeJustBeforeHorizonIsValid) {
  const ChangePointModel m{RenewalSpec::gamma(1, 1), RenewalSpec::gamma(1, 1), 999.99, 1000.0, 1};
  const auto s = simulate_compound(m, 3);
  EXPECT_LE(count_in(s, 999.99, 1000.0), 5u);
}

TEST(SimulateCompound, IdenticalSpecsGiveTheSameLaw) {
  // Mean and variance of counts on (0, 1000] agree with a plain renewal run.
  const auto spec = RenewalSpec::gamma(1, 1);
  const ChangePointModel m{spec, spec, 500.0, 1000.0, 1};
  double sa = 0, sb = 0, qa = 0, qb = 0;
  const int R = 400;
  for (int r = 0; r < R; ++r) {
    const double a = static_cast<double>(simulate_compound(m, 5, r).size());
    const double b = static_cast<double>(simulate_renewal(spec, 1000.0, 6, r).size());
    sa += a, sb += b, qa += a * a, qb += b * b;
  }
  const double ma = sa / R, mb = sb / R;
  EXPECT_NEAR(ma, mb, 4.0 * std::sqrt(2.0 * 1000.0 / R));
  EXPECT_NEAR((qa / R - ma * ma) / (qb / R - mb * mb), 1.0, 0.35);
}

TEST(SimulateCompound, ScaleStretchesTheHorizon) {
  const ChangePointModel m{RenewalSpec::gamma(1, 1), RenewalSpec::gamma(1, 2), 50.0, 100.0, 4};
  const auto s = simulate_compound(m, 1);
  EXPECT_EQ(s.horizon(), 400.0);
  EXPECT_NEAR(count_in(s, 200, 400) / 400.0, 1.0, 0.15);
}

TEST(ChangePointModel, Validation) {
  const auto g = RenewalSpec::gamma(1, 1);
  EXPECT_THROW((ChangePointModel{g, g, 0.0, 10.0, 1}.validate()), ParameterError);
  EXPECT_THROW((ChangePointModel{g, g, 11.0, 10.0, 1}.validate()), ParameterError);
  EXPECT_THROW((ChangePointModel{g, g, 5.0, 10.0, 0}.validate()), ParameterError);
  EXPECT_NO_THROW((ChangePointModel{g, g, 10.0, 10.0, 1}.validate()));
}

TEST(RandomStream, LabelsAndIndicesSeparateStreams) {
  RandomStream a(1, "x", 0), b(1, "x", 1), c(1, "y", 0), d(1, "x", 0);
  const auto va = a.next_u64();
  EXPECT_NE(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
  EXPECT_EQ(va, d.next_u64());
}

TEST(RandomStream, UniformStaysInsideOpenInterval) {
  RandomStream r(3, "u");
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace fdcp
