#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "besmn/doublespend.hpp"

using namespace besmn;

namespace {
const MinerPower kPower(0.3, 0.7);
const ConfirmationDepth kDepth(2);
}  // namespace

TEST_SUITE("doublespend") {

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(MinerPower(0.0, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(MinerPower(0.3, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConfirmationDepth(0), std::invalid_argument);
  CHECK_THROWS_AS(hitting_pmf(kDepth, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(hitting_pmf(kDepth, 1.0, 1), std::domain_error);
  CHECK_THROWS_AS(hitting_pmf(kDepth, 0.3, -1), std::invalid_argument);
  CHECK_THROWS_AS(hitting_distribution(kDepth, kPower, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(success_probability(kDepth, MinerPower(0.7, 0.3)), std::domain_error);
  CHECK_THROWS_AS(success_probability(kDepth, MinerPower(0.5, 0.5)), std::domain_error);
}

TEST_CASE("first-passage pmf closed form at hand-checked points") {
  // k=2, p=0.3: P(N=2) = p^2; P(N=4) = (2/4) C(4,3) p^3 q.
  CHECK(hitting_pmf(kDepth, 0.3, 0) == doctest::Approx(0.09).epsilon(1e-13));
  CHECK(hitting_pmf(kDepth, 0.3, 1) == doctest::Approx(0.0378).epsilon(1e-13));
  // k=1: the path counts are the Catalan numbers 1, 1, 2, 5, 14.
  const long long catalan[] = {1, 1, 2, 5, 14};
  for (int i = 0; i < 5; ++i) {
    const double expect = static_cast<double>(catalan[i]) * std::pow(0.3, 1 + i) *
                          std::pow(0.7, i);
    CHECK(hitting_pmf(ConfirmationDepth(1), 0.3, i) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("recursion table matches the closed form across k and p") {
  for (int k : {1, 2, 3}) {
    for (double p : {0.1, 0.3, 0.45}) {
      const MinerPower power(p, 1.0 - p);
      const HittingDistribution dist = hitting_distribution(ConfirmationDepth(k), power, 1e-12);
      REQUIRE(dist.max_index() >= 5);
      for (int i = 0; i <= dist.max_index(); ++i) {
        const double closed = hitting_pmf(ConfirmationDepth(k), p, i);
        CHECK(dist.g[static_cast<std::size_t>(i)] ==
              doctest::Approx(closed).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("hitting table truncation accounting") {
  const HittingDistribution dist = hitting_distribution(kDepth, kPower, 1e-12);
  CHECK(dist.max_index() == 118);
  CHECK(dist.tail_bound < 1e-12);
  CHECK(dist.G.back() == doctest::Approx(9.0 / 49.0).epsilon(1e-11));
  for (std::size_t i = 1; i < dist.G.size(); ++i) CHECK(dist.G[i] >= dist.G[i - 1]);
}

TEST_CASE("supercritical attacker reaches the lead with certainty") {
  const MinerPower strong(0.7, 0.3);
  const HittingDistribution dist = hitting_distribution(ConfirmationDepth(1), strong, 1e-10);
  CHECK(dist.G.back() == doctest::Approx(1.0).epsilon(1e-8));
  // Balanced race: total mass 1 with a heavy i^(-3/2) tail; a loose tol keeps
  // the table short while the cumulative mass approaches 1 from below.
  const HittingDistribution critical =
      hitting_distribution(ConfirmationDepth(1), MinerPower(0.5, 0.5), 1e-4);
  CHECK(critical.G.back() > 0.95);
  CHECK(critical.G.back() <= 1.0);
}

TEST_CASE("success probability closed form") {
  CHECK(success_probability(kDepth, kPower) == doctest::Approx(9.0 / 49.0).epsilon(1e-14));
  CHECK(success_probability(ConfirmationDepth(1), kPower) ==
        doctest::Approx(3.0 / 7.0).epsilon(1e-14));
  CHECK(success_probability(ConfirmationDepth(6), MinerPower(0.1, 0.9)) ==
        doctest::Approx(std::pow(1.0 / 9.0, 6)).epsilon(1e-12));
}

TEST_CASE("transmission-time values frozen against an independent evaluation") {
  const HittingDistribution dist = hitting_distribution(kDepth, kPower, 1e-14);
  CHECK(tk_pmf(1.0, dist, kPower) == doctest::Approx(0.0227797659294743).epsilon(1e-9));
  CHECK(tk_cdf(60.0, dist, kPower) == doctest::Approx(0.18362620469648172).epsilon(1e-9));
  CHECK(tk_cdf(0.0, dist, kPower) == 0.0);
  CHECK(tk_pmf(0.0, dist, kPower) == 0.0);
}

TEST_CASE("CDF grid is monotone and converges to the success probability") {
  const TransmissionTimeDistribution ttd(kDepth, kPower);
  const double succ = ttd.success_prob();
  CHECK(succ == doctest::Approx(9.0 / 49.0).epsilon(1e-14));
  for (int s = 1; s <= ttd.s_max(); ++s) {
    CHECK(ttd.cdf_at(s) >= ttd.cdf_at(s - 1));
    CHECK(ttd.cdf_at(s) <= succ);
  }
  CHECK(succ - ttd.cdf_at(ttd.s_max()) < 1e-10);
  CHECK(ttd.cdf_at(-1) == 0.0);
  CHECK(ttd.cdf_at(ttd.s_max() + 50) == ttd.cdf_at(ttd.s_max()));
  // Cell masses are CDF first differences, so they telescope back to it.
  double sum = 0.0;
  for (int s = 0; s <= ttd.s_max(); ++s) sum += ttd.mass_at(s);
  CHECK(sum == doctest::Approx(ttd.cdf_at(ttd.s_max())).epsilon(1e-12));
  CHECK(ttd.mass_at(2) == doctest::Approx(0.034690692597538125).epsilon(1e-9));
}

TEST_CASE("distribution construction rejects races the inverse sampler cannot close") {
  CHECK_THROWS_AS(TransmissionTimeDistribution(kDepth, MinerPower(0.7, 0.3)), std::domain_error);
  CHECK_THROWS_AS(TransmissionTimeDistribution(kDepth, kPower, -1.0), std::invalid_argument);
}

TEST_CASE("degenerate table puts all mass at one grid point") {
  const auto ttd = TransmissionTimeDistribution::degenerate(4, 0.6);
  CHECK(ttd.s_max() == 4);
  CHECK(ttd.success_prob() == 0.6);
  CHECK(ttd.cdf_at(3) == 0.0);
  CHECK(ttd.cdf_at(4) == 0.6);
  CHECK(ttd.mass_at(4) == 0.6);
  CHECK(ttd.mass_at(2) == 0.0);
  Rng rng(5, Stream::Sampling);
  int finite = 0;
  for (int i = 0; i < 20000; ++i) {
    const double t = ttd.sample(rng);
    if (t == kInfiniteTime) continue;
    ++finite;
    CHECK(t == 4.0);
  }
  CHECK(std::abs(finite / 20000.0 - 0.6) < 0.015);
  CHECK_THROWS_AS(TransmissionTimeDistribution::degenerate(-1), std::invalid_argument);
  CHECK_THROWS_AS(TransmissionTimeDistribution::degenerate(0, 1.5), std::invalid_argument);
}

TEST_CASE("inverse sampling is reproducible and lands on the grid") {
  const TransmissionTimeDistribution ttd(kDepth, kPower);
  Rng a(9, Stream::Sampling), b(9, Stream::Sampling);
  for (int i = 0; i < 5000; ++i) {
    const double x = ttd.sample(a);
    CHECK(x == ttd.sample(b));
    if (x != kInfiniteTime) {
      CHECK(x >= 0.0);
      CHECK(x <= ttd.s_max());
      CHECK(x == std::floor(x));
    }
  }
}

TEST_CASE("direct race simulation edge cases") {
  Rng rng(11, Stream::Sampling);
  // No honest miners: the lead grows by one per event, absorbing at k.
  for (int i = 0; i < 200; ++i) {
    const double t = monte_carlo_race(rng, 1, 2.0, 0.0, 1e9);
    CHECK(t > 0.0);
    CHECK(t < 1e9);
  }
  // No dishonest miners: the lead only falls; the horizon ends the race.
  for (int i = 0; i < 200; ++i)
    CHECK(monte_carlo_race(rng, 1, 0.0, 2.0, 50.0) == kInfiniteTime);
  CHECK_THROWS_AS(monte_carlo_race(rng, 0, 1.0, 1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_race(rng, 1, 0.0, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_race(rng, 1, 1.0, 1.0, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
