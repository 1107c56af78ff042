#include <doctest.h>

#include <cmath>
#include <limits>

#include "hardmdp/info_theory.hpp"
#include "hardmdp/instances.hpp"
#include "test_support.hpp"

using namespace hardmdp;
using hardmdp::testing::treeParams;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("Bernoulli KL") {
  CHECK(klBernoulli(0.3, 0.3) == 0.0);
  CHECK(klBernoulli(0.5, 0.75) == doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-15));
  CHECK(klBernoulli(0.5, 1.0) == kInf);
  CHECK(klBernoulli(0.0, 0.3) == doctest::Approx(std::log(1.0 / 0.7)).epsilon(1e-15));
  CHECK(klBernoulli(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(klBernoulli(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(klBernoulli(0.5, 1.5), std::invalid_argument);
  for (double p = 0.01; p < 1.0; p += 0.01)
    for (double q = 0.01; q < 1.0; q += 0.01) {
      double kl = klBernoulli(p, q);
      REQUIRE(kl >= 0.0);
      if (std::abs(p - q) > 1e-12) REQUIRE(kl > 0.0);
    }
}

TEST_CASE("categorical KL") {
  std::vector<double> u{0.5, 0.5};
  std::vector<double> boosted{0.6, 0.4};
  CHECK(klCategorical(u, u) == 0.0);
  CHECK(klCategorical(boosted, u) == doctest::Approx(klBernoulli(0.6, 0.5)).epsilon(1e-15));
  std::vector<double> pointMass{1.0, 0.0};
  CHECK(klCategorical(pointMass, u) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(klCategorical(u, pointMass) == kInf);
  std::vector<double> three{0.2, 0.3, 0.5};
  CHECK_THROWS_AS(klCategorical(u, three), std::invalid_argument);
  std::vector<double> nonProb{0.4, 0.4};
  CHECK_THROWS_AS(klCategorical(nonProb, u), std::invalid_argument);
}

TEST_CASE("Pinsker check") {
  PinskerResult example = pinskerCheck(0.5, 0.6);
  CHECK(example.lhs == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(example.rhs == doctest::Approx(0.0102054986300637824).epsilon(1e-12));
  CHECK(example.holds);
  CHECK(pinskerCheck(0.42, 0.42).lhs == 0.0);
  CHECK(pinskerCheck(0.42, 0.42).holds);
  for (double p = 0.01; p < 1.0; p += 0.01)
    for (double q = 0.01; q < 1.0; q += 0.01) REQUIRE(pinskerCheck(p, q).holds);
}

TEST_CASE("kl(1/2, 1/2+eps) bound and closed form") {
  BoundPair zero = klEpsilonBound(0.0);
  CHECK(zero.kl == 0.0);
  CHECK(zero.bound == 0.0);
  BoundPair quarter = klEpsilonBound(0.25);
  CHECK(quarter.kl == doctest::Approx(0.14384103622589046).epsilon(1e-12));
  CHECK(quarter.kl <= quarter.bound);
  BoundPair tenth = klEpsilonBound(0.1);
  CHECK(tenth.kl == doctest::Approx(0.020410997260127565).epsilon(1e-12));
  CHECK_THROWS_AS(klEpsilonBound(0.3), std::invalid_argument);
  for (double eps = 0.0; eps <= 0.25 + 1e-12; eps += 1e-3) {
    BoundPair pair = klEpsilonBound(std::min(eps, 0.25));
    REQUIRE(pair.kl <= pair.bound + 1e-15);
    REQUIRE(pair.kl ==
            doctest::Approx(-0.5 * std::log1p(-4.0 * std::min(eps, 0.25) * std::min(eps, 0.25)))
                .epsilon(1e-12));
  }
}

TEST_CASE("kl lower bound kl(p,q) >= (1-p)log(1/(1-q)) - log 2") {
  BoundPair example = klDeltaBound(0.1, 0.9);
  CHECK(example.kl == doctest::Approx(1.7577796618689755).epsilon(1e-12));
  CHECK(example.bound == doctest::Approx(0.9 * std::log(10.0) - std::log(2.0)).epsilon(1e-12));
  CHECK(example.kl >= example.bound);
  CHECK(klDeltaBound(1.0, 0.5).bound == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(klDeltaBound(0.5, 1.0), std::invalid_argument);
  for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.01)
    for (double q = 0.0; q < 0.999; q += 0.01) {
      BoundPair pair = klDeltaBound(std::min(p, 1.0), q);
      REQUIRE(pair.kl >= pair.bound - 1e-12);
    }
}

TEST_CASE("kl(delta, 1-delta) dominates log(1/(2.4 delta)) on (0, 0.15]") {
  for (double delta = 0.001; delta <= 0.15 + 1e-12; delta += 0.001)
    REQUIRE(klBernoulli(delta, 1.0 - delta) >= std::log(1.0 / (2.4 * delta)) - 1e-12);
}

TEST_CASE("exact trajectory KL") {
  SUBCASE("identical MDPs have zero divergence and no entries") {
    Mdp m = makeS3Stationary(2, 4, 1, 0.1);
    KlBreakdown breakdown = trajectoryKlExact(m, m, MarkovPolicy::uniform(m), 50.0);
    CHECK(breakdown.total == 0.0);
    CHECK(breakdown.entries.empty());
  }
  SUBCASE("s3 example: 50 kl(1/2, 0.6)") {
    Mdp ref = makeS3Stationary(2, 4, std::nullopt, 0.1);
    Mdp arm = makeS3Stationary(2, 4, 1, 0.1);
    KlBreakdown breakdown = trajectoryKlExact(ref, arm, MarkovPolicy::uniform(ref), 100.0);
    CHECK(breakdown.total == doctest::Approx(1.0205498630063782).epsilon(1e-12));
    REQUIRE(breakdown.entries.size() == 1);
    CHECK(breakdown.entries[0].stage == 1);
    CHECK(breakdown.entries[0].expectedCount == doctest::Approx(50.0).epsilon(1e-12));
  }
  SUBCASE("tree pair decomposes into a single row") {
    Mdp ref = makeTreeInstance(treeParams(6, 2, 9, 3, 0.1));
    Mdp arm = makeTreeInstance(treeParams(6, 2, 9, 3, 0.1, Arm{4, 1, 0}));
    KlBreakdown breakdown = trajectoryKlExact(ref, arm, MarkovPolicy::uniform(ref), 10.0);
    REQUIRE(breakdown.entries.size() == 1);
    CHECK(breakdown.entries[0].stage == 4);
    CHECK(breakdown.total > 0.0);
    CHECK(std::isfinite(breakdown.total));
  }
  SUBCASE("structural mismatches are rejected") {
    Mdp a = makeS3Stationary(2, 4, 1, 0.1);
    Mdp b = makeS3Stationary(2, 5, 1, 0.1);
    CHECK_THROWS_AS(trajectoryKlExact(a, b, MarkovPolicy::uniform(a), 1.0), std::invalid_argument);
  }
  SUBCASE("linear in T") {
    Mdp ref = makeS3Stationary(3, 4, std::nullopt, 0.2);
    Mdp arm = makeS3Stationary(3, 4, 0, 0.2);
    MarkovPolicy pol = MarkovPolicy::uniform(ref);
    double single = trajectoryKlExact(ref, arm, pol, 1.0).total;
    CHECK(trajectoryKlExact(ref, arm, pol, 7.0).total == doctest::Approx(7.0 * single).epsilon(1e-12));
  }
}

TEST_CASE("brute-force trajectory KL agrees with the exact decomposition") {
  SUBCASE("matrix of small cells") {
    CounterRng rng(41);
    int cells = 0;
    for (int A = 2; A <= 3; ++A)
      for (int H = 2; H <= 4; ++H)
        for (int T = 1; T <= 2; ++T) {
          Mdp ref = makeS3Stationary(A, H, std::nullopt, 0.15);
          Mdp arm = makeS3Stationary(A, H, A - 1, 0.15);
          MarkovPolicy uniform = MarkovPolicy::uniform(ref);
          double exact = trajectoryKlExact(ref, arm, uniform, T).total;
          double brute = trajectoryKlBruteForce(ref, arm, uniform, T);
          REQUIRE(std::abs(exact - brute) <= 1e-10);
          MarkovPolicy random = hardmdp::testing::randomPolicy(rng, ref);
          REQUIRE(std::abs(trajectoryKlExact(ref, arm, random, T).total -
                           trajectoryKlBruteForce(ref, arm, random, T)) <= 1e-10);
          cells += 2;
        }
    CHECK(cells >= 12);
  }
  SUBCASE("s4 cells") {
    for (int T = 1; T <= 2; ++T) {
      Mdp ref = makeS4Stage(2, 4, 2, std::nullopt, 0.2);
      Mdp arm = makeS4Stage(2, 4, 2, Arm{3, -1, 1}, 0.2);
      MarkovPolicy uniform = MarkovPolicy::uniform(ref);
      REQUIRE(std::abs(trajectoryKlExact(ref, arm, uniform, T).total -
                       trajectoryKlBruteForce(ref, arm, uniform, T)) <= 1e-10);
    }
  }
  SUBCASE("guard rejects oversized enumerations") {
    Mdp ref = makeTreeInstance(treeParams(6, 2, 9, 3, 0.1));
    Mdp arm = makeTreeInstance(treeParams(6, 2, 9, 3, 0.1, Arm{3, 0, 0}));
    CHECK_THROWS_AS(trajectoryKlBruteForce(ref, arm, MarkovPolicy::uniform(ref), 2),
                    std::invalid_argument);
  }
  SUBCASE("deterministic pair differing on an unreachable row") {
    Mdp a = Mdp::zeros(2, 1, 3);
    a.initialDist[0] = 1.0;
    a.kernelRow(0, 0, 0)[0] = 1.0;  // stays in state 0 forever
    a.kernelRow(0, 1, 0)[1] = 1.0;
    a.kernelRow(1, 0, 0)[0] = 1.0;
    a.kernelRow(1, 1, 0)[1] = 1.0;
    Mdp b = a;
    b.kernelRow(1, 1, 0)[1] = 0.0;  // state 1 is unreachable under a
    b.kernelRow(1, 1, 0)[0] = 1.0;
    MarkovPolicy pol = MarkovPolicy::uniform(a);
    CHECK(trajectoryKlBruteForce(a, b, pol, 1) == 0.0);
    CHECK(trajectoryKlExact(a, b, pol, 1.0).total == 0.0);
  }
}

TEST_CASE("Monte Carlo trajectory KL") {
  Mdp ref = makeS3Stationary(2, 4, std::nullopt, 0.1);
  Mdp arm = makeS3Stationary(2, 4, 1, 0.1);
  MarkovPolicy uniform = MarkovPolicy::uniform(ref);

  SUBCASE("identical MDPs give exactly zero") {
    auto decide = [](int, int, int, const std::vector<Trajectory>&, const Trajectory&) { return 0; };
    McKlEstimate est = trajectoryKlMonteCarlo(ref, ref, decide, 5, 200, 3);
    CHECK(est.estimate == 0.0);
    CHECK(est.se == 0.0);
  }
  SUBCASE("Markov callback matches the exact value within 4 standard errors") {
    CounterRng actionRng(77);
    auto decide = [&](int, int stage, int state, const std::vector<Trajectory>&, const Trajectory&) {
      return actionRng.sampleCategorical(uniform.row(stage, state));
    };
    const int T = 10;
    McKlEstimate est = trajectoryKlMonteCarlo(ref, arm, decide, T, 4000, 13);
    double exact = trajectoryKlExact(ref, arm, uniform, T).total;
    CHECK(std::abs(est.estimate - exact) <= 4.0 * est.se);
  }
  SUBCASE("tree class smoke: positive, finite, seed stable") {
    Mdp treeRef = makeTreeInstance(treeParams(6, 2, 9, 3, 0.1));
    Mdp treeArm = makeTreeInstance(treeParams(6, 2, 9, 3, 0.1, Arm{3, 0, 0}));
    CounterRng actionRng(5);
    auto decide = [&](int, int, int, const std::vector<Trajectory>&, const Trajectory&) {
      return actionRng.nextBelow(2);
    };
    McKlEstimate est = trajectoryKlMonteCarlo(treeRef, treeArm, decide, 50, 400, 21);
    CHECK(est.estimate > 0.0);
    CHECK(std::isfinite(est.estimate));
    CounterRng actionRng2(5);
    auto decide2 = [&](int, int, int, const std::vector<Trajectory>&, const Trajectory&) {
      return actionRng2.nextBelow(2);
    };
    McKlEstimate replay = trajectoryKlMonteCarlo(treeRef, treeArm, decide2, 50, 400, 21);
    CHECK(est.estimate == replay.estimate);
  }
}

TEST_CASE("KL contraction (data-processing) check") {
  Mdp ref = makeS3Stationary(2, 3, std::nullopt, 0.2);
  Mdp arm = makeS3Stationary(2, 3, 1, 0.2);
  MarkovPolicy uniform = MarkovPolicy::uniform(ref);

  SUBCASE("constant functionals contract to zero") {
    ContractionResult result =
        klContractionCheck(ref, arm, uniform, 2, [](const std::vector<Trajectory>&) { return 0.7; });
    CHECK(result.klOfMeans == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(result.holds);
  }
  SUBCASE("arm-frequency functional") {
    // Under a fixed Markov policy the visit law is the same in both MDPs,
    // so the left side degenerates to zero; the inequality must still hold.
    auto armFreq = [](const std::vector<Trajectory>& run) {
      double count = 0.0;
      for (const Trajectory& traj : run) count += (traj.states[0] == 0 && traj.actions[0] == 1) ? 1 : 0;
      return count / run.size();
    };
    for (int T = 1; T <= 2; ++T) {
      ContractionResult result = klContractionCheck(ref, arm, uniform, T, armFreq);
      CHECK(result.holds);
      CHECK(result.klOfMeans == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  SUBCASE("good-state functional separates the measures") {
    auto reachedGood = [](const std::vector<Trajectory>& run) {
      double count = 0.0;
      for (const Trajectory& traj : run) count += traj.states.back() == 1 ? 1 : 0;
      return count / run.size();
    };
    ContractionResult result = klContractionCheck(ref, arm, uniform, 2, reachedGood);
    CHECK(result.holds);
    CHECK(result.klOfMeans > 0.0);
    CHECK(result.klOfMeans <= result.trajectoryKl);
  }
  SUBCASE("good-event indicator") {
    auto goodEvent = [](const std::vector<Trajectory>& run) {
      for (const Trajectory& traj : run)
        if (traj.actions[0] == 1 && traj.states[1] == 1) return 1.0;
      return 0.0;
    };
    ContractionResult result = klContractionCheck(ref, arm, uniform, 2, goodEvent);
    CHECK(result.holds);
  }
  SUBCASE("out-of-range functionals are rejected") {
    CHECK_THROWS_AS(
        klContractionCheck(ref, arm, uniform, 1, [](const std::vector<Trajectory>&) { return 1.5; }),
        std::invalid_argument);
  }
}

TEST_CASE("product additivity: T-fold KL equals T times the single-episode KL") {
  Mdp ref = makeS4Stage(2, 4, 2, std::nullopt, 0.25);
  Mdp arm = makeS4Stage(2, 4, 2, Arm{2, -1, 1}, 0.25);
  MarkovPolicy uniform = MarkovPolicy::uniform(ref);
  double single = trajectoryKlBruteForce(ref, arm, uniform, 1);
  double doubled = trajectoryKlBruteForce(ref, arm, uniform, 2);
  CHECK(doubled == doctest::Approx(2.0 * single).epsilon(1e-12));
}
