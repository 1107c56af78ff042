#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hardmdp/bounds.hpp"

using namespace hardmdp;

TEST_CASE("regret bound values") {
  SUBCASE("regret-tree worked example") {
    BoundReport report = regretBound(TheoremId::RegretTree, 6, 6, 2, 72.0);
    CHECK(report.value == doctest::Approx(3.6742346141747671).epsilon(1e-12));
    CHECK(report.allPreconditionsPass());
  }
  SUBCASE("regret-s3 worked example") {
    BoundReport report = regretBound(TheoremId::RegretS3, 2, 3, 2, 4.0);
    CHECK(report.value == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(report.allPreconditionsPass());
  }
  SUBCASE("regret-s4 below the horizon floor is flagged") {
    BoundReport report = regretBound(TheoremId::RegretS4, 3, 4, 2, 100.0);
    CHECK_FALSE(report.allPreconditionsPass());
    CHECK(report.value > 0.0);
  }
  SUBCASE("bpi ids are rejected") {
    CHECK_THROWS_AS(regretBound(TheoremId::BpiTree, 6, 6, 2, 72.0), std::invalid_argument);
  }
}

TEST_CASE("BPI and PAC bound values") {
  SUBCASE("bpi-tree worked example") {
    BoundReport report = bpiBound(TheoremId::BpiTree, 12, 6, 2, 0.5, 1.0 / 16.0);
    CHECK(report.value == doctest::Approx(66.542129333754750).epsilon(1e-12));
    CHECK(report.allPreconditionsPass());
  }
  SUBCASE("bpi-s4 clamps a nonpositive log term to zero and flags it") {
    BoundReport report = bpiBound(TheoremId::BpiS4, 8, 4, 2, 0.3, 0.5);
    CHECK(report.value == 0.0);
    CHECK_FALSE(report.allPreconditionsPass());
  }
  SUBCASE("bpi-s4 worked example") {
    BoundReport report = bpiBound(TheoremId::BpiS4, 8, 4, 2, 0.3, 0.1);
    CHECK(report.value == doctest::Approx(15.856848396001619).epsilon(1e-12));
    CHECK(report.allPreconditionsPass());
  }
  SUBCASE("pac-tree is half the bpi-tree value minus one") {
    for (double eps : {0.2, 0.4})
      for (double delta : {0.01, 0.05}) {
        double bpi = bpiBound(TheoremId::BpiTree, 12, 6, 2, eps, delta).value;
        double pac = bpiBound(TheoremId::PacTree, 12, 6, 2, eps, delta).value;
        CHECK(pac == doctest::Approx(bpi / 2.0 - 1.0).epsilon(1e-12));
      }
  }
  SUBCASE("delta domain errors") {
    CHECK_THROWS_AS(bpiBound(TheoremId::BpiTree, 12, 6, 2, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bpiBound(TheoremId::BpiTree, 12, 6, 2, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bpiBound(TheoremId::BpiTree, 12, 6, 2, -0.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(bpiBound(TheoremId::RegretTree, 12, 6, 2, 0.5, 0.1), std::invalid_argument);
  }
}

TEST_CASE("bounds are monotone in T and log(1/delta)") {
  for (TheoremId id : {TheoremId::RegretS3, TheoremId::RegretS4, TheoremId::RegretTree,
                       TheoremId::RegretTreeRelaxed, TheoremId::RegretStationary}) {
    double previous = 0.0;
    for (double T = 100.0; T <= 1e6; T *= 10.0) {
      double value = regretBound(id, 12, 13, 4, T).value;
      REQUIRE(value >= previous);
      previous = value;
    }
  }
  for (TheoremId id : {TheoremId::BpiS4, TheoremId::BpiTree, TheoremId::BpiTreeRelaxed,
                       TheoremId::BpiStationary, TheoremId::PacTree, TheoremId::PacTreeRelaxed}) {
    double previous = -2.0;
    for (double delta : {0.3, 0.1, 0.03, 0.01, 0.003}) {
      double value = bpiBound(id, 12, 13, 4, 0.4, delta).value;
      REQUIRE(value >= previous);
      previous = value;
    }
  }
}

TEST_CASE("H^3 bound overtakes the H^2 bound exactly when sqrt(H) beats the constant ratio") {
  for (int H : {100, 1000, 13824, 13900, 20000}) {
    double h3 = regretBound(TheoremId::RegretTree, H, 6, 2, 1e6).value;
    double h2 = regretBound(TheoremId::RegretStationary, H, 6, 2, 1e6).value;
    bool expected = H >= 13824;  // (48 sqrt(6))^2
    CHECK((h3 >= h2) == expected);
  }
}

TEST_CASE("optimal epsilon") {
  SUBCASE("tree worked example") {
    OptimalEpsilon eps = optimalEpsilon(Family::Tree, 9, 3, 2, 2, 1200.0);
    CHECK(eps.value == doctest::Approx(0.032409060804383428).epsilon(1e-12));
    CHECK(eps.feasible);
  }
  SUBCASE("s3 boundary feasibility at T = 2A") {
    OptimalEpsilon eps = optimalEpsilon(Family::S3Stationary, 2, 0, 0, 2, 4.0);
    CHECK(eps.value == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(eps.feasible);
  }
  SUBCASE("epsilon vanishes as T grows") {
    CHECK(optimalEpsilon(Family::Tree, 9, 3, 2, 2, 1e12).value < 1e-4);
  }
  SUBCASE("maximizes the pre-optimization expression on a fine grid") {
    const int H = 9, Hbar = 3, L = 2, A = 2;
    const double T = 2000.0;
    const double arms = static_cast<double>(Hbar) * L * A;
    auto objective = [&](double eps) {
      return T * (H - Hbar - 2) * eps *
             (1.0 - 1.0 / arms - std::sqrt(2.0) * eps * std::sqrt(arms * T) / arms);
    };
    double star = optimalEpsilon(Family::Tree, H, Hbar, L, A, T).value;
    double bestGrid = 0.0, bestValue = -1.0;
    for (double eps = 0.0; eps <= 0.25; eps += 1e-4)
      if (objective(eps) > bestValue) {
        bestValue = objective(eps);
        bestGrid = eps;
      }
    CHECK(std::abs(bestGrid - star) <= 1e-4);
    CHECK(objective(star) >= bestValue - 1e-9);
  }
}

TEST_CASE("regret identity") {
  CHECK(regretIdentity(Family::Tree, 9, 3, 2, 0.1, 100.0, 100.0) == 0.0);
  CHECK(regretIdentity(Family::Tree, 9, 3, 2, 0.1, 100.0, 25.0) == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(regretIdentity(Family::S3Stationary, 5, 0, 0, 0.2, 10.0, 0.0) ==
        doctest::Approx(10.0 * 4 * 0.2).epsilon(1e-12));
  CHECK_THROWS_AS(regretIdentity(Family::Tree, 9, 3, 2, 0.1, 100.0, 101.0), std::out_of_range);
  // Uniform arm play reproduces the averaging-step value.
  const double T = 1200.0, arms = 12.0, eps = 0.05;
  double averaged = regretIdentity(Family::Tree, 9, 3, 2, eps, T, T / arms);
  CHECK(averaged == doctest::Approx(T * 4 * eps * (1.0 - 1.0 / arms)).epsilon(1e-12));
}

TEST_CASE("assumption regimes") {
  SUBCASE("full tree") {
    AssumptionReport report = assumptionCheck(6, 2, 6);
    CHECK(report.shapeValid);
    CHECK(report.regime == TreeRegime::FullTree);
    CHECK(report.depth == 2);
    CHECK(report.horizonSufficient);
    CHECK(report.effectiveStates == 6);
  }
  SUBCASE("relaxed tree") {
    AssumptionReport report = assumptionCheck(11, 2, 24);
    CHECK(report.regime == TreeRegime::RelaxedTree);
    CHECK(report.depth == 4);
    CHECK(report.horizonSufficient);
  }
  SUBCASE("exponential cap") {
    AssumptionReport report = assumptionCheck(1000, 2, 9);
    CHECK(report.regime == TreeRegime::ExponentialCap);
    CHECK(report.effectiveStates == 2);
  }
  SUBCASE("degenerate shapes are reported, not thrown") {
    CHECK_FALSE(assumptionCheck(4, 2, 10).shapeValid);
    CHECK_FALSE(assumptionCheck(10, 1, 10).shapeValid);
  }
}
