#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "hardmdp/json_io.hpp"
#include "test_support.hpp"

using namespace hardmdp;
using hardmdp::testing::treeParams;

TEST_CASE("MDP JSON round trip is lossless") {
  Mdp m = makeTreeInstance(treeParams(6, 2, 9, 3, 0.1, Arm{4, 1, 0}));
  nlohmann::json j = nlohmann::json::parse(mdpToJson(m).dump());
  Mdp back = mdpFromJson(j);
  CHECK(back.numStates == m.numStates);
  CHECK(back.initialDist == m.initialDist);
  CHECK(back.kernels == m.kernels);
  CHECK(back.rewards == m.rewards);
  CHECK(j.at("p").size() == 8);
  CHECK(j.at("r").size() == 9);
}

TEST_CASE("policy JSON round trip") {
  Mdp m = makeS4Stage(3, 6, 2, Arm{2, -1, 1}, 0.2);
  CounterRng rng(3);
  MarkovPolicy pol = hardmdp::testing::randomPolicy(rng, m);
  MarkovPolicy back = policyFromJson(nlohmann::json::parse(policyToJson(pol).dump()));
  CHECK(back.probs == pol.probs);
}

TEST_CASE("params and class specs round trip") {
  HardInstanceParams params = treeParams(10, 2, 12, 3, 0.25, Arm{5, 2, 1});
  HardInstanceParams back = paramsFromJson(paramsToJson(params));
  CHECK(back.family == params.family);
  CHECK(back.arm == params.arm);
  CHECK(back.eps == params.eps);

  HardInstanceParams reference = treeParams(10, 2, 12, 3, 0.25);
  CHECK_FALSE(paramsFromJson(paramsToJson(reference)).arm.has_value());

  ClassSpec spec{Family::S4Bpi, 4, 2, 8, 3, 0.075, Arm{2, -1, 0}};
  ClassSpec specBack = classSpecFromJson(classSpecToJson(spec));
  CHECK(specBack.family == Family::S4Bpi);
  CHECK(specBack.refArm == spec.refArm);
}

TEST_CASE("report serialization carries schema versions") {
  BoundReport report = regretBound(TheoremId::RegretTree, 6, 6, 2, 72.0);
  nlohmann::json j = boundReportToJson(report);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("theorem") == "regret-tree");
  CHECK(j.at("value").get<double>() == report.value);

  Mdp ref = makeS3Stationary(2, 4, std::nullopt, 0.1);
  Mdp arm = makeS3Stationary(2, 4, 1, 0.1);
  nlohmann::json kj = klBreakdownToJson(trajectoryKlExact(ref, arm, MarkovPolicy::uniform(ref), 10));
  CHECK(kj.at("schema_version") == kSchemaVersion);
  CHECK(kj.at("entries").size() == 1);
}

TEST_CASE("sweep CSV layout") {
  SweepResult sweep = runRegretSweep({LearnerSpec::Kind::Uniform, 1.0},
                                     {Family::S3Stationary, 3, 2, 4, 0, 0.1, std::nullopt}, 50, 3, 1);
  std::string csv = sweepCsv(sweep);
  CHECK(csv.rfind("instance,label,seed,arm_visits,identity_regret,reward_regret\n", 0) == 0);
  size_t rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + sweep.records.size() * sweep.seeds);
}

TEST_CASE("double formatting round trips") {
  for (double value : {0.1, 1.0 / 3.0, 0.6, 1e-17, 123456.789, 0.0})
    CHECK(std::strtod(formatDouble(value).c_str(), nullptr) == value);
}
