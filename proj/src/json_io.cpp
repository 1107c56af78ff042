#include "hardmdp/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hardmdp {

using nlohmann::json;

std::string formatDouble(double value) {
  // Shortest decimal that round-trips to the same double.
  char buffer[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

json mdpToJson(const Mdp& m) {
  json p = json::array();
  for (int h = 0; h + 1 < m.horizon; ++h) {
    json stage = json::array();
    for (int s = 0; s < m.numStates; ++s) {
      json byState = json::array();
      for (int a = 0; a < m.numActions; ++a) {
        auto row = m.kernelRow(h, s, a);
        byState.push_back(json(std::vector<double>(row.begin(), row.end())));
      }
      stage.push_back(std::move(byState));
    }
    p.push_back(std::move(stage));
  }
  json r = json::array();
  for (int h = 0; h < m.horizon; ++h) {
    json stage = json::array();
    for (int s = 0; s < m.numStates; ++s) {
      std::vector<double> byAction(m.numActions);
      for (int a = 0; a < m.numActions; ++a) byAction[a] = m.reward(h, s, a);
      stage.push_back(json(byAction));
    }
    r.push_back(std::move(stage));
  }
  return json{{"S", m.numStates}, {"A", m.numActions}, {"H", m.horizon},
              {"mu", m.initialDist}, {"p", std::move(p)}, {"r", std::move(r)}};
}

Mdp mdpFromJson(const json& j) {
  Mdp m = Mdp::zeros(j.at("S").get<int>(), j.at("A").get<int>(), j.at("H").get<int>());
  m.initialDist = j.at("mu").get<std::vector<double>>();
  if (static_cast<int>(m.initialDist.size()) != m.numStates)
    throw std::invalid_argument("mdpFromJson: mu length mismatch");
  const json& p = j.at("p");
  if (static_cast<int>(p.size()) != m.horizon - 1)
    throw std::invalid_argument("mdpFromJson: p must have H-1 stages");
  for (int h = 0; h + 1 < m.horizon; ++h)
    for (int s = 0; s < m.numStates; ++s)
      for (int a = 0; a < m.numActions; ++a) {
        auto row = p.at(h).at(s).at(a).get<std::vector<double>>();
        if (static_cast<int>(row.size()) != m.numStates)
          throw std::invalid_argument("mdpFromJson: kernel row length mismatch");
        std::copy(row.begin(), row.end(), m.kernelRow(h, s, a).begin());
      }
  const json& r = j.at("r");
  if (static_cast<int>(r.size()) != m.horizon)
    throw std::invalid_argument("mdpFromJson: r must have H stages");
  for (int h = 0; h < m.horizon; ++h)
    for (int s = 0; s < m.numStates; ++s) {
      auto byAction = r.at(h).at(s).get<std::vector<double>>();
      if (static_cast<int>(byAction.size()) != m.numActions)
        throw std::invalid_argument("mdpFromJson: reward row length mismatch");
      for (int a = 0; a < m.numActions; ++a) m.reward(h, s, a) = byAction[a];
    }
  return m;
}

json policyToJson(const MarkovPolicy& pol) {
  json pi = json::array();
  for (int h = 0; h < pol.horizon; ++h) {
    json stage = json::array();
    for (int s = 0; s < pol.numStates; ++s) {
      auto row = pol.row(h, s);
      stage.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    pi.push_back(std::move(stage));
  }
  return json{{"S", pol.numStates}, {"A", pol.numActions}, {"H", pol.horizon}, {"pi", std::move(pi)}};
}

MarkovPolicy policyFromJson(const json& j) {
  MarkovPolicy pol;
  pol.numStates = j.at("S").get<int>();
  pol.numActions = j.at("A").get<int>();
  pol.horizon = j.at("H").get<int>();
  pol.probs.assign(static_cast<size_t>(pol.horizon) * pol.numStates * pol.numActions, 0.0);
  const json& pi = j.at("pi");
  for (int h = 0; h < pol.horizon; ++h)
    for (int s = 0; s < pol.numStates; ++s) {
      auto row = pi.at(h).at(s).get<std::vector<double>>();
      if (static_cast<int>(row.size()) != pol.numActions)
        throw std::invalid_argument("policyFromJson: row length mismatch");
      std::copy(row.begin(), row.end(), pol.row(h, s).begin());
    }
  return pol;
}

namespace {

json armToJson(const Arm& arm) {
  json j = json::object();
  if (arm.stage >= 0) j["h"] = arm.stage;
  if (arm.leaf >= 0) j["leaf"] = arm.leaf;
  if (arm.action >= 0) j["a"] = arm.action;
  return j;
}

Arm armFromJson(const json& j) {
  Arm arm;
  if (j.contains("h")) arm.stage = j.at("h").get<int>();
  if (j.contains("leaf")) arm.leaf = j.at("leaf").get<int>();
  if (j.contains("a")) arm.action = j.at("a").get<int>();
  return arm;
}

}  // namespace

json paramsToJson(const HardInstanceParams& params) {
  json j{{"family", familyName(params.family)}, {"S", params.S}, {"A", params.A},
         {"H", params.H},  {"Hbar", params.Hbar}, {"eps", params.eps}};
  j["arm"] = params.arm ? armToJson(*params.arm) : json(nullptr);
  if (params.refArm) j["ref_arm"] = armToJson(*params.refArm);
  return j;
}

HardInstanceParams paramsFromJson(const json& j) {
  HardInstanceParams params;
  params.family = familyFromName(j.at("family").get<std::string>());
  params.S = j.at("S").get<int>();
  params.A = j.at("A").get<int>();
  params.H = j.at("H").get<int>();
  params.Hbar = j.value("Hbar", 0);
  params.eps = j.at("eps").get<double>();
  if (j.contains("arm") && !j.at("arm").is_null()) params.arm = armFromJson(j.at("arm"));
  if (j.contains("ref_arm") && !j.at("ref_arm").is_null()) params.refArm = armFromJson(j.at("ref_arm"));
  return params;
}

json classSpecToJson(const ClassSpec& spec) {
  json j{{"family", familyName(spec.family)}, {"S", spec.S}, {"A", spec.A},
         {"H", spec.H},  {"Hbar", spec.Hbar}, {"eps", spec.eps}};
  if (spec.refArm) j["ref_arm"] = armToJson(*spec.refArm);
  return j;
}

ClassSpec classSpecFromJson(const json& j) {
  ClassSpec spec;
  spec.family = familyFromName(j.at("family").get<std::string>());
  spec.S = j.value("S", spec.family == Family::S3Stationary ? 3 : 4);
  spec.A = j.at("A").get<int>();
  spec.H = j.at("H").get<int>();
  spec.Hbar = j.value("Hbar", 0);
  spec.eps = j.at("eps").get<double>();
  if (j.contains("ref_arm") && !j.at("ref_arm").is_null()) spec.refArm = armFromJson(j.at("ref_arm"));
  return spec;
}

json klBreakdownToJson(const KlBreakdown& breakdown) {
  json entries = json::array();
  for (const KlEntry& entry : breakdown.entries)
    entries.push_back(json{{"h", entry.stage},
                           {"s", entry.state},
                           {"a", entry.action},
                           {"expected_count", entry.expectedCount},
                           {"row_kl", entry.rowKl}});
  return json{{"schema_version", kSchemaVersion}, {"total", breakdown.total}, {"entries", entries}};
}

json boundReportToJson(const BoundReport& report) {
  json checks = json::array();
  for (const PreCheck& check : report.preconditions)
    checks.push_back(json{{"name", check.name}, {"pass", check.pass}});
  return json{{"schema_version", kSchemaVersion},
              {"theorem", theoremName(report.theoremId)},
              {"inputs", report.inputs},
              {"value", report.value},
              {"preconditions", checks},
              {"formula", report.formula},
              {"all_preconditions_pass", report.allPreconditionsPass()}};
}

json sweepSummaryToJson(const SweepResult& sweep) {
  json records = json::array();
  for (const SweepRecord& record : sweep.records) {
    json r{{"params", paramsToJson(record.params)},
           {"label", record.params.label()},
           {"rho_star", record.rhoStar},
           {"mean_arm_visits", record.meanArmVisits},
           {"identity_regret", record.meanIdentityRegret},
           {"identity_regret_se", record.seIdentityRegret},
           {"reward_regret", record.meanRewardRegret},
           {"reward_regret_se", record.seRewardRegret}};
    if (!record.armHistogram.empty()) r["arm_histogram"] = record.armHistogram;
    records.push_back(std::move(r));
  }
  return json{{"schema_version", kSchemaVersion},
              {"class", classSpecToJson(sweep.spec)},
              {"learner", sweep.learner.name()},
              {"episodes", sweep.episodes},
              {"seeds", sweep.seeds},
              {"seed", sweep.baseSeed},
              {"records", records},
              {"worst_index", sweep.worstIndex},
              {"worst_regret", sweep.worstRegret},
              {"bound_value", sweep.boundValue},
              {"ratio", sweep.ratio}};
}

json bpiSummaryToJson(const BpiRunResult& result) {
  json records = json::array();
  for (const BpiInstanceRecord& record : result.records)
    records.push_back(json{{"params", paramsToJson(record.params)},
                           {"label", record.params.label()},
                           {"rho_star", record.rhoStar},
                           {"mean_tau", record.meanTau},
                           {"tau_se", record.seTau},
                           {"capped_runs", record.cappedRuns},
                           {"failures", record.failures},
                           {"failure_rate", record.failureRate},
                           {"max_arms_over_half", record.maxArmsOverHalf}});
  return json{{"schema_version", kSchemaVersion},
              {"class", classSpecToJson(result.spec)},
              {"eps", result.eps},
              {"delta", result.delta},
              {"seeds", result.seeds},
              {"seed", result.baseSeed},
              {"episode_cap", result.episodeCap},
              {"records", records},
              {"reference_mean_tau", result.referenceMeanTau},
              {"bound_value", result.boundValue}};
}

std::string sweepCsv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "instance,label,seed,arm_visits,identity_regret,reward_regret\n";
  for (size_t i = 0; i < sweep.records.size(); ++i) {
    const SweepRecord& record = sweep.records[i];
    for (int seed = 0; seed < sweep.seeds; ++seed)
      out << i << ',' << record.params.label() << ',' << seed << ','
          << formatDouble(record.armVisitsPerSeed[seed]) << ','
          << formatDouble(record.identityPerSeed[seed]) << ','
          << formatDouble(record.rewardPerSeed[seed]) << '\n';
  }
  return out.str();
}

std::string bpiCsv(const BpiRunResult& result) {
  std::ostringstream out;
  out << "instance,label,seed,tau,capped,recommended_value,pac_success\n";
  for (size_t i = 0; i < result.records.size(); ++i) {
    const BpiInstanceRecord& record = result.records[i];
    for (int seed = 0; seed < result.seeds; ++seed) {
      bool success = record.recommendedValues[seed] > record.rhoStar - result.eps;
      out << i << ',' << record.params.label() << ',' << seed << ','
          << formatDouble(record.tauPerSeed[seed]) << ',' << int(record.cappedPerSeed[seed]) << ','
          << formatDouble(record.recommendedValues[seed]) << ',' << (success ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

}  // namespace hardmdp
