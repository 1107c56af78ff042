#pragma once

#include <string>

#include <json.hpp>

#include "hardmdp/bounds.hpp"
#include "hardmdp/harness.hpp"
#include "hardmdp/info_theory.hpp"
#include "hardmdp/instances.hpp"
#include "hardmdp/mdp.hpp"

namespace hardmdp {

inline constexpr int kSchemaVersion = 1;

// Mdp fields: S, A, H, mu, p[h][s][a][s'], r[h][s][a]. Round trips are
// lossless for exactly representable values.
nlohmann::json mdpToJson(const Mdp& m);
Mdp mdpFromJson(const nlohmann::json& j);

nlohmann::json policyToJson(const MarkovPolicy& pol);
MarkovPolicy policyFromJson(const nlohmann::json& j);

nlohmann::json paramsToJson(const HardInstanceParams& params);
HardInstanceParams paramsFromJson(const nlohmann::json& j);

nlohmann::json classSpecToJson(const ClassSpec& spec);
ClassSpec classSpecFromJson(const nlohmann::json& j);

nlohmann::json klBreakdownToJson(const KlBreakdown& breakdown);
nlohmann::json boundReportToJson(const BoundReport& report);

nlohmann::json sweepSummaryToJson(const SweepResult& sweep);
nlohmann::json bpiSummaryToJson(const BpiRunResult& result);

// One row per (instance, seed); byte-stable for identical inputs.
std::string sweepCsv(const SweepResult& sweep);
std::string bpiCsv(const BpiRunResult& result);

std::string formatDouble(double value);  // shortest round-trip representation

}  // namespace hardmdp
