// hardmdp: generation, planning, KL analysis, bound evaluation, and
// experiment sweeps for the hard episodic-MDP instance families.
//
// Exit codes: 0 success, 1 domain error (including failed verification),
// 2 usage error. Data goes to stdout, diagnostics to stderr; HARDMDP_LOG
// selects the diagnostic level (error, warn, info, debug).

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "hardmdp/bounds.hpp"
#include "hardmdp/harness.hpp"
#include "hardmdp/info_theory.hpp"
#include "hardmdp/instances.hpp"
#include "hardmdp/json_io.hpp"
#include "hardmdp/mdp.hpp"
#include "hardmdp/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hardmdp;

namespace {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel logLevel() {
  const char* env = std::getenv("HARDMDP_LOG");
  if (!env) return LogLevel::Warn;
  std::string value(env);
  if (value == "error") return LogLevel::Error;
  if (value == "warn") return LogLevel::Warn;
  if (value == "info") return LogLevel::Info;
  if (value == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

void logLine(LogLevel level, const std::string& message) {
  static const LogLevel threshold = logLevel();
  if (level > threshold) return;
  const char* tag = level == LogLevel::Error ? "error"
                    : level == LogLevel::Warn ? "warn"
                    : level == LogLevel::Info ? "info"
                                              : "debug";
  std::cerr << "[hardmdp:" << tag << "] " << message << "\n";
}

json loadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void writeTextFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << contents;
  logLine(LogLevel::Info, "wrote " + path.string());
}

std::string isoTimestamp() {
  std::time_t now = std::time(nullptr);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buffer;
}

ClassSpec classSpecFromCli(const std::string& family, int S, int A, int H, int Hbar, double eps,
                           int h0, int a0) {
  ClassSpec spec;
  spec.family = familyFromName(family);
  spec.A = A;
  spec.H = H;
  spec.Hbar = Hbar;
  spec.eps = eps;
  spec.S = spec.family == Family::S3Stationary ? 3
           : (spec.family == Family::S4Stage || spec.family == Family::S4Bpi) ? 4
                                                                              : S;
  if (spec.family == Family::S4Bpi) {
    if (h0 < 0 || a0 < 0)
      throw std::invalid_argument("the s4-bpi family needs --h0 and --a0 for the reference arm");
    spec.refArm = Arm{h0, -1, a0};
  }
  return spec;
}

int runGen(const std::string& family, int S, int A, int H, int Hbar, double eps, int h0, int a0,
           const std::string& outDir) {
  ClassSpec spec = classSpecFromCli(family, S, A, H, Hbar, eps, h0, a0);
  std::vector<HardInstanceParams> paramsList = enumerateClass(spec);
  fs::create_directories(outDir);
  json manifestInstances = json::array();
  for (size_t i = 0; i < paramsList.size(); ++i) {
    HardInstance inst = buildInstance(paramsList[i]);
    char name[32];
    std::snprintf(name, sizeof(name), "instance_%03zu.json", i);
    json body = mdpToJson(inst.mdp);
    body["family"] = familyName(spec.family);
    body["label"] = paramsList[i].label();
    body["params"] = paramsToJson(paramsList[i]);
    body["state_names"] = inst.stateNames;
    writeTextFile(fs::path(outDir) / name, body.dump(2) + "\n");
    manifestInstances.push_back(json{{"file", name},
                                     {"label", paramsList[i].label()},
                                     {"params", paramsToJson(paramsList[i])}});
  }
  json manifest{{"schema_version", kSchemaVersion},
                {"class", classSpecToJson(spec)},
                {"count", paramsList.size()},
                {"instances", manifestInstances}};
  writeTextFile(fs::path(outDir) / "manifest.json", manifest.dump(2) + "\n");
  std::cout << paramsList.size() << " instances written to " << outDir << "\n";
  return 0;
}

int runPlan(const std::string& file, const std::string& format) {
  Mdp m = mdpFromJson(loadJsonFile(file));
  ValidationReport report = validate(m);
  if (!report.valid()) {
    for (const auto& issue : report.issues) logLine(LogLevel::Error, issue.describe());
    throw std::invalid_argument("instance file does not hold a valid MDP: " + file);
  }
  auto [table, greedy] = optimalValues(m);
  if (format == "json") {
    json v = json::array(), actions = json::array();
    for (int h = 0; h < m.horizon; ++h) {
      json stageV = json::array(), stageA = json::array();
      for (int s = 0; s < m.numStates; ++s) {
        stageV.push_back(table.valueAt(h, s));
        auto row = greedy.row(h, s);
        int a = 0;
        while (row[a] != 1.0) ++a;
        stageA.push_back(a);
      }
      v.push_back(stageV);
      actions.push_back(stageA);
    }
    std::cout << json{{"schema_version", kSchemaVersion},
                      {"rho_star", table.rho},
                      {"v_star", v},
                      {"greedy", actions}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "rho* = " << formatDouble(table.rho) << "\n";
    std::cout << "h";
    for (int s = 0; s < m.numStates; ++s) std::cout << "\tV*(s" << s << ")";
    std::cout << "\n";
    for (int h = 0; h < m.horizon; ++h) {
      std::cout << h + 1;
      for (int s = 0; s < m.numStates; ++s) std::cout << '\t' << formatDouble(table.valueAt(h, s));
      std::cout << "\n";
    }
  }
  return 0;
}

int runKl(const std::string& m0File, const std::string& m1File, const std::string& policyArg,
          long T, const std::string& format) {
  Mdp m0 = mdpFromJson(loadJsonFile(m0File));
  Mdp m1 = mdpFromJson(loadJsonFile(m1File));
  MarkovPolicy pol =
      policyArg == "uniform" ? MarkovPolicy::uniform(m0) : policyFromJson(loadJsonFile(policyArg));
  KlBreakdown breakdown = trajectoryKlExact(m0, m1, pol, static_cast<double>(T));
  if (format == "json") {
    std::cout << klBreakdownToJson(breakdown).dump(2) << "\n";
  } else {
    std::cout << "h\ts\ta\tE[N]\trow_kl\tcontribution\n";
    for (const KlEntry& entry : breakdown.entries)
      std::cout << entry.stage << '\t' << entry.state << '\t' << entry.action << '\t'
                << formatDouble(entry.expectedCount) << '\t' << formatDouble(entry.rowKl) << '\t'
                << formatDouble(entry.expectedCount * entry.rowKl) << "\n";
    std::cout << "total\t" << formatDouble(breakdown.total) << "\n";
  }
  return 0;
}

BoundReport evaluateBound(const std::string& theorem, int H, int S, int A, double T, double eps,
                          double delta) {
  TheoremId id = theoremFromName(theorem);
  return isRegretTheorem(id) ? regretBound(id, H, S, A, T) : bpiBound(id, H, S, A, eps, delta);
}

int runBound(const std::string& theorem, int H, int S, int A, double T, double eps, double delta,
             const std::string& batchFile, const std::string& format) {
  if (!batchFile.empty()) {
    json batch = loadJsonFile(batchFile);
    if (!batch.is_array()) throw std::invalid_argument("--batch expects a JSON array");
    std::cout << "theorem,H,S,A,T,eps,delta,value,all_preconditions_pass\n";
    for (const json& row : batch) {
      BoundReport report = evaluateBound(row.at("theorem").get<std::string>(),
                                         row.value("H", 0), row.value("S", 0), row.value("A", 0),
                                         row.value("T", 0.0), row.value("eps", 0.0),
                                         row.value("delta", 0.0));
      std::cout << theoremName(report.theoremId) << ',' << row.value("H", 0) << ','
                << row.value("S", 0) << ',' << row.value("A", 0) << ','
                << formatDouble(row.value("T", 0.0)) << ',' << formatDouble(row.value("eps", 0.0))
                << ',' << formatDouble(row.value("delta", 0.0)) << ','
                << formatDouble(report.value) << ',' << (report.allPreconditionsPass() ? 1 : 0)
                << "\n";
    }
    return 0;
  }
  BoundReport report = evaluateBound(theorem, H, S, A, T, eps, delta);
  if (format == "json") {
    std::cout << boundReportToJson(report).dump(2) << "\n";
  } else {
    std::cout << theoremName(report.theoremId) << " = " << formatDouble(report.value) << "\n";
    std::cout << "formula: " << report.formula << "\n";
    for (const PreCheck& check : report.preconditions)
      std::cout << (check.pass ? "  [ok]   " : "  [FAIL] ") << check.name << "\n";
  }
  return 0;
}

LearnerSpec learnerFromJson(const json& j) {
  if (j.is_string()) return LearnerSpec::fromName(j.get<std::string>());
  LearnerSpec spec = LearnerSpec::fromName(j.at("kind").get<std::string>());
  spec.bonusScale = j.value("bonus", 1.0);
  return spec;
}

int runRegretSweepCommand(const std::string& specFile, const std::string& outDir, long seedFlag,
                          int parallelismFlag) {
  json spec = loadJsonFile(specFile);
  ClassSpec classSpec = classSpecFromJson(spec.at("class"));
  LearnerSpec learner = learnerFromJson(spec.at("learner"));
  long T = spec.at("T").get<long>();
  int seeds = spec.at("seeds").get<int>();
  if (seedFlag < 0 && !spec.contains("seed"))
    throw std::invalid_argument("a seed is required: set \"seed\" in the spec or pass --seed");
  std::uint64_t seed = seedFlag >= 0 ? static_cast<std::uint64_t>(seedFlag)
                                     : spec.at("seed").get<std::uint64_t>();
  int workers = parallelismFlag >= 0 ? parallelismFlag : spec.value("parallelism", 0);

  SweepResult sweep = runRegretSweep(learner, classSpec, T, seeds, seed, workers);
  json summary = sweepSummaryToJson(sweep);
  summary["generated_at"] = isoTimestamp();
  fs::create_directories(outDir);
  writeTextFile(fs::path(outDir) / "regret_sweep.csv", sweepCsv(sweep));
  writeTextFile(fs::path(outDir) / "regret_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int runBpiSweepCommand(const std::string& specFile, const std::string& outDir, long seedFlag,
                       int parallelismFlag) {
  json spec = loadJsonFile(specFile);
  ClassSpec classSpec = classSpecFromJson(spec.at("class"));
  double eps = spec.at("eps").get<double>();
  double delta = spec.at("delta").get<double>();
  int seeds = spec.at("seeds").get<int>();
  long cap = spec.value("cap", 1000000L);
  if (seedFlag < 0 && !spec.contains("seed"))
    throw std::invalid_argument("a seed is required: set \"seed\" in the spec or pass --seed");
  std::uint64_t seed = seedFlag >= 0 ? static_cast<std::uint64_t>(seedFlag)
                                     : spec.at("seed").get<std::uint64_t>();
  int workers = parallelismFlag >= 0 ? parallelismFlag : spec.value("parallelism", 0);

  BpiRunResult result = runBpiSweep({LearnerSpec::Kind::BpiUniform, 1.0}, classSpec, eps, delta,
                                    seeds, seed, cap, workers);
  for (const BpiInstanceRecord& record : result.records)
    if (record.cappedRuns > 0)
      logLine(LogLevel::Warn, "episode cap reached on " + record.params.label() + " in " +
                                  std::to_string(record.cappedRuns) +
                                  " runs; excluded from E[tau]");
  json summary = bpiSummaryToJson(result);
  summary["generated_at"] = isoTimestamp();
  fs::create_directories(outDir);
  writeTextFile(fs::path(outDir) / "bpi_sweep.csv", bpiCsv(result));
  writeTextFile(fs::path(outDir) / "bpi_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct VerifyCheck {
  std::string name;
  bool pass;
};

int runVerify() {
  std::vector<VerifyCheck> checks;
  auto add = [&](const std::string& name, bool pass) {
    checks.push_back({name, pass});
    std::cout << (pass ? "[ok]   " : "[FAIL] ") << name << "\n";
  };

  {  // Trajectory KL: exact decomposition vs brute-force enumeration.
    bool pass = true;
    CounterRng rng(2);
    for (int A = 2; A <= 3 && pass; ++A)
      for (int T = 1; T <= 2 && pass; ++T) {
        Mdp ref = makeS3Stationary(A, 3, std::nullopt, 0.2);
        Mdp arm = makeS3Stationary(A, 3, 0, 0.2);
        MarkovPolicy uniform = MarkovPolicy::uniform(ref);
        pass = std::abs(trajectoryKlExact(ref, arm, uniform, T).total -
                        trajectoryKlBruteForce(ref, arm, uniform, T)) <= 1e-10;
        if (A == 3 && T == 2) continue;  // s4 cell would exceed the enumeration guard
        Mdp s4ref = makeS4Stage(A, 4, 2, std::nullopt, 0.2);
        Mdp s4arm = makeS4Stage(A, 4, 2, Arm{2, -1, A - 1}, 0.2);
        MarkovPolicy pol = MarkovPolicy::uniform(s4ref);
        pass = pass && std::abs(trajectoryKlExact(s4ref, s4arm, pol, T).total -
                                trajectoryKlBruteForce(s4ref, s4arm, pol, T)) <= 1e-10;
      }
    add("trajectory KL: exact decomposition == brute-force enumeration (1e-10)", pass);
  }
  {  // kl(1/2, 1/2+eps) <= 4 eps^2 on the fine grid.
    bool pass = true;
    for (int i = 0; i <= 250; ++i) {
      BoundPair pair = klEpsilonBound(i * 1e-3);
      pass = pass && pair.kl <= pair.bound + 1e-15;
    }
    add("kl(1/2, 1/2+eps) <= 4 eps^2 on [0, 1/4], step 1e-3", pass);
  }
  {  // kl(p,q) >= (1-p)log(1/(1-q)) - log 2.
    bool pass = true;
    for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.01)
      for (double q = 0.0; q < 0.999; q += 0.01) {
        BoundPair pair = klDeltaBound(std::min(p, 1.0), q);
        pass = pass && pair.kl >= pair.bound - 1e-12;
      }
    add("kl(p, q) >= (1-p) log(1/(1-q)) - log 2 on the 0.01 grid", pass);
  }
  {  // Pinsker.
    bool pass = true;
    for (double p = 0.01; p < 1.0; p += 0.01)
      for (double q = 0.01; q < 1.0; q += 0.01) pass = pass && pinskerCheck(p, q).holds;
    add("Pinsker (p-q)^2 <= kl(p, q)/2 on the 0.01 grid", pass);
  }
  {  // Balanced-tree leaf bound.
    bool pass = true;
    for (int A = 2; A <= 6; ++A)
      for (int S = 6; S <= 200; ++S) pass = pass && balancedTreeLeafCount(S, A) * 4 >= S;
    add("balanced A-ary tree on S nodes has at least S/4 leaves (S in 6..200, A in 2..6)", pass);
  }
  {  // kl(delta, 1-delta) >= log(1/(2.4 delta)).
    bool pass = true;
    for (double delta = 0.001; delta <= 0.15 + 1e-12; delta += 0.001)
      pass = pass && klBernoulli(delta, 1.0 - delta) >= std::log(1.0 / (2.4 * delta)) - 1e-12;
    add("kl(delta, 1-delta) >= log(1/(2.4 delta)) for delta in (0, 0.15]", pass);
  }
  {  // Occupancy normalization, duality, and the leaf-window mass.
    bool pass = true;
    HardInstance inst = buildInstance({Family::Tree, 6, 2, 9, 3, 0.1, Arm{4, 1, 0}, std::nullopt});
    CounterRng rng(9);
    for (int i = 0; i < 10 && pass; ++i) {
      MarkovPolicy pol = MarkovPolicy::uniform(inst.mdp);
      if (i > 0) {
        for (int h = 0; h < inst.mdp.horizon; ++h)
          for (int s = 0; s < inst.mdp.numStates; ++s) {
            auto row = pol.row(h, s);
            double sum = 0.0;
            for (int a = 0; a < inst.mdp.numActions; ++a) {
              row[a] = 0.05 + rng.nextUnit();
              sum += row[a];
            }
            for (int a = 0; a < inst.mdp.numActions; ++a) row[a] /= sum;
          }
      }
      OccupancyTable occ = occupancy(inst.mdp, pol);
      double dual = 0.0, windowMass = 0.0;
      for (int h = 0; h < inst.mdp.horizon; ++h) {
        double stageMass = 0.0;
        for (int s = 0; s < inst.mdp.numStates; ++s)
          for (int a = 0; a < inst.mdp.numActions; ++a) {
            stageMass += occ.at(h, s, a);
            dual += occ.at(h, s, a) * inst.mdp.reward(h, s, a);
            if (h + 1 >= inst.windowFirstStage && h + 1 <= inst.windowLastStage &&
                inst.decisiveState(s))
              windowMass += occ.at(h, s, a);
          }
        pass = pass && std::abs(stageMass - 1.0) <= 1e-9;
      }
      pass = pass && std::abs(dual - evaluatePolicy(inst.mdp, pol).rho) <= 1e-9;
      pass = pass && std::abs(windowMass - 1.0) <= 1e-9;
    }
    add("occupancy: per-stage normalization, value duality, unit leaf-window mass", pass);
  }

  bool allPass = true;
  for (const VerifyCheck& check : checks) allPass = allPass && check.pass;
  std::cout << (allPass ? "verify: all checks passed\n" : "verify: FAILURES present\n");
  return allPass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hard episodic-MDP lower-bound workbench"};
  app.require_subcommand(1);

  // gen
  std::string genFamily = "tree", genOut = ".";
  int genS = 6, genA = 2, genH = 9, genHbar = 1, genH0 = -1, genA0 = -1;
  double genEps = 0.1;
  CLI::App* gen = app.add_subcommand("gen", "generate a hard-instance class as JSON files");
  gen->add_option("--family", genFamily, "tree | tree-stationary | s3 | s4 | s4-bpi")->required();
  gen->add_option("--S", genS, "state count (tree families)");
  gen->add_option("--A", genA, "action count")->required();
  gen->add_option("--H", genH, "horizon")->required();
  gen->add_option("--Hbar", genHbar, "waiting window");
  gen->add_option("--eps", genEps, "kernel gap")->required();
  gen->add_option("--h0", genH0, "reference arm stage (s4-bpi)");
  gen->add_option("--a0", genA0, "reference arm action (s4-bpi)");
  gen->add_option("--out", genOut, "output directory");

  // plan
  std::string planFile, planFormat = "table";
  CLI::App* plan = app.add_subcommand("plan", "optimal values and greedy policy of an instance");
  plan->add_option("instance", planFile, "instance JSON file")->required();
  plan->add_option("--format", planFormat, "table | json");

  // kl
  std::string klM0, klM1, klPolicy = "uniform", klFormat = "table";
  long klT = 1;
  CLI::App* kl = app.add_subcommand("kl", "exact trajectory-KL decomposition between two MDPs");
  kl->add_option("--m0", klM0, "first MDP (expectation side)")->required();
  kl->add_option("--m1", klM1, "second MDP")->required();
  kl->add_option("--policy", klPolicy, "'uniform' or a policy JSON file");
  kl->add_option("--T", klT, "episode count")->required();
  kl->add_option("--format", klFormat, "table | json");

  // bound
  std::string boundTheorem, boundBatch, boundFormat = "table";
  int boundH = 0, boundS = 0, boundA = 0;
  double boundT = 0.0, boundEps = 0.0, boundDelta = 0.0;
  CLI::App* bound = app.add_subcommand("bound", "evaluate a lower-bound formula");
  bound->add_option("--theorem", boundTheorem, "theorem id (see README)");
  bound->add_option("--H", boundH, "horizon");
  bound->add_option("--S", boundS, "state count");
  bound->add_option("--A", boundA, "action count");
  bound->add_option("--T", boundT, "episode count (regret bounds)");
  bound->add_option("--eps", boundEps, "accuracy (BPI/PAC bounds)");
  bound->add_option("--delta", boundDelta, "confidence (BPI/PAC bounds)");
  bound->add_option("--batch", boundBatch, "JSON array of inputs; emits CSV");
  bound->add_option("--format", boundFormat, "table | json");

  // sweeps
  std::string regretSpec, regretOut = "sweep_out";
  long regretSeed = -1;
  int regretParallelism = -1;
  CLI::App* regret = app.add_subcommand("regret-sweep", "regret sweep of a learner over a class");
  regret->add_option("--spec", regretSpec, "experiment spec JSON")->required();
  regret->add_option("--out", regretOut, "output directory");
  regret->add_option("--seed", regretSeed, "base seed (overrides the spec)");
  regret->add_option("--parallelism", regretParallelism, "worker cap (0 = all cores)");

  std::string bpiSpec, bpiOut = "sweep_out";
  long bpiSeed = -1;
  int bpiParallelism = -1;
  CLI::App* bpi = app.add_subcommand("bpi-sweep", "BPI stopping-time sweep over a class");
  bpi->add_option("--spec", bpiSpec, "experiment spec JSON")->required();
  bpi->add_option("--out", bpiOut, "output directory");
  bpi->add_option("--seed", bpiSeed, "base seed (overrides the spec)");
  bpi->add_option("--parallelism", bpiParallelism, "worker cap (0 = all cores)");

  CLI::App* verify = app.add_subcommand("verify", "run the oracle suite and exit nonzero on failure");

  try {
    app.parse(argc, argv);
    if (gen->parsed())
      return runGen(genFamily, genS, genA, genH, genHbar, genEps, genH0, genA0, genOut);
    if (plan->parsed()) return runPlan(planFile, planFormat);
    if (kl->parsed()) return runKl(klM0, klM1, klPolicy, klT, klFormat);
    if (bound->parsed())
      return runBound(boundTheorem, boundH, boundS, boundA, boundT, boundEps, boundDelta,
                      boundBatch, boundFormat);
    if (regret->parsed())
      return runRegretSweepCommand(regretSpec, regretOut, regretSeed, regretParallelism);
    if (bpi->parsed()) return runBpiSweepCommand(bpiSpec, bpiOut, bpiSeed, bpiParallelism);
    if (verify->parsed()) return runVerify();
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const nlohmann::json::exception& e) {
    logLine(LogLevel::Error, e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    logLine(LogLevel::Error, e.what());
    return 2;
  } catch (const std::exception& e) {
    logLine(LogLevel::Error, e.what());
    return 1;
  }
}
