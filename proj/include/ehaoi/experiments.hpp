#pragma once

// Experiment drivers behind the command-line tool.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ehaoi/model.hpp"

namespace ehaoi {

enum class Command { kSolve, kSimulate, kPolicyDump, kSweepM, kCompare };

struct ExperimentSpec {
  Command command = Command::kSolve;
  std::string config_path;
  std::string out_path;  // empty: standard output
  std::string policy_out_path;
  std::string belief_out_path;
  std::string policy = "pomdp";  // simulate: pomdp | greedy | genie
  std::vector<std::uint64_t> seeds{1};
  std::int64_t horizon = 1000000;
  std::vector<int> m_values;
  int threads = 1;

  /// Throws ConfigError on inconsistent fields.
  void validate() const;
};

/// Per-policy estimate: Monte Carlo mean over seeds plus the exact chain value.
struct PolicyEstimate {
  double simulated = 0.0;
  double ci95 = 0.0;
  double exact = 0.0;
};

struct SweepRow {
  int M = 0;
  PolicyEstimate pomdp;
  PolicyEstimate mdp;
  PolicyEstimate greedy;
  double solver_average_cost = 0.0;
};

struct CompareReport {
  PolicyEstimate genie;
  PolicyEstimate pomdp;
  PolicyEstimate greedy;
  double reduction_vs_greedy = 0.0;        // 1 - pomdp / greedy, simulated
  double reduction_vs_greedy_exact = 0.0;  // same from the exact chain values
};

void run_solve(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out);
void run_policy_dump(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out);
void run_simulate(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out);

/// Writes a header then one flushed CSV row per M, in m_values order.
std::vector<SweepRow> run_sweep_m(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out);

CompareReport compare_policies(const ExperimentSpec& spec, const SystemConfig& config);
void run_compare(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out);

nlohmann::json compare_report_json(const CompareReport& report, const ExperimentSpec& spec,
                                   const SystemConfig& config);

}  // namespace ehaoi
