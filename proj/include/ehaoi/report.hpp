#pragma once

// Plot-ready CSV and JSON outputs. Numbers use '.' decimals and round-trip
// precision so identical runs produce identical bytes.

#include <cstdint>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ehaoi/baselines.hpp"
#include "ehaoi/belief.hpp"
#include "ehaoi/pomdp_solver.hpp"
#include "ehaoi/simulator.hpp"

namespace ehaoi {

std::string format_number(double x);

/// row,col,beta_0,...,beta_B
void write_belief_table_csv(std::ostream& out, const TruncatedBeliefTable& table);

/// row,col,r,delta,action,q0,q1 in belief-state enumeration order.
void write_policy_csv(std::ostream& out, const SolveResult& result);

/// b,r,delta,action
void write_mdp_policy_csv(std::ostream& out, const MdpSolveResult& result);

nlohmann::json solve_summary_json(const SolveResult& result);

nlohmann::json metrics_json(const std::string& policy, std::uint64_t seed, const SimMetrics& metrics);

}  // namespace ehaoi
