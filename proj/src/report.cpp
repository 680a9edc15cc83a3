#include "ehaoi/report.hpp"

#include <fmt/format.h>

namespace ehaoi {

std::string format_number(double x) { return fmt::format("{}", x); }

void write_belief_table_csv(std::ostream& out, const TruncatedBeliefTable& table) {
  out << "row,col";
  for (int j = 0; j <= table.battery_capacity(); ++j) out << ",beta_" << j;
  out << '\n';
  for (int cell = 0; cell < table.num_cells(); ++cell) {
    const auto idx = table.unflat(cell);
    out << idx.row << ',' << idx.col;
    for (double x : table.cell(cell).probs()) out << ',' << format_number(x);
    out << '\n';
  }
}

void write_policy_csv(std::ostream& out, const SolveResult& result) {
  out << "row,col,r,delta,action,q0,q1\n";
  for (std::size_t i = 0; i < result.space.size(); ++i) {
    const auto z = result.space.at(i);
    out << fmt::format("{},{},{},{},{},{},{}\n", z.belief.row, z.belief.col, z.r, z.delta,
                       to_int(result.policy[i]), result.q0[i], result.q1[i]);
  }
}

void write_mdp_policy_csv(std::ostream& out, const MdpSolveResult& result) {
  out << "b,r,delta,action\n";
  for (std::size_t i = 0; i < result.space.size(); ++i) {
    const auto s = result.space.at(i);
    out << fmt::format("{},{},{},{}\n", s.b, s.r, s.delta, to_int(result.policy[i]));
  }
}

nlohmann::json solve_summary_json(const SolveResult& result) {
  return {{"average_cost", result.average_cost},
          {"iterations", result.iterations},
          {"final_span", result.final_span},
          {"config", config_to_json(result.config)}};
}

nlohmann::json metrics_json(const std::string& policy, std::uint64_t seed, const SimMetrics& metrics) {
  return {{"policy", policy},
          {"seed", seed},
          {"T", metrics.horizon},
          {"average_cost", metrics.average_cost},
          {"ci95", metrics.ci95_halfwidth},
          {"request_count", metrics.request_count},
          {"update_count", metrics.update_count}};
}

}  // namespace ehaoi
