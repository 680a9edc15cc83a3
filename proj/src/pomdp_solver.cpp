#include "ehaoi/pomdp_solver.hpp"

#include <algorithm>

namespace ehaoi {

namespace {

// Both solvers evaluate Q through this routine so the reduced and extended
// spaces perform identical arithmetic. `lookup(cell, r, delta, b_tilde)`
// returns h of the successor; b_tilde is ignored by the reduced space.
template <typename Lookup>
std::pair<double, double> q_pair(const Belief& beta, BeliefIndex idx, int r, int delta, int b_tilde,
                                 const TruncatedBeliefTable& table, const SystemConfig& config,
                                 Lookup&& lookup) {
  const double p = config.p;
  const int aged = std::min(delta + 1, config.delta_max);
  const int idle_cell = table.flat(table.idle_successor(idx));
  const double q_idle = r * aged + p * lookup(idle_cell, 1, aged, b_tilde) +
                        (1.0 - p) * lookup(idle_cell, 0, aged, b_tilde);

  const double b0 = beta[0];
  const int failed_cell = table.flat({1, 0});
  double q_cmd = r * b0 * aged + r * (1.0 - b0);
  q_cmd += b0 * (p * lookup(failed_cell, 1, aged, b_tilde) + (1.0 - p) * lookup(failed_cell, 0, aged, b_tilde));
  for (int j = 1; j <= config.battery_capacity; ++j) {
    const int reset_cell = table.flat({j, 0});
    q_cmd += beta[j] * (p * lookup(reset_cell, 1, 1, j) + (1.0 - p) * lookup(reset_cell, 0, 1, j));
  }
  return {q_idle, q_cmd};
}

}  // namespace

PolicyTable::PolicyTable(BeliefStateSpace space, std::vector<Action> actions)
    : space_(space), actions_(std::move(actions)) {
  if (actions_.size() != space_.size()) throw ModelError("policy table size does not match its space");
}

std::pair<double, double> q_values(const BeliefStateZ& z, std::span<const double> h,
                                   const TruncatedBeliefTable& table, const SystemConfig& config) {
  const BeliefStateSpace space(config.battery_capacity, table.depth(), config.delta_max);
  if (h.size() != space.size()) throw ModelError("value table does not match the belief-state space");
  auto lookup = [&](int cell, int r, int delta, int) { return h[space.index(cell, r, delta)]; };
  return q_pair(table.cell(z.belief), z.belief, z.r, z.delta, 1, table, config, lookup);
}

SolveResult rvia_solve(const SystemConfig& config) {
  config.validate();
  SolveResult result;
  result.config = config;
  result.table = build_truncated_space(config);
  result.space = BeliefStateSpace(config.battery_capacity, config.truncation_M, config.delta_max);

  const auto& table = result.table;
  const auto& space = result.space;
  std::vector<BeliefStateZ> states(space.size());
  for (std::size_t i = 0; i < states.size(); ++i) states[i] = space.at(i);

  RviaOptions options{config.theta, config.max_iterations, space.index(reference_state())};
  auto out = relative_value_iteration(space.size(), options, [&](std::size_t i, const std::vector<double>& h) {
    const auto& z = states[i];
    auto lookup = [&](int cell, int r, int delta, int) { return h[space.index(cell, r, delta)]; };
    return q_pair(table.cell(z.belief), z.belief, z.r, z.delta, 1, table, config, lookup);
  });

  result.values = std::move(out.values);
  result.q0 = std::move(out.q0);
  result.q1 = std::move(out.q1);
  result.policy = std::move(out.policy);
  result.average_cost = out.average_cost;
  result.iterations = out.iterations;
  result.final_span = out.final_span;
  return result;
}

PolicyTable extract_policy(const SolveResult& result) {
  std::vector<Action> actions(result.q0.size());
  for (std::size_t i = 0; i < actions.size(); ++i) actions[i] = argmin_action(result.q0[i], result.q1[i]);
  return PolicyTable(result.space, std::move(actions));
}

ExtendedSolveResult solve_with_btilde(const SystemConfig& config) {
  config.validate();
  const auto table = build_truncated_space(config);
  const BeliefStateSpace space(config.battery_capacity, config.truncation_M, config.delta_max);
  const auto levels = static_cast<std::size_t>(config.battery_capacity);
  const std::size_t n = space.size() * levels;

  ExtendedSolveResult result;
  result.config = config;
  auto ext_index = [&](std::size_t reduced, int b_tilde) { return reduced * levels + (b_tilde - 1); };

  RviaOptions options{config.theta, config.max_iterations, ext_index(space.index(reference_state()), 1)};
  auto out = relative_value_iteration(n, options, [&](std::size_t i, const std::vector<double>& h) {
    const auto z = space.at(i / levels);
    const int b_tilde = static_cast<int>(i % levels) + 1;
    auto lookup = [&](int cell, int r, int delta, int bt) { return h[ext_index(space.index(cell, r, delta), bt)]; };
    return q_pair(table.cell(z.belief), z.belief, z.r, z.delta, b_tilde, table, config, lookup);
  });

  result.values = std::move(out.values);
  result.policy = std::move(out.policy);
  result.average_cost = out.average_cost;
  result.iterations = out.iterations;
  result.final_span = out.final_span;
  return result;
}

}  // namespace ehaoi
