#pragma once

// Exact long-run average cost of a fixed policy via the stationary
// distribution of the Markov chain it induces.

#include <cstddef>
#include <functional>
#include <vector>

#include "ehaoi/baselines.hpp"
#include "ehaoi/model.hpp"
#include "ehaoi/pomdp_solver.hpp"

namespace ehaoi {

struct ExactEvaluation {
  double average_cost = 0.0;
  std::size_t reachable_states = 0;
  std::size_t class_size = 0;     // states in the evaluated closed class
  std::size_t closed_classes = 0; // closed classes reachable from the start
  bool reducible() const { return closed_classes > 1; }
};

struct Transition {
  std::size_t next;
  double prob;
};

/// Generic finite chain: `expand(i, out)` appends the successors of state i
/// and returns its expected one-slot cost. Starting states carry positive
/// initial probability. With several reachable closed classes a warning is
/// written to stderr and the class reached first from the start is evaluated.
ExactEvaluation stationary_average_cost(
    std::size_t num_states, const std::vector<std::size_t>& start_states,
    const std::function<double(std::size_t, std::vector<Transition>&)>& expand);

/// Full-state chain (b, r, delta) under a policy that sees the true battery.
ExactEvaluation exact_average_cost(const MdpSolveResult& genie, const SystemConfig& config);
ExactEvaluation exact_average_cost(const std::function<Action(const MdpState&)>& policy, const SystemConfig& config);

/// Extended chain (b, belief index, r, delta) under a belief-state policy.
ExactEvaluation exact_average_cost(const PolicyTable& policy, const SystemConfig& config);
ExactEvaluation exact_average_cost(const std::function<Action(const BeliefStateZ&)>& policy,
                                   const SystemConfig& config);

ExactEvaluation exact_average_cost_greedy(const SystemConfig& config);

}  // namespace ehaoi
