#pragma once

// Average-cost solver over the truncated belief-state space z = (beta, r, delta).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ehaoi/belief.hpp"
#include "ehaoi/model.hpp"
#include "ehaoi/rvia.hpp"

namespace ehaoi {

struct BeliefStateZ {
  BeliefIndex belief;
  int r = 0;
  int delta = 1;

  friend bool operator==(const BeliefStateZ&, const BeliefStateZ&) = default;
};

/// Dense indexing of (cell, r, delta); enumeration order is cell-major, then r,
/// then delta.
class BeliefStateSpace {
 public:
  BeliefStateSpace(int battery_capacity, int truncation_M, int delta_max)
      : battery_capacity_(battery_capacity), depth_(truncation_M), delta_max_(delta_max) {}

  std::size_t size() const {
    return static_cast<std::size_t>(battery_capacity_ + 1) * depth_ * 2 * delta_max_;
  }
  std::size_t index(const BeliefStateZ& z) const {
    const auto cell = static_cast<std::size_t>(z.belief.row) * depth_ + z.belief.col;
    return (cell * 2 + z.r) * delta_max_ + (z.delta - 1);
  }
  std::size_t index(int cell, int r, int delta) const {
    return (static_cast<std::size_t>(cell) * 2 + r) * delta_max_ + (delta - 1);
  }
  BeliefStateZ at(std::size_t i) const {
    const int delta = static_cast<int>(i % delta_max_) + 1;
    i /= delta_max_;
    const int r = static_cast<int>(i % 2);
    const int cell = static_cast<int>(i / 2);
    return {{cell / depth_, cell % depth_}, r, delta};
  }

  int battery_capacity() const { return battery_capacity_; }
  int depth() const { return depth_; }
  int delta_max() const { return delta_max_; }

 private:
  int battery_capacity_;
  int depth_;
  int delta_max_;
};

/// Fixed reference state: belief cell (1, 0), r = 0, delta = 1.
inline BeliefStateZ reference_state() { return {{1, 0}, 0, 1}; }

class PolicyTable {
 public:
  PolicyTable(BeliefStateSpace space, std::vector<Action> actions);

  Action operator()(const BeliefStateZ& z) const { return actions_[space_.index(z)]; }
  const BeliefStateSpace& space() const { return space_; }
  const std::vector<Action>& actions() const { return actions_; }

 private:
  BeliefStateSpace space_;
  std::vector<Action> actions_;
};

struct SolveResult {
  SystemConfig config;
  TruncatedBeliefTable table;
  BeliefStateSpace space{1, 1, 2};
  ValueTable values;
  std::vector<double> q0;
  std::vector<double> q1;
  std::vector<Action> policy;
  double average_cost = 0.0;
  std::int64_t iterations = 0;
  double final_span = 0.0;
};

/// Action values of z given relative values h indexed by `BeliefStateSpace`.
std::pair<double, double> q_values(const BeliefStateZ& z, std::span<const double> h,
                                   const TruncatedBeliefTable& table, const SystemConfig& config);

/// Throws IterationLimitError when the span stays above theta for
/// config.max_iterations sweeps.
SolveResult rvia_solve(const SystemConfig& config);

PolicyTable extract_policy(const SolveResult& result);

/// Solve over the unreduced space (beta, r, delta, b_tilde). Test support for
/// the b_tilde invariance of V.
struct ExtendedSolveResult {
  SystemConfig config;
  ValueTable values;
  std::vector<Action> policy;
  double average_cost = 0.0;
  std::int64_t iterations = 0;
  double final_span = 0.0;

  /// Index into values/policy; b_tilde is the fastest-varying coordinate.
  std::size_t index(const BeliefStateSpace& space, const BeliefStateZ& z, int b_tilde) const {
    return space.index(z) * static_cast<std::size_t>(config.battery_capacity) + (b_tilde - 1);
  }
};

ExtendedSolveResult solve_with_btilde(const SystemConfig& config);

}  // namespace ehaoi
