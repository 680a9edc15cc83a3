#pragma once

// Comparison policies: request-aware greedy and the full-battery-knowledge
// MDP benchmark.

#include <cstdint>
#include <vector>

#include "ehaoi/model.hpp"
#include "ehaoi/rvia.hpp"

namespace ehaoi {

/// Commands whenever a request is pending.
inline Action greedy_action(const Observation& obs) { return obs.r == 1 ? Action::kCommand : Action::kIdle; }

struct MdpState {
  int b = 0;
  int r = 0;
  int delta = 1;

  friend bool operator==(const MdpState&, const MdpState&) = default;
};

class MdpStateSpace {
 public:
  MdpStateSpace(int battery_capacity, int delta_max) : battery_capacity_(battery_capacity), delta_max_(delta_max) {}

  std::size_t size() const { return static_cast<std::size_t>(battery_capacity_ + 1) * 2 * delta_max_; }
  std::size_t index(const MdpState& s) const {
    return (static_cast<std::size_t>(s.b) * 2 + s.r) * delta_max_ + (s.delta - 1);
  }
  MdpState at(std::size_t i) const {
    const int delta = static_cast<int>(i % delta_max_) + 1;
    i /= delta_max_;
    return {static_cast<int>(i / 2), static_cast<int>(i % 2), delta};
  }

  int battery_capacity() const { return battery_capacity_; }
  int delta_max() const { return delta_max_; }

 private:
  int battery_capacity_;
  int delta_max_;
};

struct MdpSolveResult {
  SystemConfig config;
  MdpStateSpace space{1, 2};
  ValueTable values;
  std::vector<double> q0;
  std::vector<double> q1;
  std::vector<Action> policy;
  double average_cost = 0.0;
  std::int64_t iterations = 0;
  double final_span = 0.0;

  Action operator()(const MdpState& s) const { return policy[space.index(s)]; }
};

/// Reference state (b = 0, r = 0, delta = 1).
MdpSolveResult mdp_rvia_solve(const SystemConfig& config);

}  // namespace ehaoi
