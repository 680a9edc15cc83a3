#pragma once

// Monte Carlo evaluation of a command policy on the true environment.

#include <cstdint>
#include <memory>
#include <string>

#include "ehaoi/baselines.hpp"
#include "ehaoi/belief.hpp"
#include "ehaoi/model.hpp"
#include "ehaoi/pomdp_solver.hpp"

namespace ehaoi {

/// What the edge node's controller sees and learns each slot. The harness
/// never reveals the true battery unless `reads_true_battery()` is true,
/// which only the full-knowledge benchmark claims.
class PolicyAdapter {
 public:
  virtual ~PolicyAdapter() = default;

  virtual std::string name() const = 0;
  /// Called once before the first slot of every replication.
  virtual void reset() {}
  virtual Action act(const Observation& obs) = 0;
  /// `reported_level` is the battery level carried by the update packet; only
  /// meaningful when `update_received`.
  virtual void observe(Action /*taken*/, bool /*update_received*/, int /*reported_level*/) {}

  virtual bool reads_true_battery() const { return false; }
  virtual void reveal_battery(int /*b*/) {}
};

class GreedyAdapter final : public PolicyAdapter {
 public:
  std::string name() const override { return "greedy"; }
  Action act(const Observation& obs) override { return greedy_action(obs); }
};

/// Follows a belief-state policy, tracking its own (row, col) belief index.
class BeliefPolicyAdapter final : public PolicyAdapter {
 public:
  explicit BeliefPolicyAdapter(PolicyTable policy) : policy_(std::move(policy)) {}

  std::string name() const override { return "pomdp"; }
  void reset() override { index_ = {0, 0}; }
  Action act(const Observation& obs) override { return policy_({index_, obs.r, obs.delta}); }
  void observe(Action taken, bool update_received, int reported_level) override {
    const auto& space = policy_.space();
    index_ = belief_index_step(index_, taken, update_received, reported_level, space.battery_capacity(),
                               space.depth());
  }

  BeliefIndex index() const { return index_; }

 private:
  PolicyTable policy_;
  BeliefIndex index_{0, 0};
};

class GenieAdapter final : public PolicyAdapter {
 public:
  explicit GenieAdapter(MdpSolveResult solved) : solved_(std::move(solved)) {}

  std::string name() const override { return "genie"; }
  Action act(const Observation& obs) override { return solved_({battery_, obs.r, obs.delta}); }
  bool reads_true_battery() const override { return true; }
  void reveal_battery(int b) override { battery_ = b; }

 private:
  MdpSolveResult solved_;
  int battery_ = 0;
};

struct SimMetrics {
  std::int64_t horizon = 0;
  double total_cost = 0.0;
  double average_cost = 0.0;
  std::int64_t request_count = 0;
  std::int64_t update_count = 0;
  double ci95_halfwidth = 0.0;
  double std_error = 0.0;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

inline constexpr int kBatchCount = 100;
/// Two-sided 95% Student-t quantile with kBatchCount - 1 degrees of freedom.
inline constexpr double kBatchT95 = 1.9842169515;

/// Runs warmup_slots + horizon slots; only the last `horizon` are scored.
/// Deterministic in (adapter, config, horizon, seed).
SimMetrics simulate(PolicyAdapter& adapter, const SystemConfig& config, std::int64_t horizon, std::uint64_t seed);

}  // namespace ehaoi
