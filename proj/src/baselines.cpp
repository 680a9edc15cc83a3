#include "ehaoi/baselines.hpp"

#include <algorithm>

namespace ehaoi {

MdpSolveResult mdp_rvia_solve(const SystemConfig& config) {
  config.validate();
  MdpSolveResult result;
  result.config = config;
  result.space = MdpStateSpace(config.battery_capacity, config.delta_max);
  const auto& space = result.space;
  const int cap = config.battery_capacity;

  auto q_action = [&](const MdpState& s, Action a, const std::vector<double>& h) {
    const int d = sensor_sends(s.b, a);
    const int next_delta = aoi_step(s.delta, d, config.delta_max);
    double q = on_demand_aoi(s.r, d, s.delta, config.delta_max);
    for (int r_next = 0; r_next <= 1; ++r_next) {
      const double pr_r = request_prob(r_next, config.p);
      for (int b_next = std::max(0, s.b - 1); b_next <= std::min(cap, s.b + 1); ++b_next) {
        const double pr_b = battery_transition_prob(s.b, a, b_next, config);
        if (pr_b == 0.0) continue;
        q += pr_r * pr_b * h[space.index({b_next, r_next, next_delta})];
      }
    }
    return q;
  };

  RviaOptions options{config.theta, config.max_iterations, space.index({0, 0, 1})};
  auto out = relative_value_iteration(space.size(), options, [&](std::size_t i, const std::vector<double>& h) {
    const auto s = space.at(i);
    return std::pair{q_action(s, Action::kIdle, h), q_action(s, Action::kCommand, h)};
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

}  // namespace ehaoi
