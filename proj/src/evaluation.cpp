#include "ehaoi/evaluation.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "ehaoi/belief.hpp"

namespace ehaoi {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

struct Chain {
  std::vector<std::vector<Transition>> edges;  // local indices
  std::vector<double> cost;
};

// Iterative Tarjan; returns the component id of every node.
std::vector<std::size_t> strongly_connected(const Chain& chain, std::size_t& count) {
  const std::size_t n = chain.edges.size();
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next edge
  std::size_t next_index = 0;
  count = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e == 0 && index[v] == kUnset) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (e < chain.edges[v].size()) {
        const std::size_t w = chain.edges[v][e].next;
        ++e;
        if (index[w] == kUnset) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

double solve_stationary_cost(const Chain& chain, const std::vector<std::size_t>& members) {
  const auto n = static_cast<Eigen::Index>(members.size());
  std::vector<std::size_t> local(chain.edges.size(), kUnset);
  for (std::size_t k = 0; k < members.size(); ++k) local[members[k]] = k;

  // Rows of (I - P)^T pi = 0, with the last equation replaced by sum(pi) = 1.
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    if (col != n - 1) triplets.emplace_back(col, col, 1.0);
    for (const auto& t : chain.edges[members[k]]) {
      const auto row = static_cast<Eigen::Index>(local[t.next]);
      if (row != n - 1) triplets.emplace_back(row, col, -t.prob);
    }
    triplets.emplace_back(n - 1, col, 1.0);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw std::runtime_error("stationary solve: factorization failed");
  const Eigen::VectorXd pi = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("stationary solve: back-substitution failed");

  double cost = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) cost += pi(static_cast<Eigen::Index>(k)) * chain.cost[members[k]];
  return cost;
}

}  // namespace

ExactEvaluation stationary_average_cost(
    std::size_t num_states, const std::vector<std::size_t>& start_states,
    const std::function<double(std::size_t, std::vector<Transition>&)>& expand) {
  std::vector<std::size_t> local(num_states, kUnset);
  std::vector<std::size_t> order;
  Chain chain;
  for (std::size_t s : start_states) {
    if (s >= num_states) throw std::out_of_range("start state out of range");
    if (local[s] == kUnset) {
      local[s] = order.size();
      order.push_back(s);
    }
  }

  std::vector<Transition> scratch;
  for (std::size_t head = 0; head < order.size(); ++head) {
    scratch.clear();
    const double c = expand(order[head], scratch);
    std::vector<Transition> out;
    for (const auto& t : scratch) {
      if (t.prob <= 0.0) continue;
      if (t.next >= num_states) throw std::out_of_range("successor state out of range");
      if (local[t.next] == kUnset) {
        local[t.next] = order.size();
        order.push_back(t.next);
      }
      out.push_back({local[t.next], t.prob});
    }
    chain.edges.push_back(std::move(out));
    chain.cost.push_back(c);
  }

  std::size_t comp_count = 0;
  const auto comp = strongly_connected(chain, comp_count);
  std::vector<bool> closed(comp_count, true);
  for (std::size_t v = 0; v < chain.edges.size(); ++v) {
    for (const auto& t : chain.edges[v]) {
      if (comp[t.next] != comp[v]) closed[comp[v]] = false;
    }
  }

  ExactEvaluation result;
  result.reachable_states = chain.edges.size();
  result.closed_classes = static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
  std::size_t chosen = kUnset;
  for (std::size_t v = 0; v < chain.edges.size() && chosen == kUnset; ++v) {
    if (closed[comp[v]]) chosen = comp[v];
  }
  if (result.closed_classes > 1) {
    std::cerr << "warning: policy chain has " << result.closed_classes
              << " closed classes; evaluating the one reached first from the start\n";
  }

  std::vector<std::size_t> members;
  for (std::size_t v = 0; v < chain.edges.size(); ++v) {
    if (comp[v] == chosen) members.push_back(v);
  }
  result.class_size = members.size();
  result.average_cost = solve_stationary_cost(chain, members);
  return result;
}

ExactEvaluation exact_average_cost(const std::function<Action(const MdpState&)>& policy, const SystemConfig& config) {
  config.validate();
  const MdpStateSpace space(config.battery_capacity, config.delta_max);
  std::vector<std::size_t> starts;
  for (int b = 0; b <= config.battery_capacity; ++b) {
    if (config.initial_belief[static_cast<std::size_t>(b)] <= 0.0) continue;
    for (int r = 0; r <= 1; ++r) {
      if (request_prob(r, config.p) > 0.0) starts.push_back(space.index({b, r, config.initial_delta}));
    }
  }

  return stationary_average_cost(space.size(), starts, [&](std::size_t i, std::vector<Transition>& out) {
    const auto s = space.at(i);
    const Action a = policy(s);
    const int d = sensor_sends(s.b, a);
    const int next_delta = aoi_step(s.delta, d, config.delta_max);
    for (int e = 0; e <= 1; ++e) {
      const double pe = e == 1 ? config.lambda : 1.0 - config.lambda;
      const int b_next = battery_step(s.b, e, d, config.battery_capacity);
      for (int r_next = 0; r_next <= 1; ++r_next) {
        out.push_back({space.index({b_next, r_next, next_delta}), pe * request_prob(r_next, config.p)});
      }
    }
    return static_cast<double>(on_demand_aoi(s.r, d, s.delta, config.delta_max));
  });
}

ExactEvaluation exact_average_cost(const MdpSolveResult& genie, const SystemConfig& config) {
  return exact_average_cost(std::function<Action(const MdpState&)>([&](const MdpState& s) { return genie(s); }),
                            config);
}

ExactEvaluation exact_average_cost(const std::function<Action(const BeliefStateZ&)>& policy,
                                   const SystemConfig& config) {
  config.validate();
  const BeliefStateSpace zspace(config.battery_capacity, config.truncation_M, config.delta_max);
  const std::size_t zsize = zspace.size();
  const auto levels = static_cast<std::size_t>(config.num_levels());
  auto encode = [&](int b, const BeliefStateZ& z) { return static_cast<std::size_t>(b) * zsize + zspace.index(z); };

  std::vector<std::size_t> starts;
  for (int b = 0; b <= config.battery_capacity; ++b) {
    if (config.initial_belief[static_cast<std::size_t>(b)] <= 0.0) continue;
    for (int r = 0; r <= 1; ++r) {
      if (request_prob(r, config.p) > 0.0) starts.push_back(encode(b, {{0, 0}, r, config.initial_delta}));
    }
  }

  return stationary_average_cost(levels * zsize, starts, [&](std::size_t i, std::vector<Transition>& out) {
    const int b = static_cast<int>(i / zsize);
    const auto z = zspace.at(i % zsize);
    const Action a = policy(z);
    const int d = sensor_sends(b, a);
    const int next_delta = aoi_step(z.delta, d, config.delta_max);
    const BeliefIndex next_idx =
        belief_index_step(z.belief, a, d == 1, b, config.battery_capacity, config.truncation_M);
    for (int e = 0; e <= 1; ++e) {
      const double pe = e == 1 ? config.lambda : 1.0 - config.lambda;
      const int b_next = battery_step(b, e, d, config.battery_capacity);
      for (int r_next = 0; r_next <= 1; ++r_next) {
        out.push_back({encode(b_next, {next_idx, r_next, next_delta}), pe * request_prob(r_next, config.p)});
      }
    }
    return static_cast<double>(on_demand_aoi(z.r, d, z.delta, config.delta_max));
  });
}

ExactEvaluation exact_average_cost(const PolicyTable& policy, const SystemConfig& config) {
  if (policy.space().depth() != config.truncation_M || policy.space().delta_max() != config.delta_max ||
      policy.space().battery_capacity() != config.battery_capacity) {
    throw ModelError("policy table shape does not match the config");
  }
  return exact_average_cost(std::function<Action(const BeliefStateZ&)>(
                                [&](const BeliefStateZ& z) { return policy(z); }),
                            config);
}

ExactEvaluation exact_average_cost_greedy(const SystemConfig& config) {
  return exact_average_cost(
      std::function<Action(const MdpState&)>([](const MdpState& s) { return greedy_action({s.r, s.delta, 1}); }),
      config);
}

}  // namespace ehaoi
