#pragma once

// Relative value iteration for average-cost problems with two actions.
// Shared by the belief-state solver and the full-knowledge benchmark.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ehaoi/model.hpp"

namespace ehaoi {

class IterationLimitError : public std::runtime_error {
 public:
  IterationLimitError(std::int64_t iterations, double last_span)
      : std::runtime_error("relative value iteration did not converge after " + std::to_string(iterations) +
                           " sweeps (span " + std::to_string(last_span) + ")"),
        iterations_(iterations),
        last_span_(last_span) {}

  std::int64_t iterations() const { return iterations_; }
  double last_span() const { return last_span_; }

 private:
  std::int64_t iterations_;
  double last_span_;
};

struct ValueTable {
  std::vector<double> v;
  std::vector<double> h;  // v - v[reference]
  std::size_t reference = 0;
};

struct RviaOptions {
  double theta = 1e-6;
  std::int64_t max_iterations = 100000;
  std::size_t reference = 0;
};

struct RviaOutput {
  ValueTable values;
  std::vector<double> q0;
  std::vector<double> q1;
  std::vector<Action> policy;
  double average_cost = 0.0;
  std::int64_t iterations = 0;
  double final_span = 0.0;
};

/// Span seminorm of v_new - v_old.
double span(std::span<const double> v_new, std::span<const double> v_old);
double span(const ValueTable& v_new, const ValueTable& v_old);

/// Ties go to the idle action.
inline Action argmin_action(double q0, double q1) { return q1 < q0 ? Action::kCommand : Action::kIdle; }

/// Jacobi sweeps V(z) = min_a Q(z, a) with Q evaluated from the frozen
/// previous h, until the span of successive V differences drops below theta.
/// `q_fn(i, h)` returns the pair (Q(i, 0), Q(i, 1)). The returned Q-values
/// and policy are re-evaluated from the final h.
template <typename QFn>
RviaOutput relative_value_iteration(std::size_t num_states, const RviaOptions& options, QFn&& q_fn) {
  if (options.reference >= num_states) throw std::out_of_range("reference state out of range");
  RviaOutput out;
  auto& v = out.values.v;
  auto& h = out.values.h;
  v.assign(num_states, 0.0);
  h.assign(num_states, 0.0);
  out.values.reference = options.reference;
  std::vector<double> v_tmp(num_states, 0.0);

  double delta = 0.0;
  std::int64_t it = 0;
  while (true) {
    if (it >= options.max_iterations) throw IterationLimitError(it, delta);
    for (std::size_t i = 0; i < num_states; ++i) {
      const auto [q0, q1] = q_fn(i, std::as_const(h));
      v_tmp[i] = std::min(q0, q1);
    }
    delta = span(v_tmp, v);
    v.swap(v_tmp);
    const double ref = v[options.reference];
    for (std::size_t i = 0; i < num_states; ++i) h[i] = v[i] - ref;
    ++it;
    if (delta < options.theta) break;
  }

  out.iterations = it;
  out.final_span = delta;
  out.average_cost = v[options.reference];
  out.q0.resize(num_states);
  out.q1.resize(num_states);
  out.policy.resize(num_states);
  for (std::size_t i = 0; i < num_states; ++i) {
    const auto [q0, q1] = q_fn(i, std::as_const(h));
    out.q0[i] = q0;
    out.q1[i] = q1;
    out.policy[i] = argmin_action(q0, q1);
  }
  return out;
}

}  // namespace ehaoi
