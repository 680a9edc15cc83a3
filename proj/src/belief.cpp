#include "ehaoi/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ehaoi {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::apply(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != cols_) throw ModelError("matrix/vector size mismatch");
  std::vector<double> out(static_cast<std::size_t>(rows_), 0.0);
  for (int i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ModelError("belief must be non-empty");
  double sum = 0.0;
  for (double x : probs_) {
    if (!(x >= 0.0)) throw ModelError("belief entries must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ModelError("belief entries must sum to 1");
}

Belief Belief::point_mass(int level, int battery_capacity) {
  std::vector<double> v(static_cast<std::size_t>(battery_capacity) + 1, 0.0);
  v.at(static_cast<std::size_t>(level)) = 1.0;
  return Belief(std::move(v));
}

Matrix build_lambda(double lambda, int battery_capacity) {
  const int n = battery_capacity + 1;
  Matrix m(n, n);
  for (int j = 0; j < battery_capacity; ++j) {
    m(j, j) = 1.0 - lambda;
    m(j + 1, j) = lambda;
  }
  m(battery_capacity, battery_capacity) = 1.0;
  return m;
}

Belief rho(int j, double lambda, int battery_capacity) {
  if (j < 0 || j > battery_capacity) throw ModelError("rho index out of range");
  std::vector<double> v(static_cast<std::size_t>(battery_capacity) + 1, 0.0);
  const int low = std::max(j, 1) - 1;
  v[static_cast<std::size_t>(low)] = 1.0 - lambda;
  v[static_cast<std::size_t>(low) + 1] = lambda;
  return Belief(std::move(v));
}

Belief belief_update(const Belief& beta, Action a, const Observation& obs_next, int delta_prev,
                     int b_tilde_prev, const SystemConfig& config) {
  const int cap = config.battery_capacity;
  if (beta.size() != cap + 1) throw ModelError("belief size does not match battery capacity");
  const int aged = std::min(delta_prev + 1, config.delta_max);
  const bool no_update = obs_next.delta == aged && obs_next.b_tilde == b_tilde_prev;
  const bool fresh = obs_next.delta == 1 && obs_next.b_tilde >= 1 && obs_next.b_tilde <= cap;

  if (a == Action::kIdle) {
    if (!no_update) throw ModelError("inconsistent observation: idle slot cannot deliver an update");
    return Belief(build_lambda(config.lambda, cap).apply(beta.probs()));
  }
  if (no_update) return rho(0, config.lambda, cap);
  if (fresh) return rho(obs_next.b_tilde, config.lambda, cap);
  throw ModelError("inconsistent observation after command");
}

Matrix lambda_power_closed(double lambda, int battery_capacity, int m) {
  if (m < 0) throw ModelError("matrix power must be non-negative");
  const int n = battery_capacity + 1;
  if (m == 0) return Matrix::identity(n);
  Matrix out(n, n);
  const double stay = 1.0 - lambda;
  for (int l = 0; l < n; ++l) {
    double column = 0.0;
    for (int j = l; j < battery_capacity; ++j) {
      const int k = j - l;
      double entry = 0.0;
      if (k <= m) {
        double binom = 1.0;
        for (int v = 0; v < k; ++v) binom *= static_cast<double>(m - v) / static_cast<double>(v + 1);
        entry = binom * std::pow(lambda, k) * std::pow(stay, m - k);
      }
      out(j, l) = entry;
      column += entry;
    }
    out(battery_capacity, l) = std::max(0.0, 1.0 - column);
  }
  return out;
}

namespace {

double max_step_change(const Matrix& now, const Matrix& next, const std::vector<double>& g) {
  const auto a = now.apply(g);
  const auto b = next.apply(g);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

int choose_truncation_M(double lambda, int battery_capacity, const Belief& beta1, double epsilon) {
  if (!(epsilon > 0.0)) throw ModelError("epsilon must be positive");
  std::vector<std::vector<double>> generators{beta1.probs()};
  for (int j = 1; j <= battery_capacity; ++j) generators.push_back(rho(j, lambda, battery_capacity).probs());

  Matrix now = lambda_power_closed(lambda, battery_capacity, 1);
  for (int m = 1;; ++m) {
    Matrix next = lambda_power_closed(lambda, battery_capacity, m + 1);
    double worst = 0.0;
    for (const auto& g : generators) worst = std::max(worst, max_step_change(now, next, g));
    if (worst < epsilon) return m;
    now = std::move(next);
  }
}

BeliefIndex belief_index_step(BeliefIndex idx, Action a, bool update_received, int observed_level,
                              int battery_capacity, int truncation_M) {
  if (idx.row < 0 || idx.row > battery_capacity || idx.col < 0 || idx.col >= truncation_M) {
    throw ModelError("belief index out of range");
  }
  if (a == Action::kIdle) {
    if (update_received) throw ModelError("update received without a command");
    return {idx.row, std::min(idx.col + 1, truncation_M - 1)};
  }
  if (!update_received) return {1, 0};
  if (observed_level < 1 || observed_level > battery_capacity) {
    throw ModelError("reported battery level out of range");
  }
  return {observed_level, 0};
}

TruncatedBeliefTable::TruncatedBeliefTable(const SystemConfig& config)
    : battery_capacity_(config.battery_capacity), depth_(config.truncation_M) {
  config.validate();
  std::vector<Belief> generators{Belief(config.initial_belief)};
  for (int j = 1; j <= battery_capacity_; ++j) generators.push_back(rho(j, config.lambda, battery_capacity_));

  std::vector<Matrix> powers;
  powers.reserve(static_cast<std::size_t>(depth_));
  for (int col = 0; col < depth_; ++col) powers.push_back(lambda_power_closed(config.lambda, battery_capacity_, col));

  cells_.reserve(static_cast<std::size_t>(num_cells()));
  for (const auto& g : generators) {
    for (const auto& power : powers) {
      auto v = power.apply(g.probs());
      // Renormalise rounding drift so every cell passes the Belief invariant.
      const double sum = std::accumulate(v.begin(), v.end(), 0.0);
      for (auto& x : v) x = std::max(0.0, x) / sum;
      cells_.emplace_back(std::move(v));
    }
  }
}

TruncatedBeliefTable build_truncated_space(const SystemConfig& config) { return TruncatedBeliefTable(config); }

}  // namespace ehaoi
