#pragma once

// Exact belief filter over the sensor battery level and its finite
// (row, col) tabulation.

#include <algorithm>
#include <span>
#include <vector>

#include "ehaoi/model.hpp"

namespace ehaoi {

/// Dense row-major matrix; only small (B+1)x(B+1) instances are used.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<double> apply(std::span<const double> v) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Probability vector over battery levels 0..B.
class Belief {
 public:
  Belief() = default;
  /// Throws ModelError unless entries are non-negative and sum to 1 within 1e-12.
  explicit Belief(std::vector<double> probs);

  static Belief point_mass(int level, int battery_capacity);

  const std::vector<double>& probs() const { return probs_; }
  double operator[](int level) const { return probs_[static_cast<std::size_t>(level)]; }
  int size() const { return static_cast<int>(probs_.size()); }

 private:
  std::vector<double> probs_;
};

/// Coordinates in the truncated belief table. Row 0 holds the initial belief,
/// row j >= 1 the reset vector rho^j; col counts applications of Lambda.
struct BeliefIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const BeliefIndex&, const BeliefIndex&) = default;
};

/// Left-stochastic lower-bidiagonal propagation matrix for one idle slot.
Matrix build_lambda(double lambda, int battery_capacity);

/// Belief after an update revealing level j (j = 0 is the failed command).
Belief rho(int j, double lambda, int battery_capacity);

/// Bayes update of the battery belief after action a and next observation.
/// Throws ModelError when the observation is impossible for the action.
Belief belief_update(const Belief& beta, Action a, const Observation& obs_next, int delta_prev,
                     int b_tilde_prev, const SystemConfig& config);

/// Lambda^m via its binomial closed form; row B is filled from column sums.
Matrix lambda_power_closed(double lambda, int battery_capacity, int m);

/// Smallest M >= 1 with max_g |Lambda^M g - Lambda^(M+1) g|_inf < epsilon over
/// g in {beta1, rho^1..rho^B}.
int choose_truncation_M(double lambda, int battery_capacity, const Belief& beta1, double epsilon = 1e-6);

BeliefIndex belief_index_step(BeliefIndex idx, Action a, bool update_received, int observed_level,
                              int battery_capacity, int truncation_M);

class TruncatedBeliefTable {
 public:
  TruncatedBeliefTable() = default;
  explicit TruncatedBeliefTable(const SystemConfig& config);

  int battery_capacity() const { return battery_capacity_; }
  int depth() const { return depth_; }
  int num_rows() const { return battery_capacity_ + 1; }
  int num_cells() const { return num_rows() * depth_; }

  int flat(BeliefIndex idx) const { return idx.row * depth_ + idx.col; }
  BeliefIndex unflat(int cell) const { return {cell / depth_, cell % depth_}; }

  const Belief& cell(BeliefIndex idx) const { return cells_[static_cast<std::size_t>(flat(idx))]; }
  const Belief& cell(int flat_index) const { return cells_[static_cast<std::size_t>(flat_index)]; }

  BeliefIndex next(BeliefIndex idx, Action a, bool update_received, int observed_level) const {
    return belief_index_step(idx, a, update_received, observed_level, battery_capacity_, depth_);
  }

  /// Successor cell under a = 0 (col saturates at M - 1).
  BeliefIndex idle_successor(BeliefIndex idx) const { return {idx.row, std::min(idx.col + 1, depth_ - 1)}; }

 private:
  int battery_capacity_ = 0;
  int depth_ = 0;
  std::vector<Belief> cells_;
};

TruncatedBeliefTable build_truncated_space(const SystemConfig& config);

}  // namespace ehaoi
