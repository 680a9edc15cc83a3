#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ehaoi/belief.hpp"
#include "oracles.hpp"

using namespace ehaoi;

namespace {

SystemConfig reference_config(int M = 32) {
  SystemConfig c;
  c.truncation_M = M;
  return c;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
}

Belief random_belief(std::mt19937_64& rng, int cap) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> v(static_cast<std::size_t>(cap) + 1);
  for (auto& x : v) x = exp1(rng);
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= s;
  v.back() = 1.0 - std::accumulate(v.begin(), v.end() - 1, 0.0);
  return Belief(v);
}

}  // namespace

TEST_CASE("build_lambda") {
  const Matrix m = build_lambda(0.08, 2);
  const double expected[3][3] = {{0.92, 0, 0}, {0.08, 0.92, 0}, {0, 0.08, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));

  const Matrix one = build_lambda(1.0, 1);
  CHECK(one(0, 0) == 0.0);
  CHECK(one(0, 1) == 0.0);
  CHECK(one(1, 0) == 1.0);
  CHECK(one(1, 1) == 1.0);

  const Matrix half = build_lambda(0.5, 2);
  CHECK(half(0, 0) == 0.5);
  CHECK(half(1, 0) == 0.5);
  CHECK(half(1, 1) == 0.5);
  CHECK(half(2, 1) == 0.5);
  CHECK(half(2, 2) == 1.0);
}

TEST_CASE("rho reset vectors") {
  check_close(rho(0, 0.08, 2).probs(), {0.92, 0.08, 0.0}, 1e-15);
  check_close(rho(1, 0.08, 2).probs(), {0.92, 0.08, 0.0}, 1e-15);
  check_close(rho(2, 0.08, 2).probs(), {0.0, 0.92, 0.08}, 1e-15);
  check_close(rho(1, 1.0, 2).probs(), {0.0, 1.0, 0.0}, 0.0);
  CHECK_THROWS_AS(rho(3, 0.08, 2), ModelError);
}

TEST_CASE("belief_update cases") {
  const auto c = reference_config();
  const Belief uniform({1.0 / 3, 1.0 / 3, 1.0 / 3});

  const auto idle = belief_update(uniform, Action::kIdle, {1, 6, 1}, 5, 1, c);
  const auto expected = oracle::apply(oracle::lambda_matrix(0.08, 2), uniform.probs());
  check_close(idle.probs(), expected, 1e-15);
  check_close(idle.probs(), {0.92 / 3, 1.0 / 3, 1.08 / 3}, 1e-15);

  const auto fresh = belief_update(uniform, Action::kCommand, {0, 1, 2}, 5, 1, c);
  check_close(fresh.probs(), {0.0, 0.92, 0.08}, 1e-15);

  const auto failed = belief_update(uniform, Action::kCommand, {1, 6, 1}, 5, 1, c);
  check_close(failed.probs(), {0.92, 0.08, 0.0}, 1e-15);

  const auto full = belief_update(Belief::point_mass(2, 2), Action::kIdle, {1, 6, 1}, 5, 1, c);
  check_close(full.probs(), {0.0, 0.0, 1.0}, 0.0);

  // saturated age still distinguishes "no update" from "update"
  const auto aged = belief_update(uniform, Action::kCommand, {1, 64, 2}, 64, 2, c);
  check_close(aged.probs(), {0.92, 0.08, 0.0}, 1e-15);
}

TEST_CASE("belief_update rejects impossible observations") {
  const auto c = reference_config();
  const Belief uniform({1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK_THROWS_AS(belief_update(uniform, Action::kIdle, {1, 1, 2}, 5, 1, c), ModelError);
  CHECK_THROWS_AS(belief_update(uniform, Action::kIdle, {1, 6, 2}, 5, 1, c), ModelError);
  CHECK_THROWS_AS(belief_update(uniform, Action::kCommand, {1, 9, 1}, 5, 1, c), ModelError);
  CHECK_THROWS_AS(belief_update(uniform, Action::kCommand, {1, 1, 3}, 5, 1, c), ModelError);
}

TEST_CASE("belief_update output is always a valid belief") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    SystemConfig c;
    c.battery_capacity = 1 + static_cast<int>(rng() % 5);
    c.lambda = unit(rng);
    c.initial_belief.assign(static_cast<std::size_t>(c.battery_capacity) + 1, 0.0);
    c.initial_belief[0] = 1.0;
    const auto beta = random_belief(rng, c.battery_capacity);
    const int delta = 1 + static_cast<int>(rng() % 64);
    const int bt = 1 + static_cast<int>(rng() % c.battery_capacity);
    const int level = 1 + static_cast<int>(rng() % c.battery_capacity);
    const Observation aged{1, std::min(delta + 1, 64), bt};
    for (const auto& out : {belief_update(beta, Action::kIdle, aged, delta, bt, c),
                            belief_update(beta, Action::kCommand, aged, delta, bt, c),
                            belief_update(beta, Action::kCommand, {0, 1, level}, delta, bt, c)}) {
      double sum = 0.0;
      for (double x : out.probs()) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("full battery is a fixed point of Lambda") {
  for (int cap = 1; cap <= 6; ++cap) {
    for (double lambda : {0.05, 0.5, 1.0}) {
      const auto out = build_lambda(lambda, cap).apply(Belief::point_mass(cap, cap).probs());
      check_close(out, Belief::point_mass(cap, cap).probs(), 0.0);
    }
  }
}

TEST_CASE("lambda_power_closed small cases") {
  const Matrix m = lambda_power_closed(0.5, 2, 2);
  const double expected[3][3] = {{0.25, 0, 0}, {0.5, 0.25, 0}, {0.25, 0.75, 1}};
  const auto ref = oracle::iterated_power(0.5, 2, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(m(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
      CHECK(std::abs(m(i, j) - ref[i][j]) <= 1e-15);
    }
  }

  const Matrix first = lambda_power_closed(0.3, 4, 1);
  const Matrix base = build_lambda(0.3, 4);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(std::abs(first(i, j) - base(i, j)) <= 1e-15);

  const Matrix id = lambda_power_closed(0.3, 3, 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

  // certain harvest with fewer steps than the band width
  const Matrix sure = lambda_power_closed(1.0, 5, 2);
  const auto sure_ref = oracle::iterated_power(1.0, 5, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(std::abs(sure(i, j) - sure_ref[i][j]) <= 1e-15);
}

TEST_CASE("lambda_power_closed matches iterated products and stays column-stochastic") {
  double worst = 0.0;
  double worst_col = 0.0;
  for (double lambda : {0.05, 0.08, 0.3, 0.5, 0.9}) {
    for (int cap = 1; cap <= 5; ++cap) {
      auto ref = oracle::identity(cap + 1);
      const auto base = oracle::lambda_matrix(lambda, cap);
      for (int m = 0; m <= 64; ++m) {
        const Matrix closed = lambda_power_closed(lambda, cap, m);
        for (int l = 0; l <= cap; ++l) {
          double col = 0.0;
          for (int j = 0; j <= cap; ++j) {
            worst = std::max(worst, std::abs(closed(j, l) - ref[j][l]));
            col += closed(j, l);
          }
          worst_col = std::max(worst_col, std::abs(col - 1.0));
        }
        ref = oracle::multiply(base, ref);
      }
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_col <= 1e-12);
}

TEST_CASE("high powers of Lambda concentrate on the full battery") {
  const Matrix m = lambda_power_closed(0.08, 2, 512);
  const auto ref = oracle::iterated_power(0.08, 2, 512);
  for (int l = 0; l <= 2; ++l) {
    CHECK(std::abs(m(0, l)) <= 1e-6);
    CHECK(std::abs(m(1, l)) <= 1e-6);
    CHECK(std::abs(m(2, l) - 1.0) <= 1e-6);
    for (int j = 0; j <= 2; ++j) CHECK(std::abs(m(j, l) - ref[j][l]) <= 1e-12);
  }
}

TEST_CASE("choose_truncation_M agrees with a brute-force scan") {
  CHECK(choose_truncation_M(1.0, 1, Belief({0.5, 0.5}), 1e-9) == 1);
  CHECK(choose_truncation_M(1.0, 1, Belief({1.0, 0.0}), 1e-9) == 1);

  const Belief low({1.0, 0.0, 0.0});
  const int half = choose_truncation_M(0.5, 2, low, 1e-3);
  CHECK(half == oracle::scan_truncation(0.5, 2, {low.probs(), rho(1, 0.5, 2).probs(), rho(2, 0.5, 2).probs()}, 1e-3));

  const Belief uniform({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const int m = choose_truncation_M(0.08, 2, uniform, 1e-2);
  CHECK(m == oracle::scan_truncation(0.08, 2, {uniform.probs(), rho(1, 0.08, 2).probs(), rho(2, 0.08, 2).probs()},
                                     1e-2));
  CHECK(m >= 24);
  CHECK(m <= 40);
  // default tolerance needs a much deeper table
  CHECK(choose_truncation_M(0.08, 2, uniform) > m);
}

TEST_CASE("truncated belief table") {
  const auto c = reference_config(32);
  const auto table = build_truncated_space(c);
  CHECK(table.num_cells() == 96);
  check_close(table.cell({1, 0}).probs(), {0.92, 0.08, 0.0}, 1e-15);
  check_close(table.cell({0, 0}).probs(), c.initial_belief, 0.0);
  check_close(table.cell({0, 1}).probs(), {0.92 / 3, 1.0 / 3, 1.08 / 3}, 1e-15);
  check_close(table.cell({2, 0}).probs(), rho(2, 0.08, 2).probs(), 0.0);

  const auto lam = oracle::lambda_matrix(c.lambda, c.battery_capacity);
  for (int row = 0; row <= 2; ++row) {
    for (int col = 0; col + 1 < 32; ++col) {
      check_close(table.cell({row, col + 1}).probs(), oracle::apply(lam, table.cell({row, col}).probs()), 1e-12);
    }
  }
}

TEST_CASE("belief_index_step") {
  CHECK(belief_index_step({2, 5}, Action::kIdle, false, 0, 2, 32) == BeliefIndex{2, 6});
  CHECK(belief_index_step({0, 3}, Action::kCommand, true, 2, 2, 32) == BeliefIndex{2, 0});
  CHECK(belief_index_step({2, 31}, Action::kIdle, false, 0, 2, 32) == BeliefIndex{2, 31});
  CHECK(belief_index_step({0, 3}, Action::kCommand, false, 0, 2, 32) == BeliefIndex{1, 0});
  CHECK_THROWS_AS(belief_index_step({0, 3}, Action::kCommand, true, 0, 2, 32), ModelError);
  CHECK_THROWS_AS(belief_index_step({0, 3}, Action::kCommand, true, 3, 2, 32), ModelError);
  CHECK_THROWS_AS(belief_index_step({0, 32}, Action::kIdle, false, 0, 2, 32), ModelError);
}

TEST_CASE("symbolic index steps agree with the numeric filter") {
  for (double lambda : {0.08, 0.3}) {
    SystemConfig c = reference_config(16);
    c.lambda = lambda;
    const auto table = build_truncated_space(c);
    for (int cell = 0; cell < table.num_cells(); ++cell) {
      const auto idx = table.unflat(cell);
      if (idx.col >= c.truncation_M - 1) continue;
      const auto& beta = table.cell(idx);
      const int delta = 7, bt = 1;
      check_close(table.cell(table.next(idx, Action::kIdle, false, 0)).probs(),
                  belief_update(beta, Action::kIdle, {1, 8, bt}, delta, bt, c).probs(), 1e-12);
      check_close(table.cell(table.next(idx, Action::kCommand, false, 0)).probs(),
                  belief_update(beta, Action::kCommand, {0, 8, bt}, delta, bt, c).probs(), 1e-12);
      for (int j = 1; j <= c.battery_capacity; ++j) {
        check_close(table.cell(table.next(idx, Action::kCommand, true, j)).probs(),
                    belief_update(beta, Action::kCommand, {1, 1, j}, delta, bt, c).probs(), 1e-12);
      }
    }
  }
}

TEST_CASE("chained filter equals brute-force Bayesian posteriors") {
  SystemConfig c;
  c.lambda = 0.3;
  c.p = 0.8;
  c.battery_capacity = 2;
  c.delta_max = 4;
  c.initial_delta = 2;
  c.initial_belief = {0.2, 0.5, 0.3};

  double worst = 0.0;
  std::size_t histories = 0;
  for (int k = 1; k <= 5; ++k) {
    for (const auto& [h, posterior] : oracle::brute_force_posteriors(c, k)) {
      Belief beta(c.initial_belief);
      for (int t = 0; t < k; ++t) {
        const auto& prev = h.observations[static_cast<std::size_t>(t)];
        beta = belief_update(beta, action_from_int(h.actions[static_cast<std::size_t>(t)]),
                             h.observations[static_cast<std::size_t>(t) + 1], prev.delta, prev.b_tilde, c);
      }
      for (int j = 0; j <= 2; ++j) worst = std::max(worst, std::abs(beta[j] - posterior[static_cast<std::size_t>(j)]));
      ++histories;
    }
  }
  CHECK(histories > 1000);
  CHECK(worst <= 1e-10);
}
