#include "ehaoi/simulator.hpp"

#include <cmath>
#include <vector>

#include "ehaoi/rng.hpp"

namespace ehaoi {

namespace {

int draw_level(CounterRng& rng, const std::vector<double>& probs) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    if (u < acc) return static_cast<int>(j);
  }
  // u landed in the rounding slack above the cumulative sum
  for (std::size_t j = probs.size(); j-- > 0;) {
    if (probs[j] > 0.0) return static_cast<int>(j);
  }
  return 0;
}

}  // namespace

SimMetrics simulate(PolicyAdapter& adapter, const SystemConfig& config, std::int64_t horizon, std::uint64_t seed) {
  config.validate();
  if (horizon < 1) throw ModelError("horizon must be >= 1");

  CounterRng energy(seed, streams::kEnergy);
  CounterRng requests(seed, streams::kRequest);
  CounterRng initial(seed, streams::kInitialBattery);

  int b = draw_level(initial, config.initial_belief);
  int r = requests.bernoulli(config.p);
  int delta = config.initial_delta;
  int b_tilde = config.initial_b_tilde;
  adapter.reset();

  const std::int64_t warmup = config.warmup_slots;
  const int batches = horizon >= kBatchCount ? kBatchCount : 1;
  std::vector<double> batch_sum(static_cast<std::size_t>(batches), 0.0);
  std::vector<std::int64_t> batch_len(static_cast<std::size_t>(batches), 0);

  SimMetrics m;
  m.horizon = horizon;
  double total = 0.0;
  for (std::int64_t t = 0; t < warmup + horizon; ++t) {
    if (adapter.reads_true_battery()) adapter.reveal_battery(b);
    const Action a = adapter.act({r, delta, b_tilde});
    const int d = sensor_sends(b, a);
    const int cost = on_demand_aoi(r, d, delta, config.delta_max);
    const int e = energy.bernoulli(config.lambda);

    if (t >= warmup) {
      const std::int64_t k = t - warmup;
      const auto batch = static_cast<std::size_t>(k * batches / horizon);
      batch_sum[batch] += cost;
      ++batch_len[batch];
      total += cost;
      m.request_count += r;
      m.update_count += d;
    }

    const int reported = b;
    if (d == 1) b_tilde = b;
    b = battery_step(b, e, d, config.battery_capacity);  // throws on d = 1 with b = 0
    delta = aoi_step(delta, d, config.delta_max);
    adapter.observe(a, d == 1, d == 1 ? reported : 0);
    r = requests.bernoulli(config.p);
  }

  m.total_cost = total;
  m.average_cost = total / static_cast<double>(horizon);
  if (batches > 1) {
    double mean = 0.0;
    std::vector<double> means(static_cast<std::size_t>(batches));
    for (std::size_t i = 0; i < means.size(); ++i) {
      means[i] = batch_sum[i] / static_cast<double>(batch_len[i]);
      mean += means[i];
    }
    mean /= batches;
    double ss = 0.0;
    for (double x : means) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (batches - 1));
    m.std_error = sd / std::sqrt(static_cast<double>(batches));
    m.ci95_halfwidth = kBatchT95 * m.std_error;
  }
  return m;
}

}  // namespace ehaoi
