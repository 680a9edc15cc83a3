#include "ehaoi/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace ehaoi {

Action action_from_int(int a) {
  if (a != 0 && a != 1) throw ModelError("action must be 0 or 1, got " + std::to_string(a));
  return a == 1 ? Action::kCommand : Action::kIdle;
}

void SystemConfig::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in (0, 1]");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  if (battery_capacity < 1) throw ConfigError("battery_capacity must be >= 1");
  if (delta_max < 2) throw ConfigError("delta_max must be >= 2");
  if (truncation_M < 1) throw ConfigError("truncation_M must be >= 1");
  if (!(theta > 0.0)) throw ConfigError("theta must be > 0");
  if (static_cast<int>(initial_belief.size()) != num_levels()) {
    throw ConfigError("initial_belief must have battery_capacity + 1 entries");
  }
  double sum = 0.0;
  for (double x : initial_belief) {
    if (!(x >= 0.0)) throw ConfigError("initial_belief entries must be >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("initial_belief must sum to 1");
  if (initial_delta < 1 || initial_delta > delta_max) {
    throw ConfigError("initial_delta must lie in [1, delta_max]");
  }
  if (initial_b_tilde < 1 || initial_b_tilde > battery_capacity) {
    throw ConfigError("initial_b_tilde must lie in [1, battery_capacity]");
  }
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (warmup_slots < 0) throw ConfigError("warmup_slots must be >= 0");
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "lambda",       "p",           "battery_capacity", "delta_max",     "truncation_M",
      "theta",        "initial_belief", "initial_delta", "initial_b_tilde", "max_iterations",
      "warmup_slots"};
  return keys;
}

template <typename T>
void read_key(const nlohmann::json& doc, const char* key, T& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

SystemConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  for (const char* required : {"lambda", "p", "battery_capacity", "delta_max", "initial_belief"}) {
    if (!doc.contains(required)) throw ConfigError(std::string("missing config key '") + required + "'");
  }
  SystemConfig config;
  read_key(doc, "lambda", config.lambda);
  read_key(doc, "p", config.p);
  read_key(doc, "battery_capacity", config.battery_capacity);
  read_key(doc, "delta_max", config.delta_max);
  read_key(doc, "truncation_M", config.truncation_M);
  read_key(doc, "theta", config.theta);
  read_key(doc, "initial_belief", config.initial_belief);
  read_key(doc, "initial_delta", config.initial_delta);
  read_key(doc, "initial_b_tilde", config.initial_b_tilde);
  read_key(doc, "max_iterations", config.max_iterations);
  read_key(doc, "warmup_slots", config.warmup_slots);
  config.validate();
  return config;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
  return config_from_json(doc);
}

nlohmann::json config_to_json(const SystemConfig& config) {
  return {{"lambda", config.lambda},
          {"p", config.p},
          {"battery_capacity", config.battery_capacity},
          {"delta_max", config.delta_max},
          {"truncation_M", config.truncation_M},
          {"theta", config.theta},
          {"initial_belief", config.initial_belief},
          {"initial_delta", config.initial_delta},
          {"initial_b_tilde", config.initial_b_tilde},
          {"max_iterations", config.max_iterations},
          {"warmup_slots", config.warmup_slots}};
}

int battery_step(int b, int e, int d, int battery_capacity) {
  if (b < 0 || b > battery_capacity) throw ModelError("battery level out of range");
  if ((e != 0 && e != 1) || (d != 0 && d != 1)) throw ModelError("e and d must be binary");
  if (d == 1 && b == 0) throw ModelError("energy causality violated: transmit with empty battery");
  return std::min(b + e - d, battery_capacity);
}

int aoi_step(int delta, int d, int delta_max) {
  if (delta < 1 || delta > delta_max) throw ModelError("AoI out of range");
  if (d != 0 && d != 1) throw ModelError("d must be binary");
  return d == 1 ? 1 : std::min(delta + 1, delta_max);
}

int on_demand_aoi(int r, int d, int delta, int delta_max) {
  if (delta < 1 || delta > delta_max) throw ModelError("AoI out of range");
  if ((r != 0 && r != 1) || (d != 0 && d != 1)) throw ModelError("r and d must be binary");
  return r * std::min((1 - d) * delta + 1, delta_max);
}

int immediate_cost(const FullState& s, Action a, int delta_max) {
  return on_demand_aoi(s.r, sensor_sends(s.b, a), s.delta, delta_max);
}

double request_prob(int r_next, double p) {
  if (r_next == 1) return p;
  if (r_next == 0) return 1.0 - p;
  return 0.0;
}

double battery_transition_prob(int b, Action a, int b_next, const SystemConfig& config) {
  const int cap = config.battery_capacity;
  const double lam = config.lambda;
  if (a == Action::kIdle || b == 0) {
    if (b == cap) return b_next == cap ? 1.0 : 0.0;
    if (b_next == b + 1) return lam;
    if (b_next == b) return 1.0 - lam;
    return 0.0;
  }
  if (b_next == b) return lam;
  if (b_next == b - 1) return 1.0 - lam;
  return 0.0;
}

double transition_prob(const FullState& s, Action a, const FullState& s_next,
                       const SystemConfig& config) {
  const double pr_r = request_prob(s_next.r, config.p);
  const double pr_b = battery_transition_prob(s.b, a, s_next.b, config);
  bool visible_ok = false;
  if (sensor_sends(s.b, a) == 1) {
    visible_ok = s_next.delta == 1 && s_next.b_tilde == s.b;
  } else {
    visible_ok = s_next.delta == std::min(s.delta + 1, config.delta_max) && s_next.b_tilde == s.b_tilde;
  }
  return visible_ok ? pr_r * pr_b : 0.0;
}

std::vector<FullState> enumerate_states(const SystemConfig& config) {
  std::vector<FullState> states;
  states.reserve(static_cast<std::size_t>(2) * config.battery_capacity * config.num_levels() *
                 config.delta_max);
  for (int b = 0; b <= config.battery_capacity; ++b)
    for (int r = 0; r <= 1; ++r)
      for (int delta = 1; delta <= config.delta_max; ++delta)
        for (int bt = 1; bt <= config.battery_capacity; ++bt) states.push_back({b, r, delta, bt});
  return states;
}

std::vector<Observation> enumerate_observations(const SystemConfig& config) {
  std::vector<Observation> obs;
  for (int r = 0; r <= 1; ++r)
    for (int delta = 1; delta <= config.delta_max; ++delta)
      for (int bt = 1; bt <= config.battery_capacity; ++bt) obs.push_back({r, delta, bt});
  return obs;
}

}  // namespace ehaoi
