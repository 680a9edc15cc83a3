#pragma once

// Status-update model for an energy-harvesting sensor polled by a caching
// edge node: parameters, state/observation spaces, dynamics and costs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ehaoi {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Action : int { kIdle = 0, kCommand = 1 };

inline int to_int(Action a) { return static_cast<int>(a); }
Action action_from_int(int a);

struct SystemConfig {
  double lambda = 0.08;  // energy arrival probability per slot
  double p = 0.8;        // request probability per slot
  int battery_capacity = 2;
  int delta_max = 64;
  int truncation_M = 32;
  double theta = 1e-6;
  std::vector<double> initial_belief{1.0 / 3, 1.0 / 3, 1.0 / 3};

  // Initial visible state. Never specified by the model itself.
  int initial_delta = 1;
  int initial_b_tilde = 1;

  std::int64_t max_iterations = 100000;
  std::int64_t warmup_slots = 0;

  /// Throws ConfigError when any field is out of range.
  void validate() const;

  int num_levels() const { return battery_capacity + 1; }
};

SystemConfig config_from_json(const nlohmann::json& doc);
SystemConfig load_config(const std::string& path);
nlohmann::json config_to_json(const SystemConfig& config);

struct FullState {
  int b = 0;
  int r = 0;
  int delta = 1;
  int b_tilde = 1;

  friend bool operator==(const FullState&, const FullState&) = default;
};

struct Observation {
  int r = 0;
  int delta = 1;
  int b_tilde = 1;

  friend bool operator==(const Observation&, const Observation&) = default;
};

inline Observation visible_part(const FullState& s) { return {s.r, s.delta, s.b_tilde}; }

int battery_step(int b, int e, int d, int battery_capacity);
int aoi_step(int delta, int d, int delta_max);
int on_demand_aoi(int r, int d, int delta, int delta_max);

/// Slot cost r * min((1 - a*1{b>=1})*delta + 1, delta_max).
int immediate_cost(const FullState& s, Action a, int delta_max);

/// Sensor action: transmits only when commanded with a non-empty battery.
inline int sensor_sends(int b, Action a) { return (a == Action::kCommand && b >= 1) ? 1 : 0; }

double request_prob(int r_next, double p);
double battery_transition_prob(int b, Action a, int b_next, const SystemConfig& config);

double transition_prob(const FullState& s, Action a, const FullState& s_next,
                       const SystemConfig& config);

/// Lexicographic in (b, r, delta, b_tilde); 2*B*(B+1)*delta_max entries.
std::vector<FullState> enumerate_states(const SystemConfig& config);
std::vector<Observation> enumerate_observations(const SystemConfig& config);

}  // namespace ehaoi
