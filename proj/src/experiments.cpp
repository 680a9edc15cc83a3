#include "ehaoi/experiments.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <future>

#include <fmt/format.h>

#include "ehaoi/baselines.hpp"
#include "ehaoi/evaluation.hpp"
#include "ehaoi/pomdp_solver.hpp"
#include "ehaoi/report.hpp"
#include "ehaoi/simulator.hpp"

namespace ehaoi {

void ExperimentSpec::validate() const {
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (policy != "pomdp" && policy != "greedy" && policy != "genie") {
    throw ConfigError("policy must be one of pomdp, greedy, genie");
  }
  if (command == Command::kSweepM) {
    if (m_values.empty()) throw ConfigError("sweep-m needs --m-values");
    for (std::size_t i = 0; i < m_values.size(); ++i) {
      if (m_values[i] < 1) throw ConfigError("m-values must be >= 1");
      if (i > 0 && m_values[i] <= m_values[i - 1]) throw ConfigError("m-values must be strictly increasing");
    }
  }
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  return f;
}

// Mean over independent replications; CI half-widths combine in quadrature.
PolicyEstimate simulate_over_seeds(PolicyAdapter& adapter, const SystemConfig& config, const ExperimentSpec& spec) {
  PolicyEstimate est;
  double var = 0.0;
  for (auto seed : spec.seeds) {
    const auto m = simulate(adapter, config, spec.horizon, seed);
    est.simulated += m.average_cost;
    var += m.ci95_halfwidth * m.ci95_halfwidth;
  }
  const auto n = static_cast<double>(spec.seeds.size());
  est.simulated /= n;
  est.ci95 = std::sqrt(var) / n;
  return est;
}

PolicyEstimate estimate_pomdp(const SolveResult& solved, const SystemConfig& config, const ExperimentSpec& spec) {
  BeliefPolicyAdapter adapter(extract_policy(solved));
  auto est = simulate_over_seeds(adapter, config, spec);
  est.exact = exact_average_cost(extract_policy(solved), config).average_cost;
  return est;
}

PolicyEstimate estimate_genie(const MdpSolveResult& solved, const SystemConfig& config, const ExperimentSpec& spec) {
  GenieAdapter adapter(solved);
  auto est = simulate_over_seeds(adapter, config, spec);
  est.exact = exact_average_cost(solved, config).average_cost;
  return est;
}

PolicyEstimate estimate_greedy(const SystemConfig& config, const ExperimentSpec& spec) {
  GreedyAdapter adapter;
  auto est = simulate_over_seeds(adapter, config, spec);
  est.exact = exact_average_cost_greedy(config).average_cost;
  return est;
}

double relative_reduction(double cost, double baseline) { return baseline > 0.0 ? 1.0 - cost / baseline : 0.0; }

nlohmann::json estimate_json(const PolicyEstimate& e) {
  return {{"average_cost", e.simulated}, {"ci95", e.ci95}, {"exact_average_cost", e.exact}};
}

}  // namespace

void run_solve(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out) {
  const auto solved = rvia_solve(config);
  if (!spec.policy_out_path.empty()) {
    auto f = open_output(spec.policy_out_path);
    write_policy_csv(f, solved);
  }
  if (!spec.belief_out_path.empty()) {
    auto f = open_output(spec.belief_out_path);
    write_belief_table_csv(f, solved.table);
  }
  out << solve_summary_json(solved).dump(2) << '\n';
}

void run_policy_dump(const ExperimentSpec& /*spec*/, const SystemConfig& config, std::ostream& out) {
  write_policy_csv(out, rvia_solve(config));
}

void run_simulate(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out) {
  std::unique_ptr<PolicyAdapter> adapter;
  if (spec.policy == "greedy") {
    adapter = std::make_unique<GreedyAdapter>();
  } else if (spec.policy == "genie") {
    adapter = std::make_unique<GenieAdapter>(mdp_rvia_solve(config));
  } else {
    adapter = std::make_unique<BeliefPolicyAdapter>(extract_policy(rvia_solve(config)));
  }
  auto records = nlohmann::json::array();
  for (auto seed : spec.seeds) records.push_back(metrics_json(adapter->name(), seed, simulate(*adapter, config, spec.horizon, seed)));
  out << records.dump(2) << '\n';
}

std::vector<SweepRow> run_sweep_m(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out) {
  spec.validate();
  const auto genie = estimate_genie(mdp_rvia_solve(config), config, spec);
  const auto greedy = estimate_greedy(config, spec);

  auto solve_one = [&](int m) {
    SystemConfig c = config;
    c.truncation_M = m;
    const auto solved = rvia_solve(c);
    SweepRow row;
    row.M = m;
    row.pomdp = estimate_pomdp(solved, c, spec);
    row.mdp = genie;
    row.greedy = greedy;
    row.solver_average_cost = solved.average_cost;
    return row;
  };

  out << "M,cost_pomdp,cost_mdp,cost_greedy,ci95_pomdp,exact_pomdp,exact_mdp,exact_greedy,solver_cost_pomdp\n";
  out.flush();
  std::vector<SweepRow> rows;
  const auto workers = static_cast<std::size_t>(spec.threads);
  for (std::size_t begin = 0; begin < spec.m_values.size(); begin += workers) {
    const std::size_t end = std::min(spec.m_values.size(), begin + workers);
    std::vector<std::future<SweepRow>> pending;
    for (std::size_t k = begin; k < end; ++k) {
      pending.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, solve_one,
                                   spec.m_values[k]));
    }
    for (auto& f : pending) {
      const auto row = f.get();  // an exception here leaves earlier rows on disk
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", row.M, row.pomdp.simulated, row.mdp.simulated,
                         row.greedy.simulated, row.pomdp.ci95, row.pomdp.exact, row.mdp.exact, row.greedy.exact,
                         row.solver_average_cost);
      out.flush();
      rows.push_back(row);
    }
  }
  return rows;
}

CompareReport compare_policies(const ExperimentSpec& spec, const SystemConfig& config) {
  spec.validate();
  CompareReport report;
  report.genie = estimate_genie(mdp_rvia_solve(config), config, spec);
  report.pomdp = estimate_pomdp(rvia_solve(config), config, spec);
  report.greedy = estimate_greedy(config, spec);
  report.reduction_vs_greedy = relative_reduction(report.pomdp.simulated, report.greedy.simulated);
  report.reduction_vs_greedy_exact = relative_reduction(report.pomdp.exact, report.greedy.exact);
  return report;
}

nlohmann::json compare_report_json(const CompareReport& report, const ExperimentSpec& spec,
                                   const SystemConfig& config) {
  return {{"config", config_to_json(config)},
          {"horizon", spec.horizon},
          {"seeds", spec.seeds},
          {"policies", {{"genie", estimate_json(report.genie)},
                        {"pomdp", estimate_json(report.pomdp)},
                        {"greedy", estimate_json(report.greedy)}}},
          {"reduction_vs_greedy", report.reduction_vs_greedy},
          {"reduction_vs_greedy_exact", report.reduction_vs_greedy_exact}};
}

void run_compare(const ExperimentSpec& spec, const SystemConfig& config, std::ostream& out) {
  out << compare_report_json(compare_policies(spec, config), spec, config).dump(2) << '\n';
}

}  // namespace ehaoi
