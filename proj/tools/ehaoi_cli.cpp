// ehaoi: solve, simulate and sweep the partial-battery-knowledge status
// update problem.
//
//   ehaoi solve       --config cfg.json [--out summary.json] [--policy-out policy.csv]
//   ehaoi policy-dump --config cfg.json --out policy.csv
//   ehaoi simulate    --config cfg.json --policy pomdp|greedy|genie --seeds 1,2 --horizon N
//   ehaoi sweep-m     --config cfg.json --m-values 1,2,4,8 --out sweep.csv [--threads N]
//   ehaoi compare     --config cfg.json --out compare.json
//
// Exit status: 0 on success, 2 for invalid arguments or config, 1 for any
// other failure (solver divergence, I/O errors).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ehaoi/experiments.hpp"
#include "ehaoi/model.hpp"
#include "ehaoi/rvia.hpp"

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw ehaoi::ConfigError(std::string("bad entry '") + item + "' in " + flag);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Status updating with an energy-harvesting sensor under partial battery knowledge"};
  app.require_subcommand(1);

  ehaoi::ExperimentSpec spec;
  std::string seeds_text = "1";
  std::string m_values_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", spec.config_path, "JSON system config")->required();
    sub->add_option("--out", spec.out_path, "output file (default: stdout)");
    sub->add_option("--seeds", seeds_text, "comma-separated seeds");
    sub->add_option("--horizon", spec.horizon, "simulated slots per seed");
    sub->add_option("--threads", spec.threads, "worker threads");
  };

  auto* solve = app.add_subcommand("solve", "solve the belief-state problem and write a JSON summary");
  add_common(solve);
  solve->add_option("--policy-out", spec.policy_out_path, "also write the policy CSV");
  solve->add_option("--belief-out", spec.belief_out_path, "also write the truncated belief table CSV");

  auto* dump = app.add_subcommand("policy-dump", "write the optimal policy with both action values as CSV");
  add_common(dump);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo evaluation of one policy");
  add_common(sim);
  sim->add_option("--policy", spec.policy, "pomdp, greedy or genie");

  auto* sweep = app.add_subcommand("sweep-m", "cost versus truncation depth M");
  add_common(sweep);
  sweep->add_option("--m-values", m_values_text, "comma-separated, strictly increasing")->required();

  auto* compare = app.add_subcommand("compare", "genie, POMDP and greedy costs side by side");
  add_common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ehaoi::SystemConfig config;
  try {
    spec.seeds = parse_list<std::uint64_t>(seeds_text, "--seeds");
    spec.m_values = parse_list<int>(m_values_text, "--m-values");
    if (sim->parsed()) spec.command = ehaoi::Command::kSimulate;
    else if (dump->parsed()) spec.command = ehaoi::Command::kPolicyDump;
    else if (sweep->parsed()) spec.command = ehaoi::Command::kSweepM;
    else if (compare->parsed()) spec.command = ehaoi::Command::kCompare;
    spec.validate();
    config = ehaoi::load_config(spec.config_path);
  } catch (const ehaoi::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::ofstream file;
    if (!spec.out_path.empty()) {
      file.open(spec.out_path);
      if (!file) {
        std::cerr << "error: cannot open '" << spec.out_path << "' for writing\n";
        return 1;
      }
    }
    std::ostream& out = spec.out_path.empty() ? std::cout : file;

    switch (spec.command) {
      case ehaoi::Command::kSolve: ehaoi::run_solve(spec, config, out); break;
      case ehaoi::Command::kPolicyDump: ehaoi::run_policy_dump(spec, config, out); break;
      case ehaoi::Command::kSimulate: ehaoi::run_simulate(spec, config, out); break;
      case ehaoi::Command::kSweepM: ehaoi::run_sweep_m(spec, config, out); break;
      case ehaoi::Command::kCompare: ehaoi::run_compare(spec, config, out); break;
    }
    out.flush();
    if (!out) {
      std::cerr << "error: failed writing output\n";
      return 1;
    }
  } catch (const ehaoi::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
