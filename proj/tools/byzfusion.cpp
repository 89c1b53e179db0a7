// byzfusion: command-line front end for the Byzantine decision-fusion
// analysis library.
//
//   byzfusion chernoff --pd 0.6 --pf 0.4 --alpha 0.4 --p10 1 --p01 1
//   byzfusion sweep    --pd 0.6 --pf 0.4 --alpha 0.8 --step 0.05 --out fig.csv
//   byzfusion blind    --p10 1 --p01 0.25
//   byzfusion exponent --config scenario.conf --format json
//   byzfusion simulate --config scenario.conf --seed 7 --workers 4

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "byzfusion/byzfusion.hpp"

namespace {

using namespace byzfusion;

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"--pd", "sensor.pd", "sensor detection probability"},
    {"--pf", "sensor.pf", "sensor false-alarm probability"},
    {"--alpha", "network.alpha", "Byzantine fraction"},
    {"--p0", "network.p0", "prior of H0"},
    {"--p1", "network.p1", "prior of H1"},
    {"--n", "network.n", "number of sensors"},
    {"--p10", "attack.p10", "Byzantine flip probability 0 -> 1"},
    {"--p01", "attack.p01", "Byzantine flip probability 1 -> 0"},
    {"--theta", "model.theta", "Gaussian mean shift under H1"},
    {"--lambda", "model.lambda", "local likelihood-ratio threshold"},
    {"--trials", "simulate.trials", "Monte Carlo trials"},
    {"--seed", "simulate.seed", "Monte Carlo seed (default $BYZFUSION_SEED, then 1)"},
    {"--mode", "simulate.mode", "fixed-fraction | per-node-bernoulli"},
    {"--n-values", "exponent.n_values", "comma-separated sensor counts for the exponent fit"},
    {"--step", "sweep.step", "grid step for the (p10, p01) sweep"},
};

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  unsigned workers = 1;
  std::map<std::string, std::string> flags;  // config key -> text
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file (key = value lines)");
  cmd->add_option("--out", opts.out_path, "output file (default: standard output)");
  cmd->add_option("--format", opts.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", opts.workers, "worker threads")->check(CLI::PositiveNumber);
  for (const FlagSpec& spec : kFlags) {
    const std::string key = spec.key;
    cmd->add_option_function<std::string>(
        spec.flag, [&opts, key](const std::string& value) { opts.flags[key] = value; }, spec.help);
  }
}

RunConfig assemble(const CommonOptions& opts) {
  RunConfig config = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
  RunConfig overrides;
  for (const auto& [key, value] : opts.flags) overrides.set(key, value);
  config.overlay(overrides);
  config.validate();
  return config;
}

void emit(const CommonOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file '" + opts.out_path + "'");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing output file '" + opts.out_path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chernoff-information analysis of distributed detection under Byzantine data falsification"};
  app.require_subcommand(1);

  CommonOptions opts;
  CLI::App* chernoff = app.add_subcommand("chernoff", "marginals, t*, C and the t* bracket for one scenario");
  CLI::App* sweep = app.add_subcommand("sweep", "C over the (p10, p01) grid");
  CLI::App* blind = app.add_subcommand("blind", "blinding fraction of an attack, or the optimal attack for alpha");
  CLI::App* exponent = app.add_subcommand("exponent", "fit the exact finite-N error exponent against C");
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo error probability of the fusion rule");
  for (CLI::App* cmd : {chernoff, sweep, blind, exponent, simulate_cmd}) add_common(cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = assemble(opts);
    const OutputFormat format = parse_output_format(opts.format);
    std::string text;
    if (chernoff->parsed()) {
      text = render(cmd_chernoff(config.resolve_sensor(), config.resolve_alpha(), config.resolve_attack()), format);
    } else if (sweep->parsed()) {
      SweepSpec spec{config.resolve_sensor(), config.resolve_alpha(), config.step.value_or(kDefaultGridStep), format};
      text = render(cmd_sweep(spec, opts.workers), format);
    } else if (blind->parsed()) {
      text = render(cmd_blind(config.alpha, config.attack()), format);
    } else if (exponent->parsed()) {
      text = render(cmd_exponent(config), format);
    } else if (simulate_cmd->parsed()) {
      text = render(cmd_simulate(config, opts.workers), format);
    }
    emit(opts, text);
  } catch (const byzfusion::Error& e) {
    std::cerr << "byzfusion: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
