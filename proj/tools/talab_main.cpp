#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "talab/calibration.hpp"
#include "talab/config.hpp"
#include "talab/scenarios.hpp"
#include "talab/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"talab - numerical verification suites for variance and influence inequalities"};
  app.set_version_flag("--version", talab::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "execute the scenarios of a config file");
  run->add_option("config", config_path, "config file path")->required();
  run->add_option("--out", out_dir, "output directory for JSON/CSV reports");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "global seed (splits per scenario)");
  run->add_option("--jobs", jobs, "concurrent scenarios")->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand("list", "list builtin scenarios");

  std::string constant_id;
  std::uint64_t corpus_seed = 0;
  CLI::App* calibrate = app.add_subcommand("calibrate", "recompute a calibrated constant");
  calibrate->add_option("constant-id", constant_id, "constant identifier")->required();
  CLI::Option* corpus_opt =
      calibrate->add_option("--corpus-seed", corpus_seed, "corpus seed (default: the frozen seed)");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    talab::list_scenarios(std::cout);
    return 0;
  }

  if (calibrate->parsed()) {
    try {
      const talab::CalibratedConstant& frozen = talab::calibrated(constant_id);
      std::uint64_t use_seed = corpus_opt->count() > 0 ? corpus_seed : frozen.corpus_seed;
      double value = talab::recalibrate(constant_id, use_seed);
      std::cout.precision(17);
      std::cout << constant_id << " seed=" << use_seed << " value=" << value << "\n";
      std::cout << "frozen: seed=" << frozen.corpus_seed << " value=" << frozen.value << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "calibrate error: " << e.what() << "\n";
      return 2;
    }
  }

  // run
  talab::Config cfg;
  try {
    cfg = talab::parse_config_file(config_path);
  } catch (const talab::ConfigError& e) {
    std::cerr << config_path << ":" << e.line() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  talab::RunOptions options;
  options.jobs = jobs;
  if (seed_opt->count() > 0) options.seed = seed;
  if (!out_dir.empty()) {
    options.out_dir = out_dir;
  } else if (const char* env = std::getenv("TALAB_OUT")) {
    options.out_dir = env;
  }
  return talab::run_config(cfg, options, std::cout);
}
