#include <algorithm>
#include <filesystem>
#include <future>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "plot.hpp"

namespace fs = std::filesystem;
using namespace lorenzflow;
using namespace lorenzflow::cli;

namespace {

enum Exit { ok = 0, assertion_failed = 1, config_error = 2, other_error = 3 };

struct Outcome {
  int code = other_error;
  std::string line;
};

Outcome execute(const std::string& path, Mode mode) {
  try {
    const auto config = load_config(path);
    const auto s = run_experiment(config, mode, output_root());
    std::string line = (s.pass() ? "PASS " : "FAIL ") + s.name;
    for (const auto& a : s.assertions)
      if (!a.pass) line += "\n  failed " + a.name + " = " + format_number(a.value) + " (tolerance " +
                           format_number(a.tolerance) + ")";
    return {s.pass() ? ok : assertion_failed, line};
  } catch (const Error& e) {
    return {e.kind() == ErrorKind::ConfigError ? config_error : other_error,
            "ERROR " + path + ": " + std::string(to_string(e.kind())) + ": " + e.what()};
  } catch (const std::exception& e) {
    return {other_error, "ERROR " + path + ": " + e.what()};
  }
}

int sweep(const std::string& dir, std::size_t jobs) {
  if (!fs::is_directory(dir)) {
    std::cerr << "sweep: '" << dir << "' is not a directory\n";
    return config_error;
  }
  std::vector<std::string> configs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") configs.push_back(e.path().string());
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    std::cerr << "sweep: no *.json configs in '" << dir << "'\n";
    return config_error;
  }
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  // Runs share no mutable state; results are reported in config order.
  std::vector<Outcome> results(configs.size());
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    std::vector<std::future<Outcome>> batch;
    for (std::size_t i = start; i < std::min(configs.size(), start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, execute, configs[i], Mode::run));
    for (std::size_t i = 0; i < batch.size(); ++i) results[start + i] = batch[i].get();
  }
  int code = ok;
  for (const auto& r : results) {
    std::cout << r.line << "\n";
    code = std::max(code, r.code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lorenzflow: density and Lorenz-curve flows, metrics and their equivalences"};
  app.require_subcommand(1);

  std::string config_path, dir;
  std::size_t jobs = 0;
  auto* run_cmd = app.add_subcommand("run", "run one experiment and write its artifacts");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  auto* verify_cmd = app.add_subcommand("verify", "check assertions only; writes summary.json");
  verify_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "run every *.json config in a directory");
  sweep_cmd->add_option("dir", dir, "config directory")->required();
  sweep_cmd->add_option("-j,--jobs", jobs, "concurrent runs (default: hardware threads)");
  auto* plot_cmd = app.add_subcommand("plot", "re-draw plot.svg from a run directory");
  plot_cmd->add_option("run-dir", dir, "run directory")->required();
  app.footer("Output root: $LORENZFLOW_OUTPUT_ROOT (default ./runs).");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  if (*run_cmd || *verify_cmd) {
    const auto r = execute(config_path, *run_cmd ? Mode::run : Mode::verify);
    (r.code == ok || r.code == assertion_failed ? std::cout : std::cerr) << r.line << "\n";
    return r.code;
  }
  if (*sweep_cmd) return sweep(dir, jobs);
  try {
    std::cout << plot_run(dir) << "\n";
    return ok;
  } catch (const Error& e) {
    std::cerr << "ERROR " << to_string(e.kind()) << ": " << e.what() << "\n";
    return other_error;
  }
}
