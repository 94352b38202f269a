#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "nhqw/errors.hpp"
#include "nhqw/scenario.hpp"

namespace {

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("NHQW_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch driver for one-dimensional lossy discrete-time quantum walks"};
  app.name("nhqw");

  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;

  app.add_option("scenario", scenario_path, "Scenario file (key = value format)")->required();
  app.add_option("--out", out_dir, "Output directory for CSV files");
  app.add_option("--seed", seed, "Override the scenario RNG seed")->each([&](const std::string&) {
    seed_given = true;
  });
  app.add_option("--threads", threads, "Worker threads for sweeps (default: NHQW_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    std::ifstream in(scenario_path, std::ios::binary);
    if (!in) {
      std::cerr << "nhqw: cannot read scenario file '" << scenario_path << "'\n";
      return 4;
    }
    std::ostringstream text;
    text << in.rdbuf();

    const nhqw::Scenario scenario = nhqw::parse_scenario(text.str());
    nhqw::RunOptions options;
    options.out_dir = out_dir;
    options.threads = resolve_threads(threads);
    if (seed_given) options.seed = seed;

    const auto written = nhqw::run_scenario(scenario, options);
    std::cout << "wrote " << written.string() << "\n";
    return 0;
  } catch (const nhqw::ConfigError& e) {
    std::cerr << "nhqw: config error: " << e.what() << "\n";
    return 2;
  } catch (const nhqw::IoError& e) {
    std::cerr << "nhqw: i/o error: " << e.what() << "\n";
    return 4;
  } catch (const nhqw::ValidationError& e) {
    std::cerr << "nhqw: error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "nhqw: error: " << e.what() << "\n";
    return 3;
  }
}
