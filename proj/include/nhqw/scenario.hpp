#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nhqw/virtual_lab.hpp"
#include "nhqw/walk.hpp"

namespace nhqw {

enum class CommandKind { Evolve, Spectrum, Lyapunov, Growth, EntropySweep, Dynamics, VirtualLab, Fidelity };

const char* command_name(CommandKind kind);

enum class InitialPreset { H, V, HPlusIV, HMinusIV, Custom };

// One scenario file drives one command; sweeps are declared inside the
// scenario so a run's provenance lives in a single artifact.
struct Scenario {
  CommandKind kind = CommandKind::Evolve;
  std::string output;  // CSV filename inside the output directory

  // Single-point walk parameters (degrees at this boundary, radians inside
  // the library) and sweep grids for the sweep commands.
  double theta_deg = 0.0;
  double gamma = 0.0;
  std::vector<double> theta_deg_grid;
  std::vector<double> gamma_grid;

  int steps = 0;
  InitialPreset initial = InitialPreset::H;
  Complex custom_a_h{1.0, 0.0};
  Complex custom_b_v{0.0, 0.0};
  int position = 0;
  Boundary boundary = Boundary::infinite();
  bool normalize = true;

  int n_sites = 50;      // spectrum
  int k_samples = 1024;  // spectrum

  DetectionConfig detection;  // virtual-lab, fidelity
  int resamples = 200;        // virtual-lab

  InitialState initial_state() const;
  WalkParams walk_params(double theta_deg_value, double gamma_value) const;
};

// Parses the flat key = value scenario format (UTF-8, '#' comments).
// Unknown keys, missing required keys, and out-of-range values all throw
// ConfigError naming the key and line.
Scenario parse_scenario(const std::string& text);

// Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s.
std::string serialize_scenario(const Scenario& s);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  int threads = 1;
};

// Executes the scenario and writes its CSV dataset. Identical scenario and
// seed produce byte-identical files. Returns the path written.
std::filesystem::path run_scenario(const Scenario& s, const RunOptions& options);

}  // namespace nhqw
