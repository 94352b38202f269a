#include "nhqw/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "nhqw/errors.hpp"

namespace nhqw {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

struct RawEntry {
  std::string value;
  int line;
};

double parse_double(const std::string& key, const RawEntry& e) {
  const std::string v = trim(e.value);
  size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, e.line, "expected a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(out)) {
    throw ConfigError(key, e.line, "expected a number, got '" + v + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& key, const RawEntry& e) {
  const std::string v = trim(e.value);
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(key, e.line, "expected an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const RawEntry& e) {
  const std::string v = trim(e.value);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key, e.line, "expected true or false, got '" + v + "'");
}

// Grid values: either a comma list "45,57,65" or a range "start:stop:step"
// inclusive of stop (within a 1e-9 step slack).
std::vector<double> parse_grid(const std::string& key, const RawEntry& e) {
  const std::string v = trim(e.value);
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    std::array<double, 3> parts;
    std::stringstream ss(v);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ':')) {
      if (i >= 3) throw ConfigError(key, e.line, "range needs start:stop:step");
      parts[i++] = parse_double(key, {tok, e.line});
    }
    if (i != 3) throw ConfigError(key, e.line, "range needs start:stop:step");
    const auto [start, stop, step_size] = std::tuple{parts[0], parts[1], parts[2]};
    if (step_size <= 0.0 || stop < start) {
      throw ConfigError(key, e.line, "range needs stop >= start and step > 0");
    }
    for (int n = 0;; ++n) {
      const double x = start + n * step_size;
      if (x > stop + 1e-9 * step_size) break;
      out.push_back(x);
    }
  } else {
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      out.push_back(parse_double(key, {tok, e.line}));
    }
  }
  if (out.empty()) throw ConfigError(key, e.line, "grid must be non-empty");
  return out;
}

void check_theta_deg(const std::string& key, double deg, int line) {
  if (deg < 0.0 || deg > 90.0) {
    throw ConfigError(key, line, "coin angle must lie in [0, 90] degrees, got " +
                                     std::to_string(deg));
  }
}

void check_gamma(const std::string& key, double g, int line) {
  if (g < 0.0) {
    throw ConfigError(key, line, "loss parameter must be >= 0, got " + std::to_string(g));
  }
}

const std::map<std::string, CommandKind> kCommands = {
    {"evolve", CommandKind::Evolve},         {"spectrum", CommandKind::Spectrum},
    {"lyapunov", CommandKind::Lyapunov},     {"growth", CommandKind::Growth},
    {"entropy-sweep", CommandKind::EntropySweep}, {"dynamics", CommandKind::Dynamics},
    {"virtual-lab", CommandKind::VirtualLab}, {"fidelity", CommandKind::Fidelity}};

// Key sets per command; parsing is fail-closed, so anything not listed here
// for the scenario's command aborts before computation.
const std::set<std::string> kCommonKeys = {"command", "output"};

std::set<std::string> allowed_keys(CommandKind kind) {
  std::set<std::string> keys = kCommonKeys;
  auto add = [&keys](std::initializer_list<const char*> more) {
    for (const char* k : more) keys.insert(k);
  };
  switch (kind) {
    case CommandKind::Evolve:
      add({"theta_deg", "gamma", "steps", "initial", "a_h", "b_v", "position", "boundary",
           "n_sites", "normalize"});
      break;
    case CommandKind::Spectrum:
      add({"theta_deg", "gamma", "n_sites", "k_samples"});
      break;
    case CommandKind::Lyapunov:
      add({"theta_deg_grid", "gamma_grid", "steps", "initial", "a_h", "b_v"});
      break;
    case CommandKind::Growth:
      add({"theta_deg", "gamma", "steps"});
      break;
    case CommandKind::EntropySweep:
      add({"theta_deg_grid", "gamma_grid", "steps", "initial", "a_h", "b_v"});
      break;
    case CommandKind::Dynamics:
      add({"theta_deg", "gamma", "steps", "initial", "a_h", "b_v"});
      break;
    case CommandKind::VirtualLab:
      add({"theta_deg", "gamma", "steps", "initial", "shots", "survival", "efficiency", "seed",
           "resamples"});
      break;
    case CommandKind::Fidelity:
      add({"theta_deg", "gamma", "steps", "initial", "shots", "survival", "efficiency", "seed"});
      break;
  }
  return keys;
}

Complex parse_complex_pair(const std::string& key, const RawEntry& e) {
  std::stringstream ss(trim(e.value));
  std::string re, im;
  if (!std::getline(ss, re, ',') || !std::getline(ss, im)) {
    throw ConfigError(key, e.line, "expected 're,im'");
  }
  return {parse_double(key, {re, e.line}), parse_double(key, {im, e.line})};
}

}  // namespace

const char* command_name(CommandKind kind) {
  for (const auto& [name, k] : kCommands) {
    if (k == kind) return name.c_str();
  }
  return "?";
}

InitialState Scenario::initial_state() const {
  constexpr double kInvSqrt2 = 0.7071067811865475244;
  switch (initial) {
    case InitialPreset::H:
      return {position, {1.0, 0.0}, {0.0, 0.0}};
    case InitialPreset::V:
      return {position, {0.0, 0.0}, {1.0, 0.0}};
    case InitialPreset::HPlusIV:
      return {position, {kInvSqrt2, 0.0}, {0.0, kInvSqrt2}};
    case InitialPreset::HMinusIV:
      return {position, {kInvSqrt2, 0.0}, {0.0, -kInvSqrt2}};
    case InitialPreset::Custom:
      return {position, custom_a_h, custom_b_v};
  }
  return {};
}

WalkParams Scenario::walk_params(double theta_deg_value, double gamma_value) const {
  WalkParams p;
  p.theta = theta_deg_value * kDegToRad;
  p.gamma = gamma_value;
  p.boundary = boundary;
  p.normalize_each_step = normalize;
  return p;
}

Scenario parse_scenario(const std::string& text) {
  std::map<std::string, RawEntry> entries;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const size_t hash = raw.find('#');
    std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                        body + "'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (entries.count(key)) {
      throw ConfigError(key, line_no, "duplicate key (first on line " +
                                          std::to_string(entries.at(key).line) + ")");
    }
    entries[key] = {value, line_no};
  }

  const auto cmd_it = entries.find("command");
  if (cmd_it == entries.end()) throw ConfigError("missing required key 'command'");
  const auto kind_it = kCommands.find(trim(cmd_it->second.value));
  if (kind_it == kCommands.end()) {
    throw ConfigError("command", cmd_it->second.line,
                      "unknown command '" + trim(cmd_it->second.value) + "'");
  }

  Scenario s;
  s.kind = kind_it->second;
  const auto allowed = allowed_keys(s.kind);
  for (const auto& [key, entry] : entries) {
    if (!allowed.count(key)) {
      throw ConfigError(key, entry.line, "unknown key for command '" +
                                             std::string(command_name(s.kind)) + "'");
    }
  }

  auto find = [&entries](const char* key) -> const RawEntry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto require = [&](const char* key) -> const RawEntry& {
    const RawEntry* e = find(key);
    if (!e) throw ConfigError(std::string("missing required key '") + key + "'");
    return *e;
  };

  // Command-independent defaults.
  s.output = find("output") ? trim(find("output")->value) : std::string(command_name(s.kind)) + ".csv";
  if (s.output.empty()) throw ConfigError("output", find("output")->line, "empty filename");

  const bool sweep = s.kind == CommandKind::Lyapunov || s.kind == CommandKind::EntropySweep;
  if (sweep) {
    s.theta_deg_grid = parse_grid("theta_deg_grid", require("theta_deg_grid"));
    for (double d : s.theta_deg_grid) check_theta_deg("theta_deg_grid", d, require("theta_deg_grid").line);
    s.gamma_grid = parse_grid("gamma_grid", require("gamma_grid"));
    for (double g : s.gamma_grid) check_gamma("gamma_grid", g, require("gamma_grid").line);
  } else {
    const RawEntry& th = require("theta_deg");
    s.theta_deg = parse_double("theta_deg", th);
    check_theta_deg("theta_deg", s.theta_deg, th.line);
    const RawEntry& ga = require("gamma");
    s.gamma = parse_double("gamma", ga);
    check_gamma("gamma", s.gamma, ga.line);
  }

  if (const RawEntry* e = find("initial")) {
    const std::string v = trim(e->value);
    if (find("a_h") || find("b_v")) {
      throw ConfigError("initial", e->line, "give either a preset or a_h/b_v, not both");
    }
    if (v == "H") s.initial = InitialPreset::H;
    else if (v == "V") s.initial = InitialPreset::V;
    else if (v == "H+iV") s.initial = InitialPreset::HPlusIV;
    else if (v == "H-iV") s.initial = InitialPreset::HMinusIV;
    else throw ConfigError("initial", e->line, "expected H, V, H+iV, or H-iV, got '" + v + "'");
  } else if (find("a_h") || find("b_v")) {
    if (!find("a_h") || !find("b_v")) {
      throw ConfigError("custom initial state needs both a_h and b_v");
    }
    s.initial = InitialPreset::Custom;
    s.custom_a_h = parse_complex_pair("a_h", *find("a_h"));
    s.custom_b_v = parse_complex_pair("b_v", *find("b_v"));
    const double n = std::norm(s.custom_a_h) + std::norm(s.custom_b_v);
    if (std::abs(n - 1.0) > 1e-12) {
      throw ConfigError("a_h", find("a_h")->line, "|a_h|^2 + |b_v|^2 must equal 1, got " +
                                                      std::to_string(n));
    }
  }

  switch (s.kind) {
    case CommandKind::Evolve: {
      s.steps = static_cast<int>(parse_int("steps", require("steps")));
      if (s.steps < 0) throw ConfigError("steps", require("steps").line, "must be >= 0");
      if (const RawEntry* e = find("position")) s.position = static_cast<int>(parse_int("position", *e));
      if (const RawEntry* e = find("normalize")) s.normalize = parse_bool("normalize", *e);
      std::string b = find("boundary") ? trim(find("boundary")->value) : "infinite";
      if (b == "infinite") {
        s.boundary = Boundary::infinite();
        if (find("n_sites")) {
          throw ConfigError("n_sites", find("n_sites")->line,
                            "only meaningful for open or periodic boundaries");
        }
      } else if (b == "open" || b == "periodic") {
        const RawEntry& ns = require("n_sites");
        s.n_sites = static_cast<int>(parse_int("n_sites", ns));
        s.boundary = b == "open" ? Boundary::open(s.n_sites) : Boundary::periodic(s.n_sites);
      } else {
        throw ConfigError("boundary", find("boundary")->line,
                          "expected infinite, open, or periodic, got '" + b + "'");
      }
      break;
    }
    case CommandKind::Spectrum: {
      if (const RawEntry* e = find("n_sites")) {
        s.n_sites = static_cast<int>(parse_int("n_sites", *e));
        if (s.n_sites < 2 || s.n_sites % 2 != 0) {
          throw ConfigError("n_sites", e->line, "must be even and >= 2");
        }
      }
      if (const RawEntry* e = find("k_samples")) {
        s.k_samples = static_cast<int>(parse_int("k_samples", *e));
        if (s.k_samples < 16) throw ConfigError("k_samples", e->line, "must be >= 16");
      }
      break;
    }
    case CommandKind::Lyapunov: {
      s.steps = 2000;
      if (const RawEntry* e = find("steps")) s.steps = static_cast<int>(parse_int("steps", *e));
      if (s.steps < 2 || s.steps % 2 != 0) {
        throw ConfigError("steps", find("steps") ? find("steps")->line : 0,
                          "must be even and >= 2 so that v = 0 is on the velocity grid");
      }
      break;
    }
    case CommandKind::Growth: {
      s.steps = 20;
      if (const RawEntry* e = find("steps")) s.steps = static_cast<int>(parse_int("steps", *e));
      if (s.steps < 2) {
        throw ConfigError("steps", find("steps") ? find("steps")->line : 0, "must be >= 2");
      }
      break;
    }
    case CommandKind::EntropySweep: {
      s.steps = 20;
      if (const RawEntry* e = find("steps")) s.steps = static_cast<int>(parse_int("steps", *e));
      if (s.steps < 0) throw ConfigError("steps", find("steps")->line, "must be >= 0");
      break;
    }
    case CommandKind::Dynamics: {
      s.steps = static_cast<int>(parse_int("steps", require("steps")));
      if (s.steps < 0) throw ConfigError("steps", require("steps").line, "must be >= 0");
      break;
    }
    case CommandKind::VirtualLab:
    case CommandKind::Fidelity: {
      s.steps = static_cast<int>(parse_int("steps", require("steps")));
      if (s.steps < 0) throw ConfigError("steps", require("steps").line, "must be >= 0");
      s.detection.shots = parse_int("shots", require("shots"));
      if (s.detection.shots < 1) throw ConfigError("shots", require("shots").line, "must be >= 1");
      if (const RawEntry* e = find("survival")) {
        s.detection.per_step_survival = parse_double("survival", *e);
        if (s.detection.per_step_survival < 0.0 || s.detection.per_step_survival > 1.0) {
          throw ConfigError("survival", e->line, "must lie in [0, 1]");
        }
      }
      if (const RawEntry* e = find("efficiency")) {
        s.detection.detection_efficiency = parse_double("efficiency", *e);
        if (s.detection.detection_efficiency < 0.0 || s.detection.detection_efficiency > 1.0) {
          throw ConfigError("efficiency", e->line, "must lie in [0, 1]");
        }
      }
      if (const RawEntry* e = find("seed")) {
        s.detection.seed = static_cast<std::uint64_t>(parse_int("seed", *e));
      }
      if (s.kind == CommandKind::VirtualLab) {
        if (const RawEntry* e = find("resamples")) {
          s.resamples = static_cast<int>(parse_int("resamples", *e));
          if (s.resamples < 100) throw ConfigError("resamples", e->line, "must be >= 100");
        }
        // The sigma_z / sigma_x pair determines chi only for real-amplitude
        // walks; reject complex launches up front.
        if (s.initial == InitialPreset::HPlusIV || s.initial == InitialPreset::HMinusIV ||
            (s.initial == InitialPreset::Custom &&
             (s.custom_a_h.imag() != 0.0 || s.custom_b_v.imag() != 0.0))) {
          throw ConfigError("initial", find("initial") ? find("initial")->line : 0,
                            "density-matrix reconstruction needs a real-amplitude launch (H or V)");
        }
      }
      break;
    }
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out.precision(17);
  out << "command = " << command_name(s.kind) << "\n";
  out << "output = " << s.output << "\n";

  auto grid = [&out](const char* key, const std::vector<double>& values) {
    out << key << " = ";
    for (size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    out << "\n";
  };
  auto initial = [&out, &s] {
    switch (s.initial) {
      case InitialPreset::H: out << "initial = H\n"; break;
      case InitialPreset::V: out << "initial = V\n"; break;
      case InitialPreset::HPlusIV: out << "initial = H+iV\n"; break;
      case InitialPreset::HMinusIV: out << "initial = H-iV\n"; break;
      case InitialPreset::Custom:
        out << "a_h = " << s.custom_a_h.real() << "," << s.custom_a_h.imag() << "\n";
        out << "b_v = " << s.custom_b_v.real() << "," << s.custom_b_v.imag() << "\n";
        break;
    }
  };
  const bool sweep = s.kind == CommandKind::Lyapunov || s.kind == CommandKind::EntropySweep;
  if (sweep) {
    grid("theta_deg_grid", s.theta_deg_grid);
    grid("gamma_grid", s.gamma_grid);
  } else {
    out << "theta_deg = " << s.theta_deg << "\n";
    out << "gamma = " << s.gamma << "\n";
  }

  switch (s.kind) {
    case CommandKind::Evolve:
      out << "steps = " << s.steps << "\n";
      initial();
      out << "position = " << s.position << "\n";
      out << "boundary = "
          << (s.boundary.kind == BoundaryKind::Infinite
                  ? "infinite"
                  : s.boundary.kind == BoundaryKind::Open ? "open" : "periodic")
          << "\n";
      if (s.boundary.finite()) out << "n_sites = " << s.boundary.n_sites << "\n";
      out << "normalize = " << (s.normalize ? "true" : "false") << "\n";
      break;
    case CommandKind::Spectrum:
      out << "n_sites = " << s.n_sites << "\n";
      out << "k_samples = " << s.k_samples << "\n";
      break;
    case CommandKind::Lyapunov:
    case CommandKind::EntropySweep:
      out << "steps = " << s.steps << "\n";
      initial();
      break;
    case CommandKind::Growth:
      out << "steps = " << s.steps << "\n";
      break;
    case CommandKind::Dynamics:
      out << "steps = " << s.steps << "\n";
      initial();
      break;
    case CommandKind::VirtualLab:
    case CommandKind::Fidelity:
      out << "steps = " << s.steps << "\n";
      initial();
      out << "shots = " << s.detection.shots << "\n";
      out << "survival = " << s.detection.per_step_survival << "\n";
      out << "efficiency = " << s.detection.detection_efficiency << "\n";
      out << "seed = " << s.detection.seed << "\n";
      if (s.kind == CommandKind::VirtualLab) out << "resamples = " << s.resamples << "\n";
      break;
  }
  return out.str();
}

}  // namespace nhqw
