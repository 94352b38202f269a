#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nhqw/csv.hpp"
#include "nhqw/errors.hpp"
#include "nhqw/observables.hpp"
#include "nhqw/parallel.hpp"
#include "nhqw/scenario.hpp"
#include "nhqw/spectral.hpp"
#include "nhqw/virtual_lab.hpp"

namespace nhqw {

namespace {

std::string join(std::initializer_list<std::string> fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ',';
    out += f;
  }
  return out;
}

void write_distribution(CsvWriter& csv, const WalkState& state) {
  csv.line("t,x,p_h,p_v");
  const auto dist = probability_distribution(state);
  for (int x = dist.offset; x < dist.offset + dist.size(); ++x) {
    csv.line(join({std::to_string(state.t), std::to_string(x), csv_double(dist.at_h(x)),
                   csv_double(dist.at_v(x))}));
  }
}

void run_evolve(const Scenario& s, CsvWriter& csv) {
  const WalkState state = evolve(s.initial_state(), s.walk_params(s.theta_deg, s.gamma), s.steps);
  write_distribution(csv, state);
}

void run_spectrum(const Scenario& s, CsvWriter& csv) {
  csv.line("boundary,band_or_index,k,re_e,im_e");

  WalkParams pbc_params = s.walk_params(s.theta_deg, s.gamma);
  pbc_params.boundary = Boundary::periodic(s.n_sites);
  const SpectrumResult pbc = pbc_spectrum(pbc_params, s.k_samples);
  for (int band = 0; band < 2; ++band) {
    for (int i = 0; i < static_cast<int>(pbc.k_grid.size()); ++i) {
      const Complex e = pbc.bands[band][i];
      csv.line(join({"PBC", std::to_string(band), csv_double(pbc.k_grid[i]),
                     csv_double(e.real()), csv_double(e.imag())}));
    }
  }

  WalkParams obc_params = s.walk_params(s.theta_deg, s.gamma);
  obc_params.boundary = Boundary::open(s.n_sites);
  SpectrumResult obc = obc_spectrum(obc_params, /*with_states=*/false);
  std::sort(obc.energies.begin(), obc.energies.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (int i = 0; i < static_cast<int>(obc.energies.size()); ++i) {
    csv.line(join({"OBC", std::to_string(i), "", csv_double(obc.energies[i].real()),
                   csv_double(obc.energies[i].imag())}));
  }
}

void run_lyapunov(const Scenario& s, CsvWriter& csv, int threads) {
  const int nt = static_cast<int>(s.theta_deg_grid.size());
  const int ng = static_cast<int>(s.gamma_grid.size());
  std::vector<double> lambda0(static_cast<size_t>(nt) * ng);
  parallel_for(nt * ng, threads, [&](int job) {
    const double theta_deg = s.theta_deg_grid[job / ng];
    const double gamma = s.gamma_grid[job % ng];
    const auto prof = lyapunov_profile(s.initial_state(), s.walk_params(theta_deg, gamma), s.steps);
    // steps is even, so v = 0 is the middle entry of the t+1 velocities.
    lambda0[job] = prof.rates[s.steps / 2];
  });
  csv.line("theta_deg,gamma,lambda0");
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < ng; ++j) {
      csv.line(join({csv_double(s.theta_deg_grid[i]), csv_double(s.gamma_grid[j]),
                     csv_double(lambda0[static_cast<size_t>(i) * ng + j])}));
    }
  }
}

void run_growth(const Scenario& s, CsvWriter& csv) {
  const auto prof = polarization_averaged_growth(s.walk_params(s.theta_deg, s.gamma), s.steps);
  csv.line("v,lambda_h,lambda_v,lambda_bar");
  for (size_t i = 0; i < prof.velocities.size(); ++i) {
    csv.line(join({csv_double(prof.velocities[i]), csv_double(prof.rates_h[i]),
                   csv_double(prof.rates_v[i]), csv_double(prof.rates[i])}));
  }
}

void run_entropy_sweep(const Scenario& s, CsvWriter& csv, int threads) {
  const int nt = static_cast<int>(s.theta_deg_grid.size());
  const int ng = static_cast<int>(s.gamma_grid.size());
  std::vector<double> entropies(static_cast<size_t>(nt) * ng);
  parallel_for(nt * ng, threads, [&](int job) {
    const double theta_deg = s.theta_deg_grid[job / ng];
    const double gamma = s.gamma_grid[job % ng];
    const WalkState st = evolve(s.initial_state(), s.walk_params(theta_deg, gamma), s.steps);
    entropies[job] = entropy(reduced_density(st));
  });
  csv.line("theta_deg,gamma,entropy");
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < ng; ++j) {
      csv.line(join({csv_double(s.theta_deg_grid[i]), csv_double(s.gamma_grid[j]),
                     csv_double(entropies[static_cast<size_t>(i) * ng + j])}));
    }
  }
}

void run_dynamics(const Scenario& s, CsvWriter& csv) {
  csv.line("t,entropy,ipr");
  const WalkParams params = s.walk_params(s.theta_deg, s.gamma);
  WalkState state = make_state(s.initial_state(), params);
  for (int t = 0;; ++t) {
    csv.line(join({std::to_string(t), csv_double(entropy(reduced_density(state))),
                   csv_double(ipr(probability_distribution(state)))}));
    if (t == s.steps) break;
    state = step(std::move(state), params);
  }
}

DetectionConfig detection_with_seed(const Scenario& s, const RunOptions& options,
                                    std::uint64_t offset) {
  DetectionConfig cfg = s.detection;
  if (options.seed) cfg.seed = *options.seed;
  cfg.seed += offset;
  return cfg;
}

void run_virtual_lab(const Scenario& s, const RunOptions& options, CsvWriter& csv) {
  const WalkState state = evolve(s.initial_state(), s.walk_params(s.theta_deg, s.gamma), s.steps);
  const CountsRecord z = simulate_counts(state, detection_with_seed(s, options, 0), MeasurementBasis::Z);
  const CountsRecord x = simulate_counts(state, detection_with_seed(s, options, 1), MeasurementBasis::X);
  const ReducedDensityMatrix rho = reconstruct_rho(z, x);
  const BootstrapResult err =
      bootstrap_error(z, x, s.resamples, detection_with_seed(s, options, 2).seed);

  csv.line("quantity,value,stderr");
  csv.line(join({"total_detected", std::to_string(z.total_detected + x.total_detected), ""}));
  csv.line(join({"alpha", csv_double(rho.alpha), ""}));
  csv.line(join({"beta", csv_double(rho.beta), ""}));
  csv.line(join({"chi", csv_double(rho.chi.real()), ""}));
  csv.line(join({"entropy", csv_double(entropy(rho)), csv_double(err.std_error)}));
}

void run_fidelity(const Scenario& s, const RunOptions& options, CsvWriter& csv) {
  const WalkState state = evolve(s.initial_state(), s.walk_params(s.theta_deg, s.gamma), s.steps);
  const CountsRecord z = simulate_counts(state, detection_with_seed(s, options, 0), MeasurementBasis::Z);
  const double f = fidelity(probability_distribution(state), normalize_counts(z));
  csv.line("quantity,value,stderr");
  csv.line(join({"total_detected", std::to_string(z.total_detected), ""}));
  csv.line(join({"fidelity", csv_double(f), ""}));
}

}  // namespace

std::filesystem::path run_scenario(const Scenario& s, const RunOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + options.out_dir.string() + "'");
  const std::filesystem::path path = options.out_dir / s.output;

  CsvWriter csv(path);
  switch (s.kind) {
    case CommandKind::Evolve: run_evolve(s, csv); break;
    case CommandKind::Spectrum: run_spectrum(s, csv); break;
    case CommandKind::Lyapunov: run_lyapunov(s, csv, options.threads); break;
    case CommandKind::Growth: run_growth(s, csv); break;
    case CommandKind::EntropySweep: run_entropy_sweep(s, csv, options.threads); break;
    case CommandKind::Dynamics: run_dynamics(s, csv); break;
    case CommandKind::VirtualLab: run_virtual_lab(s, options, csv); break;
    case CommandKind::Fidelity: run_fidelity(s, options, csv); break;
  }
  csv.close();
  return path;
}

}  // namespace nhqw
