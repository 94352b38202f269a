// Acceptance suite: one self-contained check per shipping criterion, each
// printed as a single PASS/FAIL line. Run with no arguments for the full
// suite or with a criterion number for one check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nhqw/observables.hpp"
#include "nhqw/scenario.hpp"
#include "nhqw/spectral.hpp"
#include "nhqw/virtual_lab.hpp"
#include "nhqw/walk.hpp"

using namespace nhqw;

namespace {

constexpr double kPi = std::numbers::pi;

WalkParams params_for(double theta_deg, double gamma) {
  WalkParams p;
  p.theta = theta_deg * kPi / 180.0;
  p.gamma = gamma;
  return p;
}

const InitialState kLaunchH{0, {1.0, 0.0}, {0.0, 0.0}};

double entropy_at(double theta_deg, double gamma, int steps, const InitialState& init = kLaunchH) {
  return entropy(reduced_density(evolve(init, params_for(theta_deg, gamma), steps)));
}

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --- criterion 1: entropy point values -----------------------------------

Check criterion_entropy_points() {
  Check c;
  const struct {
    double theta_deg;
    double want;
  } cases[] = {{45.0, 0.858}, {57.0, 0.982}, {65.0, 0.996}};
  for (const auto& k : cases) {
    const auto start = std::chrono::steady_clock::now();
    const double s = entropy_at(k.theta_deg, 0.0, 20);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(std::abs(s - k.want) <= 0.001,
             "S(" + fmt(k.theta_deg) + " deg) = " + fmt(s) + ", want " + fmt(k.want) + " +- 0.001");
    c.expect(secs < 0.1, "runtime " + fmt(secs) + " s >= 0.1 s");
  }
  return c;
}

// --- criterion 2: entropy for the circular launch ------------------------

Check criterion_entropy_circular() {
  Check c;
  const double r = std::sqrt(0.5);
  const InitialState circular{0, {r, 0.0}, {0.0, r}};
  const double s45 = entropy_at(45.0, 0.0, 20, circular);
  c.expect(std::abs(s45 - 0.875) <= 0.001,
           "S(45 deg) = " + fmt(s45) + ", want 0.875 +- 0.001");
  const double s1 = entropy_at(1.0, 0.0, 20, circular);
  c.expect(s1 > 0.999, "S(1 deg) = " + fmt(s1) + ", want > 0.999");
  return c;
}

// --- criteria 3/4: polarization-averaged growth peaks --------------------

double argmax_velocity(const GrowthRateProfile& prof) {
  size_t best = 0;
  for (size_t i = 1; i < prof.rates.size(); ++i) {
    if (prof.rates[i] > prof.rates[best]) best = i;
  }
  return prof.velocities[best];
}

Check criterion_growth_peaks() {
  Check c;
  const struct {
    double theta_deg;
    double peak;
  } cases[] = {{45.0, 0.6}, {57.0, 0.5}, {65.0, 0.4}};
  for (const auto& k : cases) {
    const auto prof = polarization_averaged_growth(params_for(k.theta_deg, 0.1), 20);
    const double v = argmax_velocity(prof);
    c.expect(std::abs(v - k.peak) < 1e-12, "theta = " + fmt(k.theta_deg) + " deg: peak at v = " +
                                               fmt(v) + ", want " + fmt(k.peak));
  }
  return c;
}

Check criterion_symmetric_profiles() {
  Check c;
  for (double theta_deg : {45.0, 57.0, 65.0}) {
    const auto prof = polarization_averaged_growth(params_for(theta_deg, 0.0), 20);
    const size_t n = prof.rates.size();
    for (size_t i = 0; i < n; ++i) {
      const double fwd = prof.rates[i];
      const double bwd = prof.rates[n - 1 - i];
      if (std::isinf(fwd) || std::isinf(bwd)) {
        if (fwd != bwd) {
          c.fail("theta = " + fmt(theta_deg) + " deg: sentinel asymmetry at v = " +
                 fmt(prof.velocities[i]));
          break;
        }
      } else if (std::abs(fwd - bwd) > 1e-10) {
        c.fail("theta = " + fmt(theta_deg) + " deg: |lbar(v) - lbar(-v)| = " +
               fmt(std::abs(fwd - bwd)) + " at v = " + fmt(prof.velocities[i]));
        break;
      }
    }
    const double v = argmax_velocity(prof);
    c.expect(v == 0.0,
             "theta = " + fmt(theta_deg) + " deg: peak at v = " + fmt(v) + ", want v = 0");
  }
  return c;
}

// --- criterion 5: Lyapunov exponent asymptotics ---------------------------

Check criterion_lyapunov_asymptotics() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> thetas = {30.0, 45.0, 57.0, 65.0, 75.0};
  const std::vector<double> gammas = {0.0, 0.025, 0.05, 0.075, 0.1};

  std::vector<std::vector<double>> lam0(thetas.size(), std::vector<double>(gammas.size()));
  for (size_t i = 0; i < thetas.size(); ++i) {
    for (size_t j = 0; j < gammas.size(); ++j) {
      const auto prof = lyapunov_profile(kLaunchH, params_for(thetas[i], gammas[j]), 2000);
      lam0[i][j] = prof.rates[1000];  // v = 0
    }
  }

  for (size_t i = 0; i < thetas.size(); ++i) {
    c.expect(std::abs(lam0[i][0]) <= 0.01, "lambda(0) = " + fmt(lam0[i][0]) + " at theta = " +
                                               fmt(thetas[i]) + " deg, gamma = 0");
    for (size_t j = 1; j < gammas.size(); ++j) {
      if (!(std::abs(lam0[i][j]) > std::abs(lam0[i][j - 1]))) {
        c.fail("|lambda(0)| not strictly increasing in gamma at theta = " + fmt(thetas[i]));
        break;
      }
    }
  }
  for (size_t i = 1; i < thetas.size(); ++i) {
    if (!(std::abs(lam0[i].back()) < std::abs(lam0[i - 1].back()))) {
      c.fail("|lambda(0)| not strictly decreasing in theta at gamma = 0.1");
      break;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 30.0, "runtime " + fmt(secs) + " s >= 30 s");
  return c;
}

// --- criterion 6: lossy distribution peaks --------------------------------

Check criterion_distribution_peaks() {
  Check c;
  const struct {
    double theta_deg;
    int want_x;
  } cases[] = {{45.0, 12}, {57.0, 10}, {65.0, 8}};
  for (const auto& k : cases) {
    const auto dist =
        probability_distribution(evolve(kLaunchH, params_for(k.theta_deg, 0.1), 20));
    int best_x = dist.offset;
    double best = -1.0;
    for (int x = dist.offset; x < dist.offset + dist.size(); ++x) {
      if (dist.total_at(x) > best) {
        best = dist.total_at(x);
        best_x = x;
      }
    }
    c.expect(best_x == k.want_x, "theta = " + fmt(k.theta_deg) + " deg: peak at x = " +
                                     std::to_string(best_x) + ", want " +
                                     std::to_string(k.want_x));
  }
  return c;
}

// --- criterion 7: spectral dichotomy --------------------------------------

Check criterion_spectral_dichotomy() {
  Check c;

  const auto pbc0 = pbc_spectrum(params_for(45.0, 0.0), 1024);
  double max_im = 0.0;
  for (const Complex& e : pbc0.all_energies()) max_im = std::max(max_im, std::abs(e.imag()));
  c.expect(max_im <= 1e-8, "PBC max|Im E| = " + fmt(max_im) + " at gamma = 0");

  WalkParams open0 = params_for(45.0, 0.0);
  open0.boundary = Boundary::open(50);
  const auto obc0 = obc_spectrum(open0, false);
  max_im = 0.0;
  for (const Complex& e : obc0.energies) max_im = std::max(max_im, std::abs(e.imag()));
  c.expect(max_im <= 1e-8, "OBC max|Im E| = " + fmt(max_im) + " at gamma = 0");

  // Frozen loop-area threshold from the one-time 4096-sample oracle run
  // (0.0921772 per band at theta = 45 deg, gamma = 0.1).
  constexpr double kAreaThreshold = 0.09;
  const auto pbc = pbc_spectrum(params_for(45.0, 0.1), 1024);
  const auto areas = spectral_loop_area(pbc);
  c.expect(areas[0] > kAreaThreshold && areas[1] > kAreaThreshold,
           "loop areas " + fmt(areas[0]) + ", " + fmt(areas[1]) + " not above " +
               fmt(kAreaThreshold));

  WalkParams open1 = params_for(45.0, 0.1);
  open1.boundary = Boundary::open(50);
  const auto obc = obc_spectrum(open1, false);
  int eligible = 0, wound = 0;
  for (const Complex& e : obc.energies) {
    if (curve_distance(pbc, e) < 1e-3) continue;
    ++eligible;
    wound += point_gap_winding(pbc, e) != 0;
  }
  c.expect(eligible > 0, "no OBC energies at least 1e-3 from the PBC curve");
  if (eligible > 0) {
    const double frac = static_cast<double>(wound) / eligible;
    c.expect(frac >= 0.95, "winding nonzero for only " + fmt(100.0 * frac) + "% of OBC energies");
  }
  return c;
}

// --- criterion 8: skin localization ---------------------------------------

double median_edge_mass(double gamma) {
  WalkParams p = params_for(45.0, gamma);
  p.boundary = Boundary::open(50);
  const auto spec = obc_spectrum(p, true);
  std::vector<double> masses;
  for (const auto& prof : spec.profiles) masses.push_back(edge_mass(prof, 0.1));
  std::sort(masses.begin(), masses.end());
  const size_t n = masses.size();
  return n % 2 ? masses[n / 2] : (masses[n / 2 - 1] + masses[n / 2]) / 2.0;
}

Check criterion_skin_localization() {
  Check c;
  const double m000 = median_edge_mass(0.0);
  const double m005 = median_edge_mass(0.05);
  const double m010 = median_edge_mass(0.1);
  c.expect(m010 > m005 && m005 > m000,
           "medians not ordered: " + fmt(m000) + ", " + fmt(m005) + ", " + fmt(m010));
  c.expect(m010 >= 3.0 * m000,
           "median(0.1) = " + fmt(m010) + " below 3 x median(0) = " + fmt(3.0 * m000));
  return c;
}

// --- criterion 9: entanglement suppression dynamics ------------------------

Check criterion_suppression_dynamics() {
  Check c;
  for (double theta_deg : {45.0, 57.0, 65.0}) {
    for (int t = 2; t <= 20; ++t) {
      const double s0 = entropy_at(theta_deg, 0.0, t);
      const double s1 = entropy_at(theta_deg, 0.1, t);
      if (!(s0 >= s1)) {
        c.fail("S(gamma=0) = " + fmt(s0) + " < S(gamma=0.1) = " + fmt(s1) + " at theta = " +
               fmt(theta_deg) + " deg, t = " + std::to_string(t));
        break;
      }
    }
    double prev = 2.0;
    for (double gamma : {0.0, 0.05, 0.1, 0.15, 0.2}) {
      const double s = entropy_at(theta_deg, gamma, 50);
      if (!(s < prev)) {
        c.fail("S(t=50) not strictly decreasing in gamma at theta = " + fmt(theta_deg));
        break;
      }
      prev = s;
    }
    const double ipr0 = ipr(probability_distribution(evolve(kLaunchH, params_for(theta_deg, 0.0), 20)));
    const double ipr1 = ipr(probability_distribution(evolve(kLaunchH, params_for(theta_deg, 0.1), 20)));
    c.expect(ipr1 >= ipr0, "IPR(gamma=0.1) = " + fmt(ipr1) + " < IPR(gamma=0) = " + fmt(ipr0) +
                               " at theta = " + fmt(theta_deg) + " deg");
  }
  return c;
}

// --- criterion 10: oracle equivalences -------------------------------------

Check criterion_oracle_equivalences() {
  Check c;

  // Bloch blocks vs the dense ring operator, matched k grid, as multisets.
  {
    const int n = 40;
    WalkParams p = params_for(45.0, 0.1);
    p.boundary = Boundary::periodic(n);
    const auto eig = eig_dense(dense_walk_matrix(p));
    std::vector<Complex> dense_e(eig.values.data(), eig.values.data() + 2 * n);
    std::vector<Complex> bloch_e;
    for (int m = 0; m < n; ++m) {
      const auto u = bloch_matrix(2.0 * kPi * m / n, p.theta, p.gamma).u;
      const Complex tr = u(0, 0) + u(1, 1);
      const Complex det = u.determinant();
      const Complex disc = std::sqrt(tr * tr - 4.0 * det);
      const Complex l1 = (std::abs(tr + disc) >= std::abs(tr - disc)) ? (tr + disc) / 2.0
                                                                      : (tr - disc) / 2.0;
      bloch_e.push_back(l1);
      bloch_e.push_back(det / l1);
    }
    double worst = 0.0;
    std::vector<Complex> pool = bloch_e;
    for (const Complex& le : dense_e) {
      size_t best = 0;
      double bd = std::abs(le - pool[0]);
      for (size_t j = 1; j < pool.size(); ++j) {
        if (std::abs(le - pool[j]) < bd) {
          bd = std::abs(le - pool[j]);
          best = j;
        }
      }
      worst = std::max(worst, bd);
      pool.erase(pool.begin() + best);
    }
    c.expect(worst <= 1e-8, "Bloch-vs-dense eigenvalue mismatch " + fmt(worst));
  }

  // Dense operator vs the walk step on random ring states.
  {
    const int n = 12;
    WalkParams p = params_for(37.0, 0.15);
    p.boundary = Boundary::periodic(n);
    p.normalize_each_step = false;
    const auto u = dense_walk_matrix(p);
    std::mt19937_64 rng(101);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      WalkState st;
      st.offset = 0;
      st.a.resize(n);
      st.b.resize(n);
      for (int i = 0; i < n; ++i) {
        st.a[i] = {gauss(rng), gauss(rng)};
        st.b[i] = {gauss(rng), gauss(rng)};
      }
      Eigen::VectorXcd v(2 * n);
      for (int i = 0; i < n; ++i) {
        v[2 * i] = st.a[i];
        v[2 * i + 1] = st.b[i];
      }
      const Eigen::VectorXcd uv = u * v;
      const WalkState next = step(st, p);
      for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(uv[2 * i] - next.a[i]));
        worst = std::max(worst, std::abs(uv[2 * i + 1] - next.b[i]));
      }
    }
    c.expect(worst <= 1e-12, "dense-vs-step mismatch " + fmt(worst));
  }

  // Closed-form coin eigenvalues vs a direct 2x2 eigendecomposition.
  {
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double alpha = uni(rng);
      const double beta = 1.0 - alpha;
      const Complex chi = std::polar(uni(rng) * std::sqrt(alpha * beta), uni(rng) * 2.0 * kPi);
      const auto closed = rho_eigenvalues({alpha, beta, chi});
      Eigen::Matrix2cd m;
      m << alpha, chi, std::conj(chi), beta;
      const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(m).eigenvalues();
      worst = std::max({worst, std::abs(closed[0] - ev[1]), std::abs(closed[1] - ev[0])});
    }
    c.expect(worst <= 1e-12, "closed-form eigenvalue mismatch " + fmt(worst));
  }

  // Reconstruction identity on exact probabilities of random real states.
  {
    std::mt19937_64 rng(103);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      WalkState st;
      st.offset = -5;
      st.a.resize(11);
      st.b.resize(11);
      for (int i = 0; i < 11; ++i) {
        st.a[i] = {gauss(rng), 0.0};
        st.b[i] = {gauss(rng), 0.0};
      }
      const double inv = 1.0 / std::sqrt(st.squared_norm());
      for (auto& z : st.a) z *= inv;
      for (auto& z : st.b) z *= inv;

      const auto direct = reduced_density(st);
      const auto rec = reconstruct_rho(measurement_probabilities(st, MeasurementBasis::Z),
                                       measurement_probabilities(st, MeasurementBasis::X));
      worst = std::max({worst, std::abs(rec.alpha - direct.alpha),
                        std::abs(rec.beta - direct.beta), std::abs(rec.chi - direct.chi)});
    }
    c.expect(worst <= 1e-10, "reconstruction identity mismatch " + fmt(worst));
  }
  return c;
}

// --- criterion 11: virtual-lab statistical calibration ---------------------

Check criterion_virtual_lab_calibration() {
  Check c;
  const WalkState st = evolve(kLaunchH, params_for(65.0, 0.0), 20);

  DetectionConfig cfg;
  cfg.per_step_survival = 1.0;
  cfg.detection_efficiency = 1.0;
  cfg.shots = 100000;

  int hits = 0;
  CountsRecord first_z, first_x;
  for (int trial = 0; trial < 100; ++trial) {
    cfg.seed = 2 * trial + 1;
    const auto z = simulate_counts(st, cfg, MeasurementBasis::Z);
    cfg.seed = 2 * trial + 2;
    const auto x = simulate_counts(st, cfg, MeasurementBasis::X);
    if (trial == 0) {
      first_z = z;
      first_x = x;
    }
    hits += std::abs(entropy(reconstruct_rho(z, x)) - 0.996) <= 0.01;
  }
  c.expect(hits >= 95, "entropy within 0.01 of 0.996 in only " + std::to_string(hits) +
                           "/100 trials");

  const auto err = bootstrap_error(first_z, first_x, 200, 777);
  c.expect(err.std_error >= 0.005 && err.std_error <= 0.05,
           "bootstrap error " + fmt(err.std_error) + " outside [0.005, 0.05]");
  return c;
}

// --- criterion 12: byte-identical reruns -----------------------------------

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Check criterion_reproducibility() {
  Check c;
  const auto base = std::filesystem::temp_directory_path() / "nhqw_acceptance";
  std::filesystem::remove_all(base);

  const char* scenarios[] = {
      "command = virtual-lab\ntheta_deg = 65\ngamma = 0\nsteps = 20\nshots = 50000\n"
      "survival = 1\nefficiency = 1\nseed = 11\n",
      "command = entropy-sweep\ntheta_deg_grid = 40:60:2\ngamma_grid = 0:0.1:0.02\nsteps = 16\n",
      "command = spectrum\ntheta_deg = 45\ngamma = 0.1\nn_sites = 50\nk_samples = 128\n",
  };
  int idx = 0;
  for (const char* text : scenarios) {
    const Scenario s = parse_scenario(text);
    RunOptions o1{base / ("a" + std::to_string(idx)), std::nullopt, 4};
    RunOptions o2{base / ("b" + std::to_string(idx)), std::nullopt, 2};
    const auto p1 = run_scenario(s, o1);
    const auto p2 = run_scenario(s, o2);
    const std::string b1 = file_bytes(p1);
    c.expect(!b1.empty(), "empty output for scenario " + std::to_string(idx));
    c.expect(b1 == file_bytes(p2), "rerun bytes differ for scenario " + std::to_string(idx));
    ++idx;
  }
  return c;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Check()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "entropy point values (20 steps, lossless)", criterion_entropy_points},
    {2, "entropy for the circular launch", criterion_entropy_circular},
    {3, "growth-rate peak locations under loss", criterion_growth_peaks},
    {4, "symmetric lossless growth profiles", criterion_symmetric_profiles},
    {5, "Lyapunov exponent asymptotics", criterion_lyapunov_asymptotics},
    {6, "lossy distribution peaks", criterion_distribution_peaks},
    {7, "spectral dichotomy and point-gap winding", criterion_spectral_dichotomy},
    {8, "skin-mode edge localization", criterion_skin_localization},
    {9, "entanglement suppression dynamics", criterion_suppression_dynamics},
    {10, "oracle equivalences", criterion_oracle_equivalences},
    {11, "virtual-lab statistical calibration", criterion_virtual_lab_calibration},
    {12, "byte-identical reruns", criterion_reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    const Check result = criterion.run();
    if (result.ok) {
      std::printf("PASS  criterion %2d: %s\n", criterion.id, criterion.title);
    } else {
      ++failures;
      std::printf("FAIL  criterion %2d: %s -- %s\n", criterion.id, criterion.title,
                  result.detail.c_str());
    }
    std::fflush(stdout);
  }
  return failures;
}
