#pragma once

#include <array>
#include <vector>

#include "nhqw/walk.hpp"

namespace nhqw {

// Coin reduced density matrix [[alpha, chi], [chi*, beta]] of a normalized
// walk state: alpha = sum |a_x|^2, beta = sum |b_x|^2, chi = sum a_x b_x*.
struct ReducedDensityMatrix {
  double alpha = 0.0;
  double beta = 0.0;
  Complex chi{};
};

// Throws ValidationError if the state is not normalized (1e-10).
ReducedDensityMatrix reduced_density(const WalkState& state);

// Closed-form eigenvalues {(1 + s)/2, (1 - s)/2} with
// s = sqrt(1 - 4 (alpha beta - |chi|^2)); both clamped into [0, 1].
std::array<double, 2> rho_eigenvalues(const ReducedDensityMatrix& rho);

// Base-2 von Neumann entropy of the coin state, with 0 log 0 := 0.
double entropy(const ReducedDensityMatrix& rho);

// Inverse participation ratio sum_x P(x)^2 with P = P_H + P_V per site.
// Requires a normalized distribution (1e-10).
double ipr(const PolarizedDistribution& dist);

// Growth rates lambda(v) = ln|psi_{x=vt}(t)| / t on the parity-allowed
// velocity grid x/t. Sites with amplitude below 1e-300 carry -inf.
// rates_h/rates_v are filled only by polarization_averaged_growth.
struct GrowthRateProfile {
  int t = 0;
  bool normalized = true;
  std::vector<double> velocities;
  std::vector<double> rates;    // lambda(v) or the average lambda_bar(v)
  std::vector<double> rates_h;  // H-launched H-component rate
  std::vector<double> rates_v;  // V-launched V-component rate
};

// lambda(v) from the full amplitude |psi_x| = sqrt(|a_x|^2 + |b_x|^2) of a
// single evolution. Requires t >= 2 and the Infinite boundary; honors
// params.normalize_each_step (peak location and profile shape are invariant
// under per-step rescaling).
GrowthRateProfile lyapunov_profile(const InitialState& init, const WalkParams& params, int steps);

// Polarization-averaged rate: lambda_H from the H component of an
// |0,H>-launched run, lambda_V from the V component of an |0,V>-launched
// run, averaged per velocity (-inf dominates the average).
GrowthRateProfile polarization_averaged_growth(const WalkParams& params, int steps);

// Bhattacharyya-style overlap sum_x (sqrt(pH qH) + sqrt(pV qV)) over the
// union support. Requires both distributions normalized (1e-10).
double fidelity(const PolarizedDistribution& p, const PolarizedDistribution& q);

}  // namespace nhqw
