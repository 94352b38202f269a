#pragma once

#include <cstdint>
#include <vector>

#include "nhqw/observables.hpp"
#include "nhqw/walk.hpp"

namespace nhqw {

// Photon-counting model: a launched photon survives one loop round trip
// with probability per_step_survival, so after t steps it reaches the
// detection stage with survival^t, and is then registered with probability
// detection_efficiency. Lost photons simply do not contribute counts.
struct DetectionConfig {
  double per_step_survival = 0.61;
  double detection_efficiency = 0.498;
  std::int64_t shots = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class MeasurementBasis { Z, X };  // {H,V} and {+,-} projections

// Detector tallies per position. For Z the two channels are (N_H, N_V);
// for X they are (N_+, N_-) with |+-> = (|H> +- |V>)/sqrt(2).
struct CountsRecord {
  MeasurementBasis basis = MeasurementBasis::Z;
  int offset = 0;
  std::vector<std::int64_t> n_first;
  std::vector<std::int64_t> n_second;
  int t = 0;
  std::int64_t total_detected = 0;

  int size() const { return static_cast<int>(n_first.size()); }
};

// Exact outcome probabilities of the projective measurement, per position.
// Z: (|a_x|^2, |b_x|^2); X: (|a_x + b_x|^2 / 2, |a_x - b_x|^2 / 2).
PolarizedDistribution measurement_probabilities(const WalkState& state, MeasurementBasis basis);

// Samples cfg.shots independent photons from the multinomial over
// (position, outcome, lost); deterministic for a given seed.
CountsRecord simulate_counts(const WalkState& state, const DetectionConfig& cfg,
                             MeasurementBasis basis);

// Empirical probabilities; throws NumericalError when nothing was detected.
PolarizedDistribution normalize_counts(const CountsRecord& rec);

// Density-matrix reconstruction from measured probabilities:
//   alpha = sum P_H, beta = sum P_V,
//   chi   = sum_x sign(P_+(x) - P_-(x)) sqrt(P_H(x) P_V(x)).
// Valid only for walks with real amplitudes (|0,H> or |0,V> launches); the
// Z/X pair cannot determine Im chi. Exact ties P_+ = P_- contribute zero.
ReducedDensityMatrix reconstruct_rho(const PolarizedDistribution& z,
                                     const PolarizedDistribution& x);
ReducedDensityMatrix reconstruct_rho(const CountsRecord& z, const CountsRecord& x);

struct BootstrapResult {
  double std_error = 0.0;
  // Set when every count sits in a single bin, which makes resampling
  // deterministic; the reported error is then exactly zero.
  bool degenerate = false;
};

// Multinomial resampling of both records; standard deviation of the
// reconstructed entropy across resamples. resamples >= 100.
BootstrapResult bootstrap_error(const CountsRecord& z, const CountsRecord& x, int resamples,
                                std::uint64_t seed);

}  // namespace nhqw
