#include "nhqw/virtual_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nhqw/constants.hpp"
#include "nhqw/errors.hpp"

namespace nhqw {

namespace {

constexpr double kNormTol = 1e-10;

// Multinomial draw over `probs` (which need not sum to 1; the remainder is
// the lost-photon bin), via the conditional-binomial chain. Exact and O(bins).
std::vector<std::int64_t> multinomial(std::mt19937_64& rng, std::int64_t shots,
                                      const std::vector<double>& probs) {
  std::vector<std::int64_t> counts(probs.size(), 0);
  std::int64_t left = shots;
  double prob_left = 1.0;
  for (size_t i = 0; i < probs.size() && left > 0; ++i) {
    if (probs[i] <= 0.0) continue;
    const double p = std::min(1.0, probs[i] / prob_left);
    std::int64_t n;
    if (p >= 1.0) {
      n = left;
    } else {
      n = std::binomial_distribution<std::int64_t>(left, p)(rng);
    }
    counts[i] = n;
    left -= n;
    prob_left -= probs[i];
    if (prob_left <= 0.0) break;
  }
  return counts;
}

}  // namespace

void DetectionConfig::validate() const {
  if (!(per_step_survival >= 0.0 && per_step_survival <= 1.0)) {
    throw ValidationError("per-step survival must lie in [0, 1]");
  }
  if (!(detection_efficiency >= 0.0 && detection_efficiency <= 1.0)) {
    throw ValidationError("detection efficiency must lie in [0, 1]");
  }
  if (shots < 1) throw ValidationError("shots must be >= 1");
}

PolarizedDistribution measurement_probabilities(const WalkState& state, MeasurementBasis basis) {
  PolarizedDistribution d;
  d.offset = state.offset;
  d.t = state.t;
  d.p_h.resize(state.a.size());
  d.p_v.resize(state.b.size());
  for (size_t i = 0; i < state.a.size(); ++i) {
    if (basis == MeasurementBasis::Z) {
      d.p_h[i] = std::norm(state.a[i]);
      d.p_v[i] = std::norm(state.b[i]);
    } else {
      d.p_h[i] = std::norm(state.a[i] + state.b[i]) / 2.0;
      d.p_v[i] = std::norm(state.a[i] - state.b[i]) / 2.0;
    }
  }
  return d;
}

CountsRecord simulate_counts(const WalkState& state, const DetectionConfig& cfg,
                             MeasurementBasis basis) {
  cfg.validate();
  const double n2 = state.squared_norm();
  if (std::abs(n2 - 1.0) > kNormTol) {
    throw ValidationError("counts simulation requires a normalized state");
  }

  const auto probs = measurement_probabilities(state, basis);
  const double reach = std::pow(cfg.per_step_survival, state.t) * cfg.detection_efficiency;

  // Bin layout: position-major, first channel then second channel.
  const int n = probs.size();
  std::vector<double> p(2 * n);
  for (int i = 0; i < n; ++i) {
    p[2 * i] = probs.p_h[i] * reach;
    p[2 * i + 1] = probs.p_v[i] * reach;
  }

  std::mt19937_64 rng(cfg.seed);
  const auto counts = multinomial(rng, cfg.shots, p);

  CountsRecord rec;
  rec.basis = basis;
  rec.offset = probs.offset;
  rec.t = state.t;
  rec.n_first.resize(n);
  rec.n_second.resize(n);
  for (int i = 0; i < n; ++i) {
    rec.n_first[i] = counts[2 * i];
    rec.n_second[i] = counts[2 * i + 1];
    rec.total_detected += counts[2 * i] + counts[2 * i + 1];
  }
  return rec;
}

PolarizedDistribution normalize_counts(const CountsRecord& rec) {
  if (rec.total_detected <= 0) {
    throw NumericalError("no detected photons; cannot normalize counts");
  }
  PolarizedDistribution d;
  d.offset = rec.offset;
  d.t = rec.t;
  d.p_h.resize(rec.n_first.size());
  d.p_v.resize(rec.n_second.size());
  const double inv = 1.0 / static_cast<double>(rec.total_detected);
  for (int i = 0; i < rec.size(); ++i) {
    d.p_h[i] = static_cast<double>(rec.n_first[i]) * inv;
    d.p_v[i] = static_cast<double>(rec.n_second[i]) * inv;
  }
  return d;
}

ReducedDensityMatrix reconstruct_rho(const PolarizedDistribution& z,
                                     const PolarizedDistribution& x) {
  if (z.t != x.t) {
    throw ValidationError("sigma_z and sigma_x records must come from the same step count");
  }
  ReducedDensityMatrix rho;
  double chi = 0.0;
  for (int pos = z.offset; pos < z.offset + z.size(); ++pos) {
    const double ph = z.at_h(pos);
    const double pv = z.at_v(pos);
    rho.alpha += ph;
    rho.beta += pv;
    const double diff = x.at_h(pos) - x.at_v(pos);
    if (diff != 0.0) {
      chi += std::copysign(std::sqrt(ph * pv), diff);
    }
  }
  // Cauchy-Schwarz bounds |chi| by sqrt(alpha beta) up to roundoff; clamp
  // the tiny overshoot, reject anything larger.
  const double bound2 = rho.alpha * rho.beta;
  if (chi * chi > bound2) {
    if (chi * chi - bound2 > 1e-9) {
      throw NumericalError("reconstructed coin matrix is not positive semidefinite");
    }
    chi = std::copysign(std::sqrt(bound2), chi);
  }
  rho.chi = Complex(chi, 0.0);
  return rho;
}

ReducedDensityMatrix reconstruct_rho(const CountsRecord& z, const CountsRecord& x) {
  if (z.basis != MeasurementBasis::Z || x.basis != MeasurementBasis::X) {
    throw ValidationError("reconstruction needs one sigma_z record and one sigma_x record");
  }
  return reconstruct_rho(normalize_counts(z), normalize_counts(x));
}

namespace {

std::vector<double> empirical(const CountsRecord& rec) {
  std::vector<double> p(2 * rec.size());
  const double inv = 1.0 / static_cast<double>(rec.total_detected);
  for (int i = 0; i < rec.size(); ++i) {
    p[2 * i] = static_cast<double>(rec.n_first[i]) * inv;
    p[2 * i + 1] = static_cast<double>(rec.n_second[i]) * inv;
  }
  return p;
}

int nonzero_bins(const CountsRecord& rec) {
  int n = 0;
  for (int i = 0; i < rec.size(); ++i) {
    n += (rec.n_first[i] != 0) + (rec.n_second[i] != 0);
  }
  return n;
}

CountsRecord resampled(const CountsRecord& rec, std::mt19937_64& rng,
                       const std::vector<double>& probs) {
  CountsRecord out = rec;
  const auto counts = multinomial(rng, rec.total_detected, probs);
  out.total_detected = 0;
  for (int i = 0; i < rec.size(); ++i) {
    out.n_first[i] = counts[2 * i];
    out.n_second[i] = counts[2 * i + 1];
    out.total_detected += counts[2 * i] + counts[2 * i + 1];
  }
  return out;
}

}  // namespace

BootstrapResult bootstrap_error(const CountsRecord& z, const CountsRecord& x, int resamples,
                                std::uint64_t seed) {
  if (resamples < 100) throw ValidationError("bootstrap needs >= 100 resamples");
  if (z.total_detected <= 0 || x.total_detected <= 0) {
    throw NumericalError("bootstrap requires detected photons in both records");
  }
  if (nonzero_bins(z) <= 1 && nonzero_bins(x) <= 1) {
    return {0.0, true};
  }

  const auto pz = empirical(z);
  const auto px = empirical(x);
  std::mt19937_64 rng(seed);
  std::vector<double> samples;
  samples.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    const auto rz = resampled(z, rng, pz);
    const auto rx = resampled(x, rng, px);
    samples.push_back(entropy(reconstruct_rho(rz, rx)));
  }

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= samples.size();
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= samples.size();
  return {std::sqrt(var), false};
}

}  // namespace nhqw
