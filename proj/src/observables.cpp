#include "nhqw/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nhqw/constants.hpp"
#include "nhqw/errors.hpp"

namespace nhqw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNormTol = 1e-10;

double log_rate(double amplitude, int t) {
  return amplitude < kAmplitudeFloor ? -kInf : std::log(amplitude) / t;
}

}  // namespace

ReducedDensityMatrix reduced_density(const WalkState& state) {
  const double n = state.squared_norm();
  if (std::abs(n - 1.0) > kNormTol) {
    throw ValidationError("reduced density matrix requires a normalized state, norm^2 = " +
                          std::to_string(n));
  }
  ReducedDensityMatrix rho;
  for (size_t i = 0; i < state.a.size(); ++i) {
    rho.alpha += std::norm(state.a[i]);
    rho.beta += std::norm(state.b[i]);
    rho.chi += state.a[i] * std::conj(state.b[i]);
  }
  return rho;
}

std::array<double, 2> rho_eigenvalues(const ReducedDensityMatrix& rho) {
  const double d = rho.alpha * rho.beta - std::norm(rho.chi);
  const double disc = 1.0 - 4.0 * d;
  if (disc < -4e-12) {
    throw NumericalError("coin density matrix is not positive semidefinite: alpha*beta - |chi|^2 = " +
                         std::to_string(d));
  }
  const double s = std::sqrt(std::max(disc, 0.0));
  double l1 = (1.0 + s) / 2.0;
  double l2 = (1.0 - s) / 2.0;
  const double tol = 1e-12;
  if (l1 > 1.0 + tol || l2 < -tol) {
    throw NumericalError("coin eigenvalue outside [0, 1]");
  }
  l1 = std::clamp(l1, 0.0, 1.0);
  l2 = std::clamp(l2, 0.0, 1.0);
  return {l1, l2};
}

double entropy(const ReducedDensityMatrix& rho) {
  double s = 0.0;
  for (double l : rho_eigenvalues(rho)) {
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

double ipr(const PolarizedDistribution& dist) {
  const double total = dist.total();
  if (std::abs(total - 1.0) > kNormTol) {
    throw ValidationError("IPR requires a normalized distribution, total = " +
                          std::to_string(total));
  }
  double s = 0.0;
  for (int i = 0; i < dist.size(); ++i) {
    const double p = dist.p_h[i] + dist.p_v[i];
    s += p * p;
  }
  return s;
}

namespace {

// Parity-allowed positions x = x0 - t, x0 - t + 2, ..., x0 + t.
std::vector<int> cone_positions(int x0, int t) {
  std::vector<int> xs;
  xs.reserve(t + 1);
  for (int x = x0 - t; x <= x0 + t; x += 2) xs.push_back(x);
  return xs;
}

}  // namespace

GrowthRateProfile lyapunov_profile(const InitialState& init, const WalkParams& params,
                                   int steps) {
  if (steps < 2) throw ValidationError("growth-rate profiles need t >= 2");
  if (params.boundary.kind != BoundaryKind::Infinite) {
    throw ValidationError("growth-rate profiles are defined on the infinite line");
  }
  const WalkState state = evolve(init, params, steps);

  GrowthRateProfile prof;
  prof.t = steps;
  prof.normalized = params.normalize_each_step;
  for (int x : cone_positions(init.position, steps)) {
    const double amp = std::sqrt(std::norm(state.amp_h(x)) + std::norm(state.amp_v(x)));
    prof.velocities.push_back(static_cast<double>(x - init.position) / steps);
    prof.rates.push_back(log_rate(amp, steps));
  }
  return prof;
}

GrowthRateProfile polarization_averaged_growth(const WalkParams& params, int steps) {
  if (steps < 2) throw ValidationError("growth-rate profiles need t >= 2");
  WalkParams p = params;
  p.boundary = Boundary::infinite();
  const WalkState h_run = evolve({0, {1.0, 0.0}, {0.0, 0.0}}, p, steps);
  const WalkState v_run = evolve({0, {0.0, 0.0}, {1.0, 0.0}}, p, steps);

  GrowthRateProfile prof;
  prof.t = steps;
  prof.normalized = p.normalize_each_step;
  for (int x : cone_positions(0, steps)) {
    const double lh = log_rate(std::abs(h_run.amp_h(x)), steps);
    const double lv = log_rate(std::abs(v_run.amp_v(x)), steps);
    prof.velocities.push_back(static_cast<double>(x) / steps);
    prof.rates_h.push_back(lh);
    prof.rates_v.push_back(lv);
    prof.rates.push_back((lh + lv) / 2.0);
  }
  return prof;
}

double fidelity(const PolarizedDistribution& p, const PolarizedDistribution& q) {
  if (std::abs(p.total() - 1.0) > kNormTol || std::abs(q.total() - 1.0) > kNormTol) {
    throw ValidationError("fidelity requires normalized distributions");
  }
  const int lo = std::min(p.offset, q.offset);
  const int hi = std::max(p.offset + p.size(), q.offset + q.size());
  double f = 0.0;
  for (int x = lo; x < hi; ++x) {
    f += std::sqrt(p.at_h(x) * q.at_h(x)) + std::sqrt(p.at_v(x) * q.at_v(x));
  }
  return f;
}

}  // namespace nhqw
