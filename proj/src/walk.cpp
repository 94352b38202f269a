#include "nhqw/walk.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nhqw/constants.hpp"
#include "nhqw/errors.hpp"

namespace nhqw {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double abs2(const Complex& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

}  // namespace

void WalkParams::validate() const {
  if (!std::isfinite(theta) || theta < 0.0 || theta > kHalfPi) {
    throw ValidationError("theta must lie in [0, pi/2], got " + std::to_string(theta));
  }
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw ValidationError("gamma must be >= 0, got " + std::to_string(gamma));
  }
  if (boundary.kind == BoundaryKind::Periodic) {
    if (boundary.n_sites < 2 || boundary.n_sites % 2 != 0) {
      throw ValidationError("Periodic lattice needs an even site count >= 2, got " +
                            std::to_string(boundary.n_sites));
    }
  } else if (boundary.kind == BoundaryKind::Open) {
    if (boundary.n_sites < 2) {
      throw ValidationError("Open lattice needs >= 2 sites, got " +
                            std::to_string(boundary.n_sites));
    }
  }
}

void InitialState::validate() const {
  const double n = std::abs(a_h) * std::abs(a_h) + std::abs(b_v) * std::abs(b_v);
  if (std::abs(n - 1.0) > kAlgebraicTol) {
    throw ValidationError("initial coefficients must satisfy |aH|^2 + |bV|^2 = 1, got " +
                          std::to_string(n));
  }
}

double WalkState::squared_norm() const {
  double s = 0.0;
  for (const auto& z : a) s += abs2(z);
  for (const auto& z : b) s += abs2(z);
  return s;
}

Eigen::Matrix2d coin_matrix(double theta) {
  if (!std::isfinite(theta)) throw ValidationError("coin angle must be finite");
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d m;
  m << c, s, s, -c;
  return m;
}

Eigen::Matrix2d loss_matrix(double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw ValidationError("gamma must be >= 0, got " + std::to_string(gamma));
  }
  Eigen::Matrix2d m;
  m << 1.0, 0.0, 0.0, std::exp(-gamma);
  return m;
}

WalkState make_state(const InitialState& init, const WalkParams& params) {
  params.validate();
  init.validate();
  WalkState st;
  if (params.boundary.finite()) {
    const int n = params.boundary.n_sites;
    if (init.position < 0 || init.position >= n) {
      throw ValidationError("initial position " + std::to_string(init.position) +
                            " outside lattice of " + std::to_string(n) + " sites");
    }
    st.offset = 0;
    st.a.assign(n, Complex{});
    st.b.assign(n, Complex{});
    st.a[init.position] = init.a_h;
    st.b[init.position] = init.b_v;
  } else {
    st.offset = init.position;
    st.a.assign(1, init.a_h);
    st.b.assign(1, init.b_v);
  }
  return st;
}

WalkState step(WalkState state, const WalkParams& params) {
  params.validate();
  const Eigen::Matrix2d m = loss_matrix(params.gamma) * coin_matrix(params.theta);
  const double m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  const int n = state.size();

  WalkState next;
  next.t = state.t + 1;
  next.norm_log = state.norm_log;

  switch (params.boundary.kind) {
    case BoundaryKind::Infinite: {
      // New window gains one site per side; site x of the old window is
      // index x - offset + 1 in the new one.
      next.offset = state.offset - 1;
      next.a.assign(n + 2, Complex{});
      next.b.assign(n + 2, Complex{});
      for (int i = 0; i < n; ++i) {
        const Complex ca = m00 * state.a[i] + m01 * state.b[i];
        const Complex cb = m10 * state.a[i] + m11 * state.b[i];
        next.a[i + 2] += ca;  // H: x -> x+1
        next.b[i] += cb;      // V: x -> x-1
      }
      break;
    }
    case BoundaryKind::Periodic: {
      next.offset = 0;
      next.a.assign(n, Complex{});
      next.b.assign(n, Complex{});
      for (int i = 0; i < n; ++i) {
        const Complex ca = m00 * state.a[i] + m01 * state.b[i];
        const Complex cb = m10 * state.a[i] + m11 * state.b[i];
        next.a[(i + 1) % n] += ca;
        next.b[(i + n - 1) % n] += cb;
      }
      break;
    }
    case BoundaryKind::Open: {
      next.offset = 0;
      next.a.assign(n, Complex{});
      next.b.assign(n, Complex{});
      const Complex edge_h = m00 * state.a[n - 1] + m01 * state.b[n - 1];
      const Complex edge_v = m10 * state.a[0] + m11 * state.b[0];
      if (edge_h != Complex{} || edge_v != Complex{}) {
        throw NumericalError(
            "open-boundary step at t=" + std::to_string(state.t) +
            ": nonzero amplitude would leave the lattice; size the lattice to"
            " cover the light cone (N >= 2t+1) or use the infinite boundary");
      }
      for (int i = 0; i < n; ++i) {
        const Complex ca = m00 * state.a[i] + m01 * state.b[i];
        const Complex cb = m10 * state.a[i] + m11 * state.b[i];
        if (i + 1 < n) next.a[i + 1] += ca;
        if (i - 1 >= 0) next.b[i - 1] += cb;
      }
      break;
    }
  }

  if (params.normalize_each_step) {
    const double nrm = std::sqrt(next.squared_norm());
    if (nrm <= 0.0) throw NumericalError("state vanished; cannot normalize");
    const double inv = 1.0 / nrm;
    for (auto& z : next.a) z *= inv;
    for (auto& z : next.b) z *= inv;
    next.norm_log += std::log(nrm);
  }
  return next;
}

WalkState evolve_state(WalkState state, const WalkParams& params, int steps) {
  if (steps < 0) throw ValidationError("step count must be >= 0");
  for (int i = 0; i < steps; ++i) state = step(std::move(state), params);
  return state;
}

WalkState evolve(const InitialState& init, const WalkParams& params, int steps) {
  return evolve_state(make_state(init, params), params, steps);
}

PolarizedDistribution probability_distribution(const WalkState& state) {
  PolarizedDistribution d;
  d.offset = state.offset;
  d.t = state.t;
  d.p_h.resize(state.a.size());
  d.p_v.resize(state.b.size());
  for (size_t i = 0; i < state.a.size(); ++i) d.p_h[i] = abs2(state.a[i]);
  for (size_t i = 0; i < state.b.size(); ++i) d.p_v[i] = abs2(state.b[i]);
  return d;
}

double PolarizedDistribution::total() const {
  double s = 0.0;
  for (double p : p_h) s += p;
  for (double p : p_v) s += p;
  return s;
}

}  // namespace nhqw
