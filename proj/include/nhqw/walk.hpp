#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace nhqw {

using Complex = std::complex<double>;

enum class BoundaryKind { Infinite, Open, Periodic };

struct Boundary {
  BoundaryKind kind = BoundaryKind::Infinite;
  int n_sites = 0;  // meaningful for Open/Periodic only

  static Boundary infinite() { return {BoundaryKind::Infinite, 0}; }
  static Boundary open(int n) { return {BoundaryKind::Open, n}; }
  static Boundary periodic(int n) { return {BoundaryKind::Periodic, n}; }

  bool finite() const { return kind != BoundaryKind::Infinite; }
};

struct WalkParams {
  double theta = 0.0;  // coin angle, radians, in [0, pi/2]
  double gamma = 0.0;  // loss parameter, >= 0
  Boundary boundary = Boundary::infinite();
  bool normalize_each_step = true;

  // Throws ValidationError on out-of-range values.
  void validate() const;
};

// Localized two-component state at a single site: aH |x0,H> + bV |x0,V>.
struct InitialState {
  int position = 0;
  Complex a_h{1.0, 0.0};
  Complex b_v{0.0, 0.0};

  void validate() const;  // |aH|^2 + |bV|^2 = 1 within 1e-12
};

// Dense two-component amplitude window. Site x lives at index x - offset.
// For the infinite line the window grows by one site per side each step;
// for Open/Periodic it spans the whole lattice (offset 0).
struct WalkState {
  int offset = 0;
  std::vector<Complex> a;  // H amplitudes
  std::vector<Complex> b;  // V amplitudes
  int t = 0;
  // Running sum over steps of ln(pre-normalization norm); 0 when evolving
  // without per-step normalization.
  double norm_log = 0.0;

  int size() const { return static_cast<int>(a.size()); }
  bool contains(int x) const { return x >= offset && x < offset + size(); }
  Complex amp_h(int x) const { return contains(x) ? a[x - offset] : Complex{}; }
  Complex amp_v(int x) const { return contains(x) ? b[x - offset] : Complex{}; }
  double squared_norm() const;
};

// Polarization-resolved probabilities over the state's window.
struct PolarizedDistribution {
  int offset = 0;
  std::vector<double> p_h;
  std::vector<double> p_v;
  int t = 0;

  int size() const { return static_cast<int>(p_h.size()); }
  bool contains(int x) const { return x >= offset && x < offset + size(); }
  double at_h(int x) const { return contains(x) ? p_h[x - offset] : 0.0; }
  double at_v(int x) const { return contains(x) ? p_v[x - offset] : 0.0; }
  double total() const;
  double total_at(int x) const { return at_h(x) + at_v(x); }
};

// Coin: [[cos t, sin t], [sin t, -cos t]]; real, symmetric, det -1.
Eigen::Matrix2d coin_matrix(double theta);

// Loss: diag(1, e^-gamma). Throws ValidationError for gamma < 0.
Eigen::Matrix2d loss_matrix(double gamma);

// Embeds an initial state into a window consistent with the boundary.
WalkState make_state(const InitialState& init, const WalkParams& params);

// One step: coin, loss, then shift (H to x+1, V to x-1). Throws
// NumericalError if nonzero amplitude would leave an Open lattice.
WalkState step(WalkState state, const WalkParams& params);

// t-fold step from a WalkState.
WalkState evolve_state(WalkState state, const WalkParams& params, int steps);

// t-fold step from a localized initial state; t = 0 returns the embedding.
WalkState evolve(const InitialState& init, const WalkParams& params, int steps);

// P_H(x) = |a_x|^2, P_V(x) = |b_x|^2.
PolarizedDistribution probability_distribution(const WalkState& state);

}  // namespace nhqw
