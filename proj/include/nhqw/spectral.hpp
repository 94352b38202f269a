#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <span>
#include <vector>

#include "nhqw/walk.hpp"

namespace nhqw {

// Momentum-space block of the walk operator: U_k = D(k) L(gamma) C(theta)
// with D(k) = diag(e^{ik}, e^{-ik}).
struct BlochMatrix {
  double k = 0.0;
  Eigen::Matrix2cd u;
};

BlochMatrix bloch_matrix(double k, double theta, double gamma);

// Principal-branch quasienergy E = i ln(lambda), Re E in (-pi, pi].
Complex quasienergy(Complex lambda);

enum class SpectrumBoundary { PBC, OBC };

struct SpectrumResult {
  SpectrumBoundary boundary = SpectrumBoundary::PBC;
  WalkParams params;

  // PBC: two bands tracked continuously in k over a uniform grid on
  // [-pi, pi). band_lambdas holds the U_k eigenvalues in tracked order,
  // bands the corresponding quasienergies.
  std::vector<double> k_grid;
  std::array<std::vector<Complex>, 2> bands;
  std::array<std::vector<Complex>, 2> band_lambdas;
  // k indices where the two eigenvalues were too close to order reliably.
  std::vector<int> ambiguous_k;

  // OBC: one quasienergy per matrix eigenvalue, plus optional normalized
  // spatial profiles |psi(x)|^2 = |a_x|^2 + |b_x|^2 of the right eigenvectors.
  std::vector<Complex> energies;
  std::vector<std::vector<double>> profiles;

  // All quasienergies regardless of boundary: 2*k_samples for PBC, 2N for OBC.
  std::vector<Complex> all_energies() const;
};

// Quasienergy bands on a uniform k grid, ordered by nearest-eigenvalue
// continuation between adjacent k points. k_samples >= 16.
SpectrumResult pbc_spectrum(const WalkParams& params, int k_samples);

// Explicit 2N x 2N matrix of the walk operator in the site (x major) tensor
// polarization (H=0, V=1 minor) basis; column index 2x+pol is the source.
// Open boundaries use the unitary reflecting completion: the H component at
// the right edge flips to V on-site, the V component at the left edge flips
// to H, so the operator stays unitary at gamma = 0.
Eigen::MatrixXcd dense_walk_matrix(const WalkParams& params);

struct EigResult {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // columns
};

// Full dense non-Hermitian eigendecomposition. Enforces the residual
// contract ||M v - lambda v|| <= 1e-8 ||M||_F per pair; throws
// NumericalError carrying the offending index otherwise.
EigResult eig_dense(const Eigen::MatrixXcd& m);

// Quasienergies (and optionally eigenstate profiles) of the open lattice.
// Requires params.boundary Open with N <= 500.
SpectrumResult obc_spectrum(const WalkParams& params, bool with_states);

// Unsigned shoelace area enclosed by each tracked PBC band in the
// quasienergy plane (phase-unwrapped along the band, so loops straddling
// Re E = +-pi are handled). Throws NumericalError for untracked bands.
std::array<double, 2> spectral_loop_area(const SpectrumResult& pbc);

// Total winding number of the tracked PBC curve(s) around e0, by summed
// argument increments. e0 is lifted by multiples of 2pi onto each band's
// branch before counting, since quasienergies live on a cylinder. Throws
// NumericalError if e0 is closer than 1e-6 to the curve.
int point_gap_winding(const SpectrumResult& pbc, Complex e0);

// Minimal distance from e0 to the sampled PBC curve (segment distance,
// with the same per-band 2pi lift as the winding).
double curve_distance(const SpectrumResult& pbc, Complex e0);

// Probability mass within the ceil(f*N) sites nearest the heavier edge.
// Requires 0 < f <= 0.5 and a normalized profile.
double edge_mass(std::span<const double> profile, double fraction);

}  // namespace nhqw
