#include "nhqw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nhqw/constants.hpp"
#include "nhqw/errors.hpp"

namespace nhqw {

namespace {

constexpr double kPi = std::numbers::pi;

// Eigenvalues of a 2x2 complex matrix, cancellation-safe: the larger root
// comes from the quadratic formula, the other from the determinant.
std::array<Complex, 2> eig2(const Eigen::Matrix2cd& m) {
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  const Complex l1 = (std::abs(tr + disc) >= std::abs(tr - disc)) ? (tr + disc) / 2.0
                                                                  : (tr - disc) / 2.0;
  if (std::abs(l1) == 0.0) return {l1, l1};
  return {l1, det / l1};
}

// Unwraps the argument of a tracked eigenvalue curve into a continuous
// quasienergy polyline (re = -unwrapped arg, im = ln|lambda|).
std::vector<Complex> unwrapped_band(const std::vector<Complex>& lambdas) {
  std::vector<Complex> e(lambdas.size());
  double phase = std::arg(lambdas.front());
  e.front() = Complex(-phase, std::log(std::abs(lambdas.front())));
  for (size_t i = 1; i < lambdas.size(); ++i) {
    phase += std::arg(lambdas[i] / lambdas[i - 1]);
    e[i] = Complex(-phase, std::log(std::abs(lambdas[i])));
  }
  return e;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double u = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
  u = std::clamp(u, 0.0, 1.0);
  return std::abs(p - (a + u * ab));
}

// Lift e0 by a multiple of 2pi onto the branch window of an unwrapped band.
Complex lift_to_band(const std::vector<Complex>& band_e, Complex e0) {
  double mean_re = 0.0;
  for (const auto& e : band_e) mean_re += e.real();
  mean_re /= static_cast<double>(band_e.size());
  const double shift = 2.0 * kPi * std::round((mean_re - e0.real()) / (2.0 * kPi));
  return e0 + shift;
}

}  // namespace

BlochMatrix bloch_matrix(double k, double theta, double gamma) {
  if (!std::isfinite(k)) throw ValidationError("quasimomentum must be finite");
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = std::polar(1.0, k);
  d(1, 1) = std::polar(1.0, -k);
  BlochMatrix b;
  b.k = k;
  b.u = d * (loss_matrix(gamma) * coin_matrix(theta)).cast<Complex>();
  return b;
}

Complex quasienergy(Complex lambda) {
  const double mod = std::abs(lambda);
  if (mod < kAmplitudeFloor) {
    throw NumericalError("zero eigenvalue has no finite quasienergy");
  }
  double re = -std::arg(lambda);  // in [-pi, pi)
  if (re == -kPi) re = kPi;       // principal window (-pi, pi]
  return {re, std::log(mod)};
}

std::vector<Complex> SpectrumResult::all_energies() const {
  if (boundary == SpectrumBoundary::OBC) return energies;
  std::vector<Complex> out;
  out.reserve(bands[0].size() + bands[1].size());
  out.insert(out.end(), bands[0].begin(), bands[0].end());
  out.insert(out.end(), bands[1].begin(), bands[1].end());
  return out;
}

SpectrumResult pbc_spectrum(const WalkParams& params, int k_samples) {
  params.validate();
  if (k_samples < 16) {
    throw ValidationError("k_samples must be >= 16, got " + std::to_string(k_samples));
  }

  SpectrumResult res;
  res.boundary = SpectrumBoundary::PBC;
  res.params = params;
  res.k_grid.resize(k_samples);
  res.band_lambdas[0].resize(k_samples);
  res.band_lambdas[1].resize(k_samples);

  for (int i = 0; i < k_samples; ++i) {
    const double k = -kPi + 2.0 * kPi * i / k_samples;
    res.k_grid[i] = k;
    const auto l = eig2(bloch_matrix(k, params.theta, params.gamma).u);
    if (i == 0) {
      res.band_lambdas[0][0] = l[0];
      res.band_lambdas[1][0] = l[1];
      continue;
    }
    const Complex p0 = res.band_lambdas[0][i - 1];
    const Complex p1 = res.band_lambdas[1][i - 1];
    const double keep = std::abs(l[0] - p0) + std::abs(l[1] - p1);
    const double swap = std::abs(l[1] - p0) + std::abs(l[0] - p1);
    const bool swapped = swap < keep;
    res.band_lambdas[0][i] = swapped ? l[1] : l[0];
    res.band_lambdas[1][i] = swapped ? l[0] : l[1];
    // Nearest-eigenvalue matching breaks down when the pair gap shrinks
    // below a fraction of the eigenvalue motion per grid interval (near an
    // exceptional point); flag instead of reordering silently.
    const double motion_scale = 2.0 * kPi / k_samples;
    if (std::abs(l[0] - l[1]) < 0.1 * motion_scale || std::abs(keep - swap) < 1e-12) {
      res.ambiguous_k.push_back(i);
    }
  }

  for (int b = 0; b < 2; ++b) {
    res.bands[b].resize(k_samples);
    for (int i = 0; i < k_samples; ++i) res.bands[b][i] = quasienergy(res.band_lambdas[b][i]);
  }
  return res;
}

Eigen::MatrixXcd dense_walk_matrix(const WalkParams& params) {
  params.validate();
  if (!params.boundary.finite()) {
    throw ValidationError("dense walk matrix requires an Open or Periodic boundary");
  }
  const int n = params.boundary.n_sites;
  const bool periodic = params.boundary.kind == BoundaryKind::Periodic;
  const Eigen::Matrix2d m = loss_matrix(params.gamma) * coin_matrix(params.theta);

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < 2; ++c) {
      const int src = 2 * x + c;
      if (periodic) {
        u(2 * ((x + 1) % n) + 0, src) += m(0, c);
        u(2 * ((x + n - 1) % n) + 1, src) += m(1, c);
      } else {
        if (x + 1 < n) {
          u(2 * (x + 1) + 0, src) += m(0, c);
        } else {
          u(2 * x + 1, src) += m(0, c);  // right edge: H reflects to V
        }
        if (x - 1 >= 0) {
          u(2 * (x - 1) + 1, src) += m(1, c);
        } else {
          u(2 * x + 0, src) += m(1, c);  // left edge: V reflects to H
        }
      }
    }
  }
  return u;
}

EigResult eig_dense(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ValidationError("eig_dense requires a square matrix");
  if (!m.allFinite()) throw ValidationError("eig_dense requires finite entries");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense eigensolver failed to converge");
  }
  EigResult res{solver.eigenvalues(), solver.eigenvectors()};

  const double scale = m.norm();  // Frobenius
  for (Eigen::Index i = 0; i < res.values.size(); ++i) {
    const double resid = (m * res.vectors.col(i) - res.values[i] * res.vectors.col(i)).norm();
    if (resid > kSolverTol * scale) {
      throw NumericalError("eigenpair " + std::to_string(i) + " violates the residual contract: " +
                           std::to_string(resid));
    }
  }
  return res;
}

SpectrumResult obc_spectrum(const WalkParams& params, bool with_states) {
  params.validate();
  if (params.boundary.kind != BoundaryKind::Open) {
    throw ValidationError("obc_spectrum requires an Open boundary");
  }
  const int n = params.boundary.n_sites;
  if (n > 500) throw ValidationError("obc_spectrum supports N <= 500");

  const auto eig = eig_dense(dense_walk_matrix(params));

  SpectrumResult res;
  res.boundary = SpectrumBoundary::OBC;
  res.params = params;
  res.energies.resize(2 * n);
  for (int i = 0; i < 2 * n; ++i) res.energies[i] = quasienergy(eig.values[i]);
  if (with_states) {
    res.profiles.assign(2 * n, std::vector<double>(n));
    for (int i = 0; i < 2 * n; ++i) {
      double total = 0.0;
      for (int x = 0; x < n; ++x) {
        const double p = std::norm(eig.vectors(2 * x, i)) + std::norm(eig.vectors(2 * x + 1, i));
        res.profiles[i][x] = p;
        total += p;
      }
      for (int x = 0; x < n; ++x) res.profiles[i][x] /= total;
    }
  }
  return res;
}

namespace {

void require_tracked_pbc(const SpectrumResult& pbc) {
  if (pbc.boundary != SpectrumBoundary::PBC) {
    throw ValidationError("expected a PBC spectrum");
  }
  if (!pbc.ambiguous_k.empty()) {
    throw NumericalError("band tracking was ambiguous at " +
                         std::to_string(pbc.ambiguous_k.size()) +
                         " k points; bands are not reliably separated");
  }
  // Each band must close on itself across the zone boundary.
  for (int b = 0; b < 2; ++b) {
    const auto& lam = pbc.band_lambdas[b];
    const double self = std::abs(lam.front() - lam.back());
    const double cross = std::abs(pbc.band_lambdas[1 - b].front() - lam.back());
    if (self > cross) {
      throw NumericalError("band " + std::to_string(b) +
                           " does not close over the Brillouin zone (bands swap)");
    }
    // A band whose eigenvalue curve encircles the origin winds around the
    // quasienergy cylinder; it has no planar loop.
    double drift = 0.0;
    for (size_t i = 0; i < lam.size(); ++i) {
      drift += std::arg(lam[(i + 1) % lam.size()] / lam[i]);
    }
    if (std::abs(drift) > kPi) {
      throw NumericalError("band " + std::to_string(b) +
                           " winds around the quasienergy cylinder; its loop is undefined");
    }
  }
}

}  // namespace

std::array<double, 2> spectral_loop_area(const SpectrumResult& pbc) {
  require_tracked_pbc(pbc);
  std::array<double, 2> areas{};
  for (int b = 0; b < 2; ++b) {
    const auto e = unwrapped_band(pbc.band_lambdas[b]);
    double twice = 0.0;
    for (size_t i = 0; i < e.size(); ++i) {
      const Complex& p = e[i];
      const Complex& q = e[(i + 1) % e.size()];
      twice += p.real() * q.imag() - q.real() * p.imag();
    }
    areas[b] = std::abs(twice) / 2.0;
  }
  return areas;
}

double curve_distance(const SpectrumResult& pbc, Complex e0) {
  require_tracked_pbc(pbc);
  double dmin = std::numeric_limits<double>::infinity();
  for (int b = 0; b < 2; ++b) {
    const auto e = unwrapped_band(pbc.band_lambdas[b]);
    const Complex p = lift_to_band(e, e0);
    for (size_t i = 0; i < e.size(); ++i) {
      dmin = std::min(dmin, point_segment_distance(p, e[i], e[(i + 1) % e.size()]));
    }
  }
  return dmin;
}

int point_gap_winding(const SpectrumResult& pbc, Complex e0) {
  require_tracked_pbc(pbc);
  if (curve_distance(pbc, e0) <= 1e-6) {
    throw NumericalError("reference energy lies on (or within 1e-6 of) the spectral curve");
  }
  double total = 0.0;
  for (int b = 0; b < 2; ++b) {
    const auto e = unwrapped_band(pbc.band_lambdas[b]);
    const Complex p = lift_to_band(e, e0);
    for (size_t i = 0; i < e.size(); ++i) {
      total += std::arg((e[(i + 1) % e.size()] - p) / (e[i] - p));
    }
  }
  const double w = total / (2.0 * kPi);
  const int rounded = static_cast<int>(std::lround(w));
  if (std::abs(w - rounded) > 0.01) {
    throw NumericalError("winding sum " + std::to_string(w) +
                         " is not close to an integer; curve under-resolved");
  }
  return rounded;
}

double edge_mass(std::span<const double> profile, double fraction) {
  if (!(fraction > 0.0 && fraction <= 0.5)) {
    throw ValidationError("edge fraction must lie in (0, 0.5]");
  }
  const int n = static_cast<int>(profile.size());
  if (n == 0) throw ValidationError("empty profile");
  const int w = static_cast<int>(std::ceil(fraction * n));
  double left = 0.0, right = 0.0;
  for (int i = 0; i < w; ++i) {
    left += profile[i];
    right += profile[n - 1 - i];
  }
  return std::max(left, right);
}

}  // namespace nhqw
