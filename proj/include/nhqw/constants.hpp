#pragma once

namespace nhqw {

// Tolerance for identities that hold algebraically (norm preservation,
// operator equivalences, closed-form eigenvalues).
inline constexpr double kAlgebraicTol = 1e-12;

// Tolerance for iterative numerical solvers (dense eigendecomposition).
inline constexpr double kSolverTol = 1e-8;

// Amplitudes below this are treated as exact zeros when taking logarithms;
// growth-rate profiles report -inf there instead of an invented floor.
inline constexpr double kAmplitudeFloor = 1e-300;

}  // namespace nhqw
