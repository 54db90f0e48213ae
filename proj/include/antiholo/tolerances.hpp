#pragma once

/// Central tolerance ladder. Each rung is a decade apart so that a verdict
/// computed at one rung cannot flap because of noise admitted at the rung
/// below it:
///
///   structure axioms          1e-9   (jet evaluation is exact; round-off only)
///   identities, <= 2 derivs   1e-8
///   identities, 3 derivs      1e-7
///   verdict thresholds        1e-6
namespace antiholo::tol {

inline constexpr double kStructure = 1e-9;
inline constexpr double kOrder2 = 1e-8;
inline constexpr double kOrder3 = 1e-7;
inline constexpr double kVerdict = 1e-6;

/// Admissibility bound on the twisted symmetry Q(JX,JY) = Q(Y,X) for tensors
/// fed to the psi construction; malformed synthetic inputs are rejected early.
inline constexpr double kQAdmissible = 1e-6;

/// Gram-Schmidt pivot rejection threshold in frame construction.
inline constexpr double kFramePivot = 1e-12;

}  // namespace antiholo::tol
