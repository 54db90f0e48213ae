#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "antiholo/tensor.hpp"
#include "antiholo/tolerances.hpp"

namespace antiholo {

/// All constructions below take explicit (g, J) component matrices, so they
/// work both in chart coordinates and in an orthonormal frame (g = I). The
/// inner products used by the least-squares fit assume an orthonormal frame.

/// pi1(X,Y,Z,U) = g(Y,Z) g(X,U) - g(X,Z) g(Y,U); models constant sectional
/// curvature.
inline Tensor4 pi1(const Eigen::MatrixXd& g) {
  const int d = static_cast<int>(g.rows());
  Tensor4 t(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) t(i, j, k, l) = g(j, k) * g(i, l) - g(i, k) * g(j, l);
  return t;
}

/// pi2(X,Y,Z,U) = g(Y,JZ) g(X,JU) - g(X,JZ) g(Y,JU) - 2 g(X,JY) g(Z,JU).
inline Tensor4 pi2(const Eigen::MatrixXd& g, const Eigen::MatrixXd& J) {
  const int d = static_cast<int>(g.rows());
  const Eigen::MatrixXd S = g * J;  // S(i,j) = g(e_i, J e_j)
  Tensor4 t(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          t(i, j, k, l) = S(j, k) * S(i, l) - S(i, k) * S(j, l) - 2.0 * S(i, j) * S(k, l);
  return t;
}

/// Residual of the twisted symmetry Q(JX,JY) = Q(Y,X), i.e. J^T Q J = Q^T.
inline double twisted_symmetry_residual(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& J) {
  const Eigen::MatrixXd defect = J.transpose() * Q * J - Q.transpose();
  return defect.cwiseAbs().maxCoeff() / (1.0 + Q.cwiseAbs().maxCoeff());
}

/// The six-term construction
///   psi(Q)(X,Y,Z,U) = g(Y,JZ) Q(X,JU) - g(X,JZ) Q(Y,JU) - 2 g(X,JY) Q(Z,JU)
///                   + g(X,JU) Q(Y,JZ) - g(Y,JU) Q(X,JZ) - 2 g(Z,JU) Q(X,JY).
/// Input must satisfy the twisted symmetry above; psi(g) = 2 pi2 and psi(Q)
/// vanishes identically on antiholomorphic planes.
inline Tensor4 psi_of(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& g,
                      const Eigen::MatrixXd& J) {
  if (twisted_symmetry_residual(Q, J) > tol::kQAdmissible)
    throw std::invalid_argument("psi_of: input does not satisfy Q(JX,JY) = Q(Y,X)");
  const int d = static_cast<int>(g.rows());
  const Eigen::MatrixXd S = g * J;   // g(e_i, J e_j)
  const Eigen::MatrixXd QJ = Q * J;  // Q(e_i, J e_j)
  Tensor4 t(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          t(i, j, k, l) = S(j, k) * QJ(i, l) - S(i, k) * QJ(j, l) - 2.0 * S(i, j) * QJ(k, l) +
                          S(i, l) * QJ(j, k) - S(j, l) * QJ(i, k) - 2.0 * S(k, l) * QJ(i, j);
  return t;
}

struct QTensor {
  Eigen::MatrixXd Q;
  double trace = 0.0;  // g-trace
};

/// Q = rho*/(2(n+1)) - (tau* + 2(n+1) nu) / (4(n+1)(2n+1)) g.
inline QTensor q_from_star_ricci(const Eigen::MatrixXd& rho_star, double tau_star, double nu,
                                 int n, const Eigen::MatrixXd& g) {
  QTensor q;
  const double a = 1.0 / (2.0 * (n + 1));
  const double b = (tau_star + 2.0 * (n + 1) * nu) / (4.0 * (n + 1) * (2.0 * n + 1));
  q.Q = a * rho_star - b * g;
  q.trace = g.llt().solve(q.Q).trace();
  return q;
}

struct IdentityResidual {
  double characterization = 0.0;  // || R - psi(rho*)/(2(n+1)) + tau* pi2 /(2(n+1)(2n+1))
                                  //    - nu (pi1 - pi2/(2n+1)) || / (1 + ||R||)
  double q_form = 0.0;            // || R - psi(Q) - nu pi1 || / (1 + ||R||)
  double nu_used = 0.0;
};

/// Residuals of the pointwise-constant-antiholomorphic-curvature
/// characterization, in both of its algebraically equivalent forms. The two
/// residuals agree to round-off for every input.
inline IdentityResidual residual_constant_antiholo(const Tensor4& R, const Eigen::MatrixXd& rho_star,
                                                   double tau_star, double nu, int n,
                                                   const Eigen::MatrixXd& g,
                                                   const Eigen::MatrixXd& J) {
  IdentityResidual out;
  out.nu_used = nu;
  const double denom = 1.0 + R.frobenius_norm();

  const Tensor4 p1 = pi1(g);
  const Tensor4 p2 = pi2(g, J);

  const double c1 = 1.0 / (2.0 * (n + 1));
  const double c2 = tau_star / (2.0 * (n + 1) * (2.0 * n + 1));
  Tensor4 lhs = R - c1 * psi_of(rho_star, g, J) + c2 * p2;
  Tensor4 rhs = nu * (p1 - (1.0 / (2.0 * n + 1)) * p2);
  out.characterization = (lhs - rhs).frobenius_norm() / denom;

  const QTensor q = q_from_star_ricci(rho_star, tau_star, nu, n, g);
  Tensor4 recon = psi_of(q.Q, g, J) + nu * p1;
  out.q_form = (R - recon).frobenius_norm() / denom;
  return out;
}

/// Algebraic curvature tensor psi(Q) + nu pi1: constant antiholomorphic
/// sectional curvature nu by construction, independent of any metric's actual
/// curvature. Fixture generator for the plane and verification layers.
inline Tensor4 synthetic_curvature(const Eigen::MatrixXd& Q, double nu, const Eigen::MatrixXd& g,
                                   const Eigen::MatrixXd& J) {
  Tensor4 r = psi_of(Q, g, J);
  r += nu * pi1(g);
  return r;
}

struct PiFit {
  double f = 0.0;
  double h = 0.0;
  double residual = 0.0;  // || R - f pi1 - h pi2 || / (1 + ||R||)
};

/// Least-squares projection of R onto span{pi1, pi2} via the 2x2 Gram system.
/// Components must be given in an orthonormal frame. Requires n >= 3 (the
/// generalized-space-form setting needs real dimension >= 6).
inline PiFit fit_pi_basis(const Tensor4& R, const Eigen::MatrixXd& g, const Eigen::MatrixXd& J) {
  const int d = static_cast<int>(g.rows());
  if (d < 6) throw std::invalid_argument("fit_pi_basis requires real dimension >= 6");

  const Tensor4 p1 = pi1(g);
  const Tensor4 p2 = pi2(g, J);
  Eigen::Matrix2d gram;
  gram << tensor4_inner(p1, p1), tensor4_inner(p1, p2), tensor4_inner(p1, p2),
      tensor4_inner(p2, p2);
  Eigen::Vector2d rhs(tensor4_inner(p1, R), tensor4_inner(p2, R));
  // pi1 and pi2 are linearly independent, so the Gram matrix is SPD; guard anyway
  if (std::abs(gram.determinant()) < 1e-12 * (1.0 + gram.cwiseAbs().maxCoeff()))
    throw std::runtime_error("fit_pi_basis: singular Gram system");
  const Eigen::Vector2d coeff = gram.ldlt().solve(rhs);

  PiFit fit;
  fit.f = coeff[0];
  fit.h = coeff[1];
  fit.residual = (R - fit.f * p1 - fit.h * p2).frobenius_norm() / (1.0 + R.frobenius_norm());
  return fit;
}

}  // namespace antiholo
