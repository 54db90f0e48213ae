#pragma once

#include <Eigen/Dense>
#include <vector>

#include "antiholo/frames.hpp"
#include "antiholo/manifold.hpp"
#include "antiholo/tensor.hpp"

namespace antiholo {

/// Gauss-Jordan inverse of a matrix of jets (entries row-major). Pivots on the
/// value part; the metric is SPD wherever this is called, so a vanishing pivot
/// means the structure validation was skipped or failed.
inline std::vector<Jet> jet_matrix_inverse(std::vector<Jet> a, int dim) {
  const int order = a[0].order();
  const int jdim = a[0].dim();
  std::vector<Jet> inv(dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      inv[i * dim + j] = Jet::constant(jdim, order, i == j ? 1.0 : 0.0);

  for (int col = 0; col < dim; ++col) {
    int pivot = col;
    for (int r = col + 1; r < dim; ++r)
      if (std::abs(a[r * dim + col].value()) > std::abs(a[pivot * dim + col].value())) pivot = r;
    if (std::abs(a[pivot * dim + col].value()) < 1e-14)
      throw ManifoldError("singular metric: cannot invert");
    if (pivot != col)
      for (int j = 0; j < dim; ++j) {
        std::swap(a[pivot * dim + j], a[col * dim + j]);
        std::swap(inv[pivot * dim + j], inv[col * dim + j]);
      }
    const Jet piv = a[col * dim + col];
    for (int j = 0; j < dim; ++j) {
      a[col * dim + j] = a[col * dim + j] / piv;
      inv[col * dim + j] = inv[col * dim + j] / piv;
    }
    for (int r = 0; r < dim; ++r) {
      if (r == col) continue;
      const Jet f = a[r * dim + col];
      for (int j = 0; j < dim; ++j) {
        a[r * dim + j] = a[r * dim + j] - f * a[col * dim + j];
        inv[r * dim + j] = inv[r * dim + j] - f * inv[col * dim + j];
      }
    }
  }
  return inv;
}

struct TraceSet {
  Eigen::MatrixXd rho;       // Ricci
  Eigen::MatrixXd rho_star;  // *-Ricci (not symmetric in general)
  double tau = 0.0;
  double tau_star = 0.0;
};

/// Traces of a curvature array given in an orthonormal frame with structure Jf:
///   rho(a,b)      = sum_i R(i,a,b,i)
///   rho_star(a,b) = sum_i R(i,a, J b, J i)
inline TraceSet traces_in_frame(const Tensor4& r, const Eigen::MatrixXd& Jf) {
  const int d = r.dim();
  TraceSet t;
  t.rho = Eigen::MatrixXd::Zero(d, d);
  t.rho_star = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = 0;
      for (int i = 0; i < d; ++i) s += r(i, a, b, i);
      t.rho(a, b) = s;
      double ss = 0;
      for (int i = 0; i < d; ++i)
        for (int m = 0; m < d; ++m)
          for (int k = 0; k < d; ++k) ss += r(i, a, m, k) * Jf(m, b) * Jf(k, i);
      t.rho_star(a, b) = ss;
    }
  t.tau = t.rho.trace();
  t.tau_star = t.rho_star.trace();
  return t;
}

/// Same traces computed with inverse-metric weights in an arbitrary basis;
/// kept as the independent second route.
inline TraceSet traces_with_metric(const Tensor4& r, const Eigen::MatrixXd& g,
                                   const Eigen::MatrixXd& J) {
  const int d = r.dim();
  const Eigen::MatrixXd ginv = g.inverse();
  TraceSet t;
  t.rho = Eigen::MatrixXd::Zero(d, d);
  t.rho_star = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) s += ginv(a, b) * r(a, i, j, b);
      t.rho(i, j) = s;
      double ss = 0;
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c)
          for (int m = 0; m < d; ++m)
            for (int e = 0; e < d; ++e)
              ss += r(a, i, m, e) * J(m, j) * J(e, c) * ginv(c, a);
      t.rho_star(i, j) = ss;
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      t.tau += ginv(i, j) * t.rho(i, j);
      t.tau_star += ginv(i, j) * t.rho_star(i, j);
    }
  return t;
}

/// Everything the verification layer needs at one point, in chart coordinates.
struct CurvaturePackage {
  int n = 0, dim = 0;
  Eigen::VectorXd point;
  Eigen::MatrixXd g, g_inv, J, Phi;  // Phi(i,j) = g(J e_i, e_j)
  Tensor3 Gamma;                     // Gamma(k,i,j) = Gamma^k_{ij}
  Tensor4 R4;                        // R(i,j,k,l), paper sign convention:
                                     // K(X,Y) = R(X,Y,Y,X) = +1 on the unit sphere
  Tensor5 nablaR;                    // (nabla_m R)(i,j,k,l); only when order3
  Tensor3 F3;                        // F(i,j,k) = g((nabla_i J) e_j, e_k)
  Tensor3 Nij;                       // lowered Nijenhuis: g(N(e_i,e_j), e_k)
  bool has_order3 = false;
  double deriv_scale = 0.0;          // max |first partial| over g and J entries
};

inline CurvaturePackage compute_package(const ChartManifold& M, const Eigen::VectorXd& p,
                                        bool with_third_order = true) {
  const int dim = M.dim();
  const int order = with_third_order ? 3 : 2;

  CurvaturePackage pkg;
  pkg.n = M.n();
  pkg.dim = dim;
  pkg.point = p;
  pkg.has_order3 = with_third_order;

  const std::vector<Jet> gj = M.metric_jets_at(p, order);
  const std::vector<Jet> jj = M.j_jets_at(p, 1);

  pkg.g.resize(dim, dim);
  pkg.J.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      pkg.g(i, j) = gj[i * dim + j].value();
      pkg.J(i, j) = jj[i * dim + j].value();
    }
  pkg.g_inv = pkg.g.inverse();
  pkg.Phi = pkg.J.transpose() * pkg.g;

  pkg.deriv_scale = 0.0;
  for (int e = 0; e < dim * dim; ++e)
    for (int i = 0; i < dim; ++i)
      pkg.deriv_scale =
          std::max({pkg.deriv_scale, std::abs(gj[e].d1(i)), std::abs(jj[e].d1(i))});

  // inverse metric and Christoffel symbols, one jet order below g
  std::vector<Jet> g_low(dim * dim);
  for (int e = 0; e < dim * dim; ++e) g_low[e] = gj[e].truncated(order - 1);
  const std::vector<Jet> ginv_j = jet_matrix_inverse(g_low, dim);

  std::vector<Jet> dg(dim * dim * dim);  // dg[(i*dim+j)*dim+l] = d_i g_{jl}, order-1 jets
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l) dg[(i * dim + j) * dim + l] = gj[j * dim + l].deriv(i);

  std::vector<Jet> gamma(dim * dim * dim);  // gamma[(k*dim+i)*dim+j], order-1 jets
  pkg.Gamma = Tensor3(dim);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        Jet s = Jet::constant(dim, order - 1, 0.0);
        for (int l = 0; l < dim; ++l) {
          const Jet sum = dg[(i * dim + j) * dim + l] + dg[(j * dim + i) * dim + l] -
                          dg[(l * dim + i) * dim + j];
          s += ginv_j[k * dim + l] * sum;
        }
        s = 0.5 * s;
        gamma[(k * dim + i) * dim + j] = s;
        gamma[(k * dim + j) * dim + i] = s;
        pkg.Gamma(k, i, j) = s.value();
        pkg.Gamma(k, j, i) = s.value();
      }

  // Riemann tensor, lowered; jets one order below Gamma so that nabla R exists
  const int r_order = order - 2;
  std::vector<Jet> r4j;
  pkg.R4 = Tensor4(dim);
  r4j.assign(static_cast<std::size_t>(dim) * dim * dim * dim, Jet());
  {
    std::vector<Jet> gamma_low(gamma.size());
    for (std::size_t e = 0; e < gamma.size(); ++e) gamma_low[e] = gamma[e].truncated(r_order);
    std::vector<Jet> g_r(dim * dim);
    for (int e = 0; e < dim * dim; ++e) g_r[e] = gj[e].truncated(r_order);

    std::vector<Jet> rup(static_cast<std::size_t>(dim) * dim * dim * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int m = 0; m < dim; ++m) {
            Jet s = gamma[(m * dim + j) * dim + k].deriv(i) -
                    gamma[(m * dim + i) * dim + k].deriv(j);
            for (int q = 0; q < dim; ++q)
              s += gamma_low[(m * dim + i) * dim + q] * gamma_low[(q * dim + j) * dim + k] -
                   gamma_low[(m * dim + j) * dim + q] * gamma_low[(q * dim + i) * dim + k];
            rup[((static_cast<std::size_t>(i) * dim + j) * dim + k) * dim + m] = s;
          }

    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) {
            Jet s = Jet::constant(dim, r_order, 0.0);
            for (int m = 0; m < dim; ++m)
              s += g_r[l * dim + m] *
                   rup[((static_cast<std::size_t>(i) * dim + j) * dim + k) * dim + m];
            r4j[((static_cast<std::size_t>(i) * dim + j) * dim + k) * dim + l] = s;
            pkg.R4(i, j, k, l) = s.value();
          }
  }

  // covariant derivative of R (third-order path only)
  if (with_third_order) {
    pkg.nablaR = Tensor5(dim);
    const auto R = [&](int i, int j, int k, int l) -> const Jet& {
      return r4j[((static_cast<std::size_t>(i) * dim + j) * dim + k) * dim + l];
    };
    for (int m = 0; m < dim; ++m)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l) {
              double s = R(i, j, k, l).d1(m);
              for (int q = 0; q < dim; ++q)
                s -= pkg.Gamma(q, m, i) * R(q, j, k, l).value() +
                     pkg.Gamma(q, m, j) * R(i, q, k, l).value() +
                     pkg.Gamma(q, m, k) * R(i, j, q, l).value() +
                     pkg.Gamma(q, m, l) * R(i, j, k, q).value();
              pkg.nablaR(m, i, j, k, l) = s;
            }
  }

  // structure tensor F(i,j,k) = g_{kl} (d_i J^l_j + Gamma^l_{im} J^m_j - Gamma^m_{ij} J^l_m)
  pkg.F3 = Tensor3(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        double s = 0;
        for (int l = 0; l < dim; ++l) {
          double nab = jj[l * dim + j].d1(i);
          for (int m = 0; m < dim; ++m)
            nab += pkg.Gamma(l, i, m) * pkg.J(m, j) - pkg.Gamma(m, i, j) * pkg.J(l, m);
          s += pkg.g(k, l) * nab;
        }
        pkg.F3(i, j, k) = s;
      }

  // Nijenhuis tensor (lowered): N^l_{ij} g_{lk}
  pkg.Nij = Tensor3(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) pkg.Nij(i, j, k) = 0.0;
      for (int l = 0; l < dim; ++l) {
        double nl = 0;
        for (int m = 0; m < dim; ++m)
          nl += pkg.J(m, i) * jj[l * dim + j].d1(m) - pkg.J(m, j) * jj[l * dim + i].d1(m) +
                pkg.J(l, m) * (jj[m * dim + i].d1(j) - jj[m * dim + j].d1(i));
        for (int k = 0; k < dim; ++k) pkg.Nij(i, j, k) += nl * pkg.g(l, k);
      }
    }

  return pkg;
}

// ---- per-operation wrappers --------------------------------------------------

inline Tensor3 christoffel_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  return compute_package(M, p, false).Gamma;
}

inline Tensor4 riemann_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  return compute_package(M, p, false).R4;
}

/// Ricci, *-Ricci and both scalar curvatures, as frame components in the
/// adapted orthonormal frame at p.
inline TraceSet ricci_scalar_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  const CurvaturePackage pkg = compute_package(M, p, false);
  const AdaptedFrame frame = adapted_frame(pkg.g, pkg.J);
  const Eigen::MatrixXd Jf = frame.E.transpose() * pkg.g * pkg.J * frame.E;
  return traces_in_frame(change_basis(pkg.R4, frame.E), Jf);
}

inline Tensor3 f_tensor_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  return compute_package(M, p, false).F3;
}

inline Tensor3 nijenhuis_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  return compute_package(M, p, false).Nij;
}

inline Tensor5 covar_deriv_riemann_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  return compute_package(M, p, true).nablaR;
}

/// Frame-space view of a package: all component arrays rewritten in the
/// adapted orthonormal frame, where g = I and the traces take the textbook
/// orthonormal form.
struct FrameView {
  AdaptedFrame frame;
  Eigen::MatrixXd Jf;   // frame components of J (J0 up to round-off)
  Tensor4 R4f;
  Tensor5 nablaRf;
  Tensor3 F3f;
  Tensor3 Nf;
  TraceSet traces;      // frame-route traces
  double f_norm = 0.0;  // Frobenius norms in the frame
  double n_norm = 0.0;
};

inline FrameView frame_view(const CurvaturePackage& pkg) {
  FrameView v;
  v.frame = adapted_frame(pkg.g, pkg.J);
  v.Jf = v.frame.E.transpose() * pkg.g * pkg.J * v.frame.E;
  v.R4f = change_basis(pkg.R4, v.frame.E);
  if (pkg.has_order3) v.nablaRf = change_basis(pkg.nablaR, v.frame.E);
  v.F3f = change_basis(pkg.F3, v.frame.E);
  v.Nf = change_basis(pkg.Nij, v.frame.E);
  v.traces = traces_in_frame(v.R4f, v.Jf);
  v.f_norm = v.F3f.frobenius_norm();
  v.n_norm = v.Nf.frobenius_norm();
  return v;
}

}  // namespace antiholo
