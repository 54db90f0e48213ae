#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <vector>

#include "antiholo/manifold.hpp"
#include "antiholo/tensor.hpp"
#include "antiholo/tolerances.hpp"

namespace antiholo {

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Orthonormal J-adapted frame at a point: columns (e_1..e_n, Je_1..Je_n) of E,
/// g-orthonormal, with column n+a equal to J * column a exactly.
struct AdaptedFrame {
  int n = 0;
  Eigen::MatrixXd E;  // 2n x 2n, columns are the frame vectors in chart coordinates

  Eigen::VectorXd e(int a) const { return E.col(a); }
};

/// J-adapted Gram-Schmidt. Candidate directions are the coordinate axes taken
/// in `pivot_order` (default 0,1,..,2n-1); each accepted vector is
/// g-orthogonalized against every previously accepted vector, normalized, and
/// paired with its J-image. Deterministic: identical inputs give bitwise
/// identical frames.
inline AdaptedFrame adapted_frame(const Eigen::MatrixXd& g, const Eigen::MatrixXd& J,
                                  const std::vector<int>& pivot_order = {}) {
  const int dim = static_cast<int>(g.rows());
  const int n = dim / 2;

  std::vector<int> order = pivot_order;
  if (order.empty()) {
    order.resize(dim);
    std::iota(order.begin(), order.end(), 0);
  }

  AdaptedFrame frame;
  frame.n = n;
  frame.E.resize(dim, dim);

  int accepted = 0;
  for (int c : order) {
    if (accepted == n) break;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v[c] = 1.0;
    for (int k = 0; k < accepted; ++k) {
      const Eigen::VectorXd u = frame.E.col(k);
      const Eigen::VectorXd ju = frame.E.col(n + k);
      v -= (u.dot(g * v)) * u;
      v -= (ju.dot(g * v)) * ju;
    }
    const double nrm = std::sqrt(std::max(0.0, v.dot(g * v)));
    if (nrm < tol::kFramePivot) continue;  // axis already in span, skip
    v /= nrm;
    frame.E.col(accepted) = v;
    frame.E.col(n + accepted) = J * v;
    ++accepted;
  }
  if (accepted != n)
    throw FrameError("adapted frame construction exhausted the coordinate axes");
  return frame;
}

inline AdaptedFrame adapted_frame_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  return adapted_frame(M.metric_at(p), M.j_at(p));
}

/// Special complex basis Z_a = (e_a - i J e_a) / 2 spanning T^{1,0}.
struct ComplexBasis {
  int n = 0;
  Eigen::MatrixXcd Z;  // 2n x n, column a = Z_a in complexified chart coordinates

  Eigen::VectorXcd vec(int alpha, bool barred) const {
    return barred ? Z.col(alpha).conjugate().eval() : Eigen::VectorXcd(Z.col(alpha));
  }
};

inline ComplexBasis complex_basis(const AdaptedFrame& frame) {
  ComplexBasis b;
  b.n = frame.n;
  b.Z.resize(2 * frame.n, frame.n);
  const std::complex<double> I(0.0, 1.0);
  for (int a = 0; a < frame.n; ++a)
    b.Z.col(a) = 0.5 * (frame.E.col(a).cast<std::complex<double>>() -
                        I * frame.E.col(frame.n + a).cast<std::complex<double>>());
  return b;
}

/// Complex component array of a real tensor for one bar pattern: slot s is
/// contracted with Z (bar bit clear) or its conjugate (bar bit set). Indices
/// run over 0..n-1 per slot.
struct ComplexComponents {
  int n = 0;
  int rank = 0;
  unsigned bar_mask = 0;  // bit s set = slot s barred
  std::vector<std::complex<double>> data;

  std::complex<double>& at(std::initializer_list<int> idx) {
    return data[flat(idx)];
  }
  std::complex<double> at(std::initializer_list<int> idx) const {
    return data[flat(idx)];
  }
  std::complex<double> operator()(int a, int b) const { return at({a, b}); }
  std::complex<double> operator()(int a, int b, int c) const { return at({a, b, c}); }
  std::complex<double> operator()(int a, int b, int c, int d) const { return at({a, b, c, d}); }

  double max_abs() const {
    double worst = 0;
    for (const auto& z : data) worst = std::max(worst, std::abs(z));
    return worst;
  }

 private:
  std::size_t flat(std::initializer_list<int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * n + static_cast<std::size_t>(i);
    return f;
  }
};

namespace detail {

inline std::vector<Eigen::VectorXcd> slot_vectors(const ComplexBasis& basis, int rank,
                                                  unsigned bar_mask, int slot) {
  std::vector<Eigen::VectorXcd> vs(basis.n);
  const bool barred = (bar_mask >> slot) & 1u;
  for (int a = 0; a < basis.n; ++a) vs[a] = basis.vec(a, barred);
  (void)rank;
  return vs;
}

}  // namespace detail

inline ComplexComponents complex_components(const Eigen::MatrixXd& t, const ComplexBasis& basis,
                                            unsigned bar_mask) {
  const int n = basis.n, dim = 2 * n;
  ComplexComponents c;
  c.n = n;
  c.rank = 2;
  c.bar_mask = bar_mask;
  c.data.assign(static_cast<std::size_t>(n) * n, {});
  const auto v0 = detail::slot_vectors(basis, 2, bar_mask, 0);
  const auto v1 = detail::slot_vectors(basis, 2, bar_mask, 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::complex<double> s = 0;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += t(i, j) * v0[a][i] * v1[b][j];
      c.at({a, b}) = s;
    }
  return c;
}

inline ComplexComponents complex_components(const Tensor3& t, const ComplexBasis& basis,
                                            unsigned bar_mask) {
  const int n = basis.n, dim = 2 * n;
  ComplexComponents c;
  c.n = n;
  c.rank = 3;
  c.bar_mask = bar_mask;
  c.data.assign(static_cast<std::size_t>(n) * n * n, {});
  const auto v0 = detail::slot_vectors(basis, 3, bar_mask, 0);
  const auto v1 = detail::slot_vectors(basis, 3, bar_mask, 1);
  const auto v2 = detail::slot_vectors(basis, 3, bar_mask, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g) {
        std::complex<double> s = 0;
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) s += t(i, j, k) * v0[a][i] * v1[b][j] * v2[g][k];
        c.at({a, b, g}) = s;
      }
  return c;
}

inline ComplexComponents complex_components(const Tensor4& t, const ComplexBasis& basis,
                                            unsigned bar_mask) {
  const int n = basis.n, dim = 2 * n;
  ComplexComponents c;
  c.n = n;
  c.rank = 4;
  c.bar_mask = bar_mask;
  c.data.assign(static_cast<std::size_t>(n) * n * n * n, {});
  const auto v0 = detail::slot_vectors(basis, 4, bar_mask, 0);
  const auto v1 = detail::slot_vectors(basis, 4, bar_mask, 1);
  const auto v2 = detail::slot_vectors(basis, 4, bar_mask, 2);
  const auto v3 = detail::slot_vectors(basis, 4, bar_mask, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g)
        for (int d = 0; d < n; ++d) {
          std::complex<double> s = 0;
          for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
              for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l)
                  s += t(i, j, k, l) * v0[a][i] * v1[b][j] * v2[g][k] * v3[d][l];
          c.at({a, b, g, d}) = s;
        }
  return c;
}

/// Expansion coefficient of a real vector in the Z-basis: X = sum c_a Z_a + conj,
/// with c_a = 2 g(X, conj(Z_a)), g extended bilinearly (no conjugation).
inline Eigen::VectorXcd holomorphic_coefficients(const Eigen::VectorXd& x,
                                                 const Eigen::MatrixXd& g,
                                                 const ComplexBasis& basis) {
  Eigen::VectorXcd c(basis.n);
  const Eigen::VectorXcd gx = (g * x).cast<std::complex<double>>();
  for (int a = 0; a < basis.n; ++a)
    c[a] = 2.0 * gx.cwiseProduct(basis.Z.col(a).conjugate()).sum();
  return c;
}

}  // namespace antiholo
