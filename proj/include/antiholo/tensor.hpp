#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

namespace antiholo {

/// Dense pointwise (0,3) component array.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int dim) : dim_(dim), data_(Eigen::VectorXd::Zero(dim * dim * dim)) {}

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k) { return data_[(i * dim_ + j) * dim_ + k]; }
  double operator()(int i, int j, int k) const { return data_[(i * dim_ + j) * dim_ + k]; }

  double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }
  double frobenius_norm() const { return data_.norm(); }

  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }

 private:
  int dim_ = 0;
  Eigen::VectorXd data_;
};

/// Dense pointwise (0,4) component array.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int dim) : dim_(dim), data_(Eigen::VectorXd::Zero(dim * dim * dim * dim)) {}

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k, int l) {
    return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }

  double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }
  double frobenius_norm() const { return data_.norm(); }

  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }

  friend Tensor4 operator+(const Tensor4& a, const Tensor4& b) {
    Tensor4 r(a.dim_);
    r.data_ = a.data_ + b.data_;
    return r;
  }
  friend Tensor4 operator-(const Tensor4& a, const Tensor4& b) {
    Tensor4 r(a.dim_);
    r.data_ = a.data_ - b.data_;
    return r;
  }
  friend Tensor4 operator*(double s, const Tensor4& a) {
    Tensor4 r(a.dim_);
    r.data_ = s * a.data_;
    return r;
  }
  Tensor4& operator+=(const Tensor4& b) {
    data_ += b.data_;
    return *this;
  }

 private:
  int dim_ = 0;
  Eigen::VectorXd data_;
};

/// Dense pointwise (0,5) component array.
class Tensor5 {
 public:
  Tensor5() = default;
  explicit Tensor5(int dim)
      : dim_(dim), data_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim) * dim * dim * dim * dim)) {}

  int dim() const { return dim_; }
  double& operator()(int m, int i, int j, int k, int l) {
    return data_[(((static_cast<Eigen::Index>(m) * dim_ + i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double operator()(int m, int i, int j, int k, int l) const {
    return data_[(((static_cast<Eigen::Index>(m) * dim_ + i) * dim_ + j) * dim_ + k) * dim_ + l];
  }

  double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }
  double frobenius_norm() const { return data_.norm(); }

 private:
  int dim_ = 0;
  Eigen::VectorXd data_;
};

/// Full component contraction of two (0,4) arrays.
inline double tensor4_inner(const Tensor4& a, const Tensor4& b) {
  return a.data().dot(b.data());
}

// ---- basis change ----------------------------------------------------------
// Components of a covariant tensor in the basis whose vectors are the columns
// of E: T'(a,..) = T(i,..) E(i,a)... ; contracted one slot at a time.

inline Tensor3 change_basis(const Tensor3& t, const Eigen::MatrixXd& E) {
  const int d = t.dim();
  Tensor3 t1(d), t2(d), t3(d);
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0;
        for (int i = 0; i < d; ++i) s += t(i, j, k) * E(i, a);
        t1(a, j, k) = s;
      }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k) {
        double s = 0;
        for (int j = 0; j < d; ++j) s += t1(a, j, k) * E(j, b);
        t2(a, b, k) = s;
      }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = 0;
        for (int k = 0; k < d; ++k) s += t2(a, b, k) * E(k, c);
        t3(a, b, c) = s;
      }
  return t3;
}

inline Tensor4 change_basis(const Tensor4& t, const Eigen::MatrixXd& E) {
  const int d = t.dim();
  Tensor4 t1(d), t2(d), t3(d), t4(d);
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0;
          for (int i = 0; i < d; ++i) s += t(i, j, k, l) * E(i, a);
          t1(a, j, k, l) = s;
        }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0;
          for (int j = 0; j < d; ++j) s += t1(a, j, k, l) * E(j, b);
          t2(a, b, k, l) = s;
        }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int l = 0; l < d; ++l) {
          double s = 0;
          for (int k = 0; k < d; ++k) s += t2(a, b, k, l) * E(k, c);
          t3(a, b, c, l) = s;
        }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double s = 0;
          for (int l = 0; l < d; ++l) s += t3(a, b, c, l) * E(l, e);
          t4(a, b, c, e) = s;
        }
  return t4;
}

inline Tensor5 change_basis(const Tensor5& t, const Eigen::MatrixXd& E) {
  const int d = t.dim();
  Tensor5 cur(d), next(d);
  // slot 0
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            double s = 0;
            for (int m = 0; m < d; ++m) s += t(m, i, j, k, l) * E(m, a);
            cur(a, i, j, k, l) = s;
          }
  const auto pass = [&](int slot) {
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
              double s = 0;
              for (int m = 0; m < d; ++m) {
                int idx[5] = {a, i, j, k, l};
                idx[slot] = m;
                s += cur(idx[0], idx[1], idx[2], idx[3], idx[4]) * E(m, slot == 1 ? i : slot == 2 ? j : slot == 3 ? k : l);
              }
              next(a, i, j, k, l) = s;
            }
    cur = next;
  };
  pass(1);
  pass(2);
  pass(3);
  pass(4);
  return cur;
}

// ---- curvature symmetry residuals ------------------------------------------
// All residuals are max-abs of the defect scaled by 1/(1 + max-abs of the
// tensor itself).

inline double relative(double defect, double scale) { return defect / (1.0 + scale); }

/// Skewness in the first two slots: R(i,j,k,l) + R(j,i,k,l).
inline double skew12_residual(const Tensor4& r) {
  const int d = r.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(j, i, k, l)));
  return relative(worst, r.max_abs());
}

/// Skewness in the last two slots: R(i,j,k,l) + R(i,j,l,k).
inline double skew34_residual(const Tensor4& r) {
  const int d = r.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(i, j, l, k)));
  return relative(worst, r.max_abs());
}

/// Pair-exchange symmetry: R(i,j,k,l) - R(k,l,i,j).
inline double pair_exchange_residual(const Tensor4& r) {
  const int d = r.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          worst = std::max(worst, std::abs(r(i, j, k, l) - r(k, l, i, j)));
  return relative(worst, r.max_abs());
}

/// First Bianchi identity: cyclic sum over the first three slots.
inline double first_bianchi_residual(const Tensor4& r) {
  const int d = r.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          worst = std::max(worst,
                           std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
  return relative(worst, r.max_abs());
}

/// Second Bianchi identity: cyclic sum of (nabla R)(m; i,j,k,l) over (m,i,j).
inline double second_bianchi_residual(const Tensor5& nr) {
  const int d = nr.dim();
  double worst = 0;
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            worst = std::max(worst, std::abs(nr(m, i, j, k, l) + nr(i, j, m, k, l) +
                                             nr(j, m, i, k, l)));
  return relative(worst, nr.max_abs());
}

}  // namespace antiholo
