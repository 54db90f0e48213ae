#pragma once

#include <Eigen/Core>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace antiholo {

/// Raised by jet operations that leave the function's domain (log/sqrt of a
/// non-positive value, division by zero). The expression layer catches it and
/// re-throws with the offending subexpression attached.
class JetDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated Taylor expansion of a scalar field at a point: value plus
/// partial derivatives up to `order` (0..3) in `dim` variables.
///
/// Second and third derivative blocks are stored packed (one entry per sorted
/// multi-index) and mirrored on read, so index-permutation symmetry is exact
/// by construction. Arithmetic follows the Leibniz/Faa di Bruno rules, so all
/// derivatives of composed expressions are exact up to round-off.
class Jet {
 public:
  Jet() = default;

  Jet(int dim, int order) : dim_(dim), order_(order) {
    assert(dim >= 1 && order >= 0 && order <= 3);
    if (order_ >= 1) d1_ = Eigen::VectorXd::Zero(dim_);
    if (order_ >= 2) d2_ = Eigen::VectorXd::Zero(size2(dim_));
    if (order_ >= 3) d3_ = Eigen::VectorXd::Zero(size3(dim_));
  }

  static Jet constant(int dim, int order, double value) {
    Jet j(dim, order);
    j.v_ = value;
    return j;
  }

  /// Coordinate variable x_index (0-based) seeded with its point value.
  static Jet variable(int dim, int order, int index, double value) {
    assert(index >= 0 && index < dim);
    Jet j(dim, order);
    j.v_ = value;
    if (order >= 1) j.d1_[index] = 1.0;
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  double value() const { return v_; }

  double d1(int i) const { return order_ >= 1 ? d1_[i] : 0.0; }

  double d2(int i, int j) const {
    if (order_ < 2) return 0.0;
    if (i > j) std::swap(i, j);
    return d2_[idx2(i, j, dim_)];
  }

  double d3(int i, int j, int k) const {
    if (order_ < 3) return 0.0;
    sort3(i, j, k);
    return d3_[idx3(i, j, k, dim_)];
  }

  /// Partial derivative with respect to x_i, as a jet of one order less.
  Jet deriv(int i) const {
    assert(order_ >= 1);
    Jet r(dim_, order_ - 1);
    r.v_ = d1_[i];
    if (r.order_ >= 1)
      for (int j = 0; j < dim_; ++j) r.d1_[j] = d2(i, j);
    if (r.order_ >= 2)
      for (int j = 0; j < dim_; ++j)
        for (int k = j; k < dim_; ++k) r.d2_[idx2(j, k, dim_)] = d3(i, j, k);
    return r;
  }

  Jet truncated(int new_order) const {
    assert(new_order <= order_);
    if (new_order == order_) return *this;
    Jet r(dim_, new_order);
    r.v_ = v_;
    if (new_order >= 1) r.d1_ = d1_;
    if (new_order >= 2) r.d2_ = d2_;
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    r.v_ = -r.v_;
    r.d1_ = -r.d1_;
    r.d2_ = -r.d2_;
    r.d3_ = -r.d3_;
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    Jet r = a;
    r.v_ += b.v_;
    r.d1_ += b.d1_;
    r.d2_ += b.d2_;
    r.d3_ += b.d3_;
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    Jet r = a;
    r.v_ -= b.v_;
    r.d1_ -= b.d1_;
    r.d2_ -= b.d2_;
    r.d3_ -= b.d3_;
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    const int dim = a.dim_;
    Jet r(dim, a.order_);
    r.v_ = a.v_ * b.v_;
    if (r.order_ >= 1) r.d1_ = a.v_ * b.d1_ + b.v_ * a.d1_;
    if (r.order_ >= 2) {
      for (int i = 0, p = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j, ++p)
          r.d2_[p] = a.v_ * b.d2_[p] + b.v_ * a.d2_[p] + a.d1_[i] * b.d1_[j] +
                     a.d1_[j] * b.d1_[i];
    }
    if (r.order_ >= 3) {
      for (int i = 0, p = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
          for (int k = j; k < dim; ++k, ++p) {
            const int jk = idx2(j, k, dim), ik = idx2(i, k, dim), ij = idx2(i, j, dim);
            r.d3_[p] = a.v_ * b.d3_[p] + b.v_ * a.d3_[p] +
                       a.d1_[i] * b.d2_[jk] + a.d1_[j] * b.d2_[ik] + a.d1_[k] * b.d2_[ij] +
                       b.d1_[i] * a.d2_[jk] + b.d1_[j] * a.d2_[ik] + b.d1_[k] * a.d2_[ij];
          }
    }
    return r;
  }

  /// Triangular solve of r * b = a, exact through order 3.
  friend Jet operator/(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    if (b.v_ == 0.0) throw JetDomainError("division by zero");
    const int dim = a.dim_;
    Jet r(dim, a.order_);
    r.v_ = a.v_ / b.v_;
    if (r.order_ >= 1)
      for (int i = 0; i < dim; ++i) r.d1_[i] = (a.d1_[i] - r.v_ * b.d1_[i]) / b.v_;
    if (r.order_ >= 2) {
      for (int i = 0, p = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j, ++p)
          r.d2_[p] = (a.d2_[p] - r.v_ * b.d2_[p] - r.d1_[i] * b.d1_[j] -
                      r.d1_[j] * b.d1_[i]) /
                     b.v_;
    }
    if (r.order_ >= 3) {
      for (int i = 0, p = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
          for (int k = j; k < dim; ++k, ++p) {
            const int jk = idx2(j, k, dim), ik = idx2(i, k, dim), ij = idx2(i, j, dim);
            r.d3_[p] = (a.d3_[p] - r.v_ * b.d3_[p] - r.d1_[i] * b.d2_[jk] -
                        r.d1_[j] * b.d2_[ik] - r.d1_[k] * b.d2_[ij] -
                        r.d2_[ij] * b.d1_[k] - r.d2_[ik] * b.d1_[j] -
                        r.d2_[jk] * b.d1_[i]) /
                       b.v_;
          }
    }
    return r;
  }

  friend Jet operator+(const Jet& a, double s) { Jet r = a; r.v_ += s; return r; }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { Jet r = a; r.v_ -= s; return r; }
  friend Jet operator-(double s, const Jet& a) { Jet r = -a; r.v_ += s; return r; }
  friend Jet operator*(const Jet& a, double s) {
    Jet r = a;
    r.v_ *= s;
    r.d1_ *= s;
    r.d2_ *= s;
    r.d3_ *= s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) {
    if (s == 0.0) throw JetDomainError("division by zero");
    return a * (1.0 / s);
  }
  friend Jet operator/(double s, const Jet& a) {
    return constant(a.dim_, a.order_, s) / a;
  }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }

  /// Univariate composition f(u) by the chain rule through third order:
  ///   (f.u)_i   = f' u_i
  ///   (f.u)_ij  = f' u_ij + f'' u_i u_j
  ///   (f.u)_ijk = f' u_ijk + f''(u_i u_jk + u_j u_ik + u_k u_ij) + f''' u_i u_j u_k
  static Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
    const int dim = u.dim_;
    Jet r(dim, u.order_);
    r.v_ = f0;
    if (r.order_ >= 1) r.d1_ = f1 * u.d1_;
    if (r.order_ >= 2) {
      for (int i = 0, p = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j, ++p)
          r.d2_[p] = f1 * u.d2_[p] + f2 * u.d1_[i] * u.d1_[j];
    }
    if (r.order_ >= 3) {
      for (int i = 0, p = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
          for (int k = j; k < dim; ++k, ++p) {
            const int jk = idx2(j, k, dim), ik = idx2(i, k, dim), ij = idx2(i, j, dim);
            r.d3_[p] = f1 * u.d3_[p] +
                       f2 * (u.d1_[i] * u.d2_[jk] + u.d1_[j] * u.d2_[ik] +
                             u.d1_[k] * u.d2_[ij]) +
                       f3 * u.d1_[i] * u.d1_[j] * u.d1_[k];
          }
    }
    return r;
  }

  static int size2(int dim) { return dim * (dim + 1) / 2; }
  static int size3(int dim) { return dim * (dim + 1) * (dim + 2) / 6; }

  /// Packed index of sorted pair (i <= j).
  static int idx2(int i, int j, int dim) { return i * dim - i * (i - 1) / 2 + (j - i); }

  /// Packed index of sorted triple (i <= j <= k).
  static int idx3(int i, int j, int k, int dim) {
    const auto tet = [](int x) { return x * (x + 1) * (x + 2) / 6; };
    return tet(dim) - tet(dim - i) + idx2(j - i, k - i, dim - i);
  }

 private:
  static void check_compatible(const Jet& a, const Jet& b) {
    assert(a.dim_ == b.dim_ && a.order_ == b.order_);
    (void)b;
  }

  static void sort3(int& i, int& j, int& k) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
  }

  int dim_ = 1;
  int order_ = 0;
  double v_ = 0.0;
  Eigen::VectorXd d1_, d2_, d3_;
};

inline Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return Jet::compose(u, s, c, -s, -c);
}

inline Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return Jet::compose(u, c, -s, -c, s);
}

inline Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  return Jet::compose(u, e, e, e, e);
}

inline Jet log(const Jet& u) {
  const double x = u.value();
  if (x <= 0.0) throw JetDomainError("log of non-positive value");
  return Jet::compose(u, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

inline Jet sqrt(const Jet& u) {
  const double x = u.value();
  if (x <= 0.0) throw JetDomainError("sqrt of non-positive value");
  const double s = std::sqrt(x);
  return Jet::compose(u, s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

inline Jet atan(const Jet& u) {
  const double x = u.value();
  const double w = 1.0 + x * x;
  return Jet::compose(u, std::atan(x), 1.0 / w, -2.0 * x / (w * w),
                      (6.0 * x * x - 2.0) / (w * w * w));
}

/// Integer power by repeated multiplication; exact on negative bases.
inline Jet pow_int(const Jet& u, int e) {
  if (e == 0) return Jet::constant(u.dim(), u.order(), 1.0);
  if (e < 0) return Jet::constant(u.dim(), u.order(), 1.0) / pow_int(u, -e);
  Jet acc = u;
  Jet result = Jet::constant(u.dim(), u.order(), 1.0);
  int k = e;
  while (k > 0) {
    if (k & 1) result *= acc;
    k >>= 1;
    if (k > 0) acc *= acc;
  }
  return result;
}

}  // namespace antiholo
