#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "antiholo/rng.hpp"
#include "antiholo/tensor.hpp"
#include "antiholo/tensorcalc.hpp"

namespace antiholo {

class PlaneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tangent 2-plane spanned by a g-orthonormal pair (X, Y), with the angle
/// theta between the plane and its J-image (largest principal angle cosine).
struct TangentPlane {
  Eigen::VectorXd X, Y;
  double theta = 0.0;
};

/// Angle between E = span(X,Y) and JE from the principal angles: the entries
/// g(X,JX), g(X,JY), g(Y,JX), g(Y,JY) form a 2x2 matrix whose largest singular
/// value is cos(theta). Antiholomorphic planes have theta = pi/2.
inline double plane_angle(const Eigen::MatrixXd& g, const Eigen::MatrixXd& J,
                          const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  Eigen::Matrix2d m;
  m << X.dot(g * (J * X)), X.dot(g * (J * Y)), Y.dot(g * (J * X)), Y.dot(g * (J * Y));
  const double smax = m.jacobiSvd().singularValues().maxCoeff();
  return std::acos(std::clamp(smax, 0.0, 1.0));
}

/// Draw an antiholomorphic plane: X is a normalized Gaussian vector, Y a
/// Gaussian vector g-orthogonalized against {X, JX} and normalized. The four
/// conditions g(X,Y) = g(X,JY) = g(Y,JX) = 0, g(X,JX) = 0 then hold by
/// construction. Resamples on near-degenerate projections (measure zero).
inline TangentPlane random_antiholomorphic_plane(const Eigen::MatrixXd& g,
                                                 const Eigen::MatrixXd& J, CounterRng& rng) {
  const int dim = static_cast<int>(g.rows());
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::VectorXd x = rng.normal_vector(dim);
    const double nx = std::sqrt(x.dot(g * x));
    if (nx < 1e-8) continue;
    x /= nx;

    const Eigen::VectorXd jx = J * x;
    Eigen::VectorXd y = rng.normal_vector(dim);
    y -= y.dot(g * x) * x;
    y -= (y.dot(g * jx) / jx.dot(g * jx)) * jx;
    const double ny = std::sqrt(std::max(0.0, y.dot(g * y)));
    if (ny < 1e-8) continue;
    y /= ny;

    TangentPlane plane;
    plane.X = std::move(x);
    plane.Y = std::move(y);
    plane.theta = plane_angle(g, J, plane.X, plane.Y);
    return plane;
  }
  throw PlaneError("failed to draw an antiholomorphic plane after 16 attempts");
}

/// K = R(X,Y,Y,X) for an orthonormal pair, components in an orthonormal frame.
inline double sectional_curvature(const Tensor4& R, const TangentPlane& plane) {
  const Eigen::VectorXd& X = plane.X;
  const Eigen::VectorXd& Y = plane.Y;
  if (std::abs(X.squaredNorm() - 1.0) > 1e-8 || std::abs(Y.squaredNorm() - 1.0) > 1e-8 ||
      std::abs(X.dot(Y)) > 1e-8)
    throw PlaneError("sectional_curvature: spanning pair is not orthonormal");
  const int d = R.dim();
  double k = 0;
  for (int i = 0; i < d; ++i) {
    if (X[i] == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      if (Y[j] == 0.0) continue;
      for (int kk = 0; kk < d; ++kk) {
        if (Y[kk] == 0.0) continue;
        double acc = 0;
        for (int l = 0; l < d; ++l) acc += R(i, j, kk, l) * X[l];
        k += acc * X[i] * Y[j] * Y[kk];
      }
    }
  }
  return k;
}

namespace detail {

/// Re-projection onto the antiholomorphic constraint set, anchored at the
/// (normalized) first vector: same orthogonalization recipe as the sampler.
inline bool project_plane(const Eigen::MatrixXd& J, const Eigen::VectorXd& raw_x,
                          const Eigen::VectorXd& raw_y, TangentPlane& out) {
  const double nx = raw_x.norm();
  if (nx < 1e-12) return false;
  const Eigen::VectorXd x = raw_x / nx;
  const Eigen::VectorXd jx = J * x;
  Eigen::VectorXd y = raw_y;
  y -= y.dot(x) * x;
  y -= (y.dot(jx) / jx.squaredNorm()) * jx;
  const double ny = y.norm();
  if (ny < 1e-8) return false;
  out.X = x;
  out.Y = y / ny;
  return true;
}

struct AscentResult {
  double k = 0.0;
  TangentPlane plane;
  int iterations = 0;
};

/// Projected gradient ascent of sign * K over the antiholomorphic constraint
/// set, finite-difference gradient in the raw (X, Y) coordinates, projection
/// after every step, backtracking step control. Stops when the best step
/// improves by less than 1e-12 or after 500 iterations.
inline AscentResult projected_ascent(const Tensor4& R, const Eigen::MatrixXd& J,
                                     const TangentPlane& start, double sign) {
  const int dim = R.dim();
  const auto value = [&](const Eigen::VectorXd& rx, const Eigen::VectorXd& ry, bool& ok) {
    TangentPlane p;
    ok = project_plane(J, rx, ry, p);
    return ok ? sign * sectional_curvature(R, p) : 0.0;
  };

  Eigen::VectorXd rx = start.X, ry = start.Y;
  bool ok = true;
  double best = value(rx, ry, ok);
  if (!ok) return {sign * 0.0, start, 0};

  const double h = 1e-6;
  double step = 0.25;
  int iter = 0;
  for (; iter < 500; ++iter) {
    Eigen::VectorXd gx(dim), gy(dim);
    for (int i = 0; i < dim; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
      e[i] = h;
      bool o1 = true, o2 = true;
      gx[i] = (value(rx + e, ry, o1) - value(rx - e, ry, o2)) / (2 * h);
      gy[i] = (value(rx, ry + e, o1) - value(rx, ry - e, o2)) / (2 * h);
    }
    const double gnorm = std::sqrt(gx.squaredNorm() + gy.squaredNorm());
    if (gnorm < 1e-14) break;

    double improvement = 0.0;
    for (int halvings = 0; halvings < 40; ++halvings) {
      const Eigen::VectorXd cx = rx + (step / gnorm) * gx;
      const Eigen::VectorXd cy = ry + (step / gnorm) * gy;
      bool o = true;
      const double v = value(cx, cy, o);
      if (o && v > best) {
        improvement = v - best;
        best = v;
        TangentPlane p;
        project_plane(J, cx, cy, p);
        rx = p.X;
        ry = p.Y;
        step = std::min(step * 1.5, 1.0);
        break;
      }
      step *= 0.5;
    }
    if (improvement < 1e-12) break;
  }

  AscentResult res;
  res.iterations = iter;
  project_plane(J, rx, ry, res.plane);
  res.k = sign * best;
  return res;
}

}  // namespace detail

struct ExtremizeResult {
  double k_min = 0.0, k_max = 0.0;
  TangentPlane argmin, argmax;
  int iterations_min = 0, iterations_max = 0;  // totals over restarts
};

/// Minimize and maximize K over antiholomorphic planes by multi-start
/// projected gradient, components in an orthonormal frame (g = I). Extra
/// `warm_starts` planes (e.g. best sampled candidates) join the random
/// restarts.
inline ExtremizeResult extremize_antiholomorphic(const Tensor4& R, const Eigen::MatrixXd& J,
                                                 int restarts, std::uint64_t seed,
                                                 const std::vector<TangentPlane>& warm_starts = {}) {
  if (restarts < 1) throw PlaneError("extremize: restarts must be >= 1");
  const int dim = R.dim();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);

  std::vector<TangentPlane> starts = warm_starts;
  for (int r = 0; r < restarts; ++r) {
    CounterRng rng(seed, 0x9000 + static_cast<std::uint64_t>(r));
    starts.push_back(random_antiholomorphic_plane(id, J, rng));
  }

  ExtremizeResult out;
  bool first = true;
  for (const auto& s : starts) {
    const auto hi = detail::projected_ascent(R, J, s, +1.0);
    const auto lo = detail::projected_ascent(R, J, s, -1.0);
    out.iterations_max += hi.iterations;
    out.iterations_min += lo.iterations;
    if (first || hi.k > out.k_max) {
      out.k_max = hi.k;
      out.argmax = hi.plane;
    }
    if (first || lo.k < out.k_min) {
      out.k_min = lo.k;
      out.argmin = lo.plane;
    }
    first = false;
  }
  return out;
}

/// Constancy evidence from m sampled antiholomorphic planes plus constrained
/// extremization.
struct ConstancyStats {
  double nu_hat = 0.0;   // sample mean of K
  double max_dev = 0.0;  // max |K - nu_hat| over samples and extremization endpoints
  double k_min = 0.0, k_max = 0.0;
  int m = 0;
  std::uint64_t seed = 0;
};

/// Sample statistics of K over the antiholomorphic Grassmannian of an
/// algebraic curvature tensor in an orthonormal frame. The extremization is
/// warm-started from the extreme sampled planes, so [k_min, k_max] always
/// brackets the sampled values.
inline ConstancyStats constancy_stats_tensor(const Tensor4& R, const Eigen::MatrixXd& J, int m,
                                             std::uint64_t seed, int restarts = 16) {
  if (m < 32) throw PlaneError("constancy stats need at least 32 samples");
  const int dim = R.dim();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);

  ConstancyStats st;
  st.m = m;
  st.seed = seed;

  std::vector<double> ks(m);
  TangentPlane lo_plane, hi_plane;
  double lo = 0, hi = 0;
  double mean = 0;
  for (int i = 0; i < m; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const TangentPlane p = random_antiholomorphic_plane(id, J, rng);
    ks[i] = sectional_curvature(R, p);
    mean += ks[i];
    if (i == 0 || ks[i] < lo) {
      lo = ks[i];
      lo_plane = p;
    }
    if (i == 0 || ks[i] > hi) {
      hi = ks[i];
      hi_plane = p;
    }
  }
  mean /= m;
  st.nu_hat = mean;

  const ExtremizeResult ext = extremize_antiholomorphic(R, J, restarts, seed, {lo_plane, hi_plane});
  st.k_min = std::min(ext.k_min, lo);
  st.k_max = std::max(ext.k_max, hi);

  double dev = 0;
  for (double k : ks) dev = std::max(dev, std::abs(k - mean));
  dev = std::max({dev, st.k_max - mean, mean - st.k_min});
  st.max_dev = dev;
  return st;
}

/// Constancy statistics at a chart point: curvature is computed there, moved
/// to the adapted frame, then sampled and extremized.
inline ConstancyStats constancy_stats(const ChartManifold& M, const Eigen::VectorXd& p, int m,
                                      std::uint64_t seed, int restarts = 16) {
  const FrameView view = frame_view(compute_package(M, p, false));
  return constancy_stats_tensor(view.R4f, view.Jf, m, seed, restarts);
}

inline ExtremizeResult extremize_antiholomorphic(const ChartManifold& M, const Eigen::VectorXd& p,
                                                 int restarts, std::uint64_t seed) {
  const FrameView view = frame_view(compute_package(M, p, false));
  return extremize_antiholomorphic(view.R4f, view.Jf, restarts, seed);
}

}  // namespace antiholo
