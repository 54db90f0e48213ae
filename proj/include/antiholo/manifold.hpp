#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "antiholo/expr.hpp"
#include "antiholo/tolerances.hpp"

namespace antiholo {

class ManifoldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-axis coordinate box.
struct Box {
  Eigen::VectorXd lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Eigen::VectorXd& p) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }

  Eigen::VectorXd at_fractions(const Eigen::VectorXd& f) const {
    return lo.array() + f.array() * (hi - lo).array();
  }
};

struct ValidationReport {
  Eigen::VectorXd point;
  double spd_min_eigenvalue = 0.0;
  double spd_residual = 0.0;        // max(0, -lambda_min) / (1 + lambda_max)
  double j_squared_residual = 0.0;  // max-abs of J^2 + I, relative
  double compat_residual = 0.0;     // max-abs of J^T g J - g, relative
  bool pass = false;
};

/// Chart-level almost Hermitian manifold: metric g_ij and almost complex
/// structure J^i_j as evaluable expressions over a coordinate box. Real
/// coordinates are ordered as J-pairs, (x_1..x_n, y_1..y_n), with the
/// standard structure acting as J e_a = e_{n+a}.
///
/// Immutable after construction; all evaluation is pure.
class ChartManifold {
 public:
  ChartManifold(int n, Box domain, std::vector<Expr> metric_lower, std::vector<Expr> j_entries,
                std::string name, std::vector<double> params = {})
      : n_(n),
        dim_(2 * n),
        domain_(std::move(domain)),
        g_lower_(std::move(metric_lower)),
        j_(std::move(j_entries)),
        name_(std::move(name)),
        params_(std::move(params)) {
    if (n_ < 2) throw ManifoldError("complex dimension must satisfy n >= 2");
    if (domain_.dim() != dim_) throw ManifoldError("domain dimension mismatch");
    if (static_cast<int>(g_lower_.size()) != dim_ * (dim_ + 1) / 2)
      throw ManifoldError("metric entry count mismatch");
    if (static_cast<int>(j_.size()) != dim_ * dim_) throw ManifoldError("J entry count mismatch");
  }

  int n() const { return n_; }
  int dim() const { return dim_; }
  const Box& domain() const { return domain_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& params() const { return params_; }

  /// Lower-triangle storage index for (i, j) with i >= j.
  static int lower_index(int i, int j) { return i * (i + 1) / 2 + j; }

  const Expr& metric_entry(int i, int j) const {
    if (i < j) std::swap(i, j);
    return g_lower_[lower_index(i, j)];
  }
  const Expr& j_entry(int i, int j) const { return j_[i * dim_ + j]; }

  Eigen::MatrixXd metric_at(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd g(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = metric_entry(i, j).eval_value(p);
    return g;
  }

  Eigen::MatrixXd j_at(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd J(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) J(i, j) = j_entry(i, j).eval_value(p);
    return J;
  }

  /// Jets of all metric entries (full symmetric matrix, row-major).
  std::vector<Jet> metric_jets_at(const Eigen::VectorXd& p, int order) const {
    std::vector<Jet> g(dim_ * dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j <= i; ++j) {
        Jet v = metric_entry(i, j).eval(p, order);
        g[i * dim_ + j] = v;
        if (i != j) g[j * dim_ + i] = v;
      }
    return g;
  }

  std::vector<Jet> j_jets_at(const Eigen::VectorXd& p, int order) const {
    std::vector<Jet> J(dim_ * dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) J[i * dim_ + j] = j_entry(i, j).eval(p, order);
    return J;
  }

  bool structurally_equal(const ChartManifold& other) const {
    if (n_ != other.n_) return false;
    if ((domain_.lo - other.domain_.lo).cwiseAbs().maxCoeff() != 0.0) return false;
    if ((domain_.hi - other.domain_.hi).cwiseAbs().maxCoeff() != 0.0) return false;
    for (std::size_t k = 0; k < g_lower_.size(); ++k)
      if (!g_lower_[k].equals(other.g_lower_[k])) return false;
    for (std::size_t k = 0; k < j_.size(); ++k)
      if (!j_[k].equals(other.j_[k])) return false;
    return true;
  }

 private:
  int n_;
  int dim_;
  Box domain_;
  std::vector<Expr> g_lower_;  // row-major lower triangle, (i,j) with i >= j
  std::vector<Expr> j_;        // full matrix, row-major
  std::string name_;
  std::vector<double> params_;
};

/// Structure axioms at a point: g SPD, J^2 = -I, g(JX,JY) = g(X,Y).
inline ValidationReport validate_structure_at(const ChartManifold& M, const Eigen::VectorXd& p) {
  if (!M.domain().contains(p)) throw ManifoldError("point outside chart domain");
  ValidationReport rep;
  rep.point = p;

  const Eigen::MatrixXd g = M.metric_at(p);
  const Eigen::MatrixXd J = M.j_at(p);
  const int d = M.dim();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  rep.spd_min_eigenvalue = eig.eigenvalues().minCoeff();
  const double lambda_max = eig.eigenvalues().cwiseAbs().maxCoeff();
  rep.spd_residual = std::max(0.0, -rep.spd_min_eigenvalue) / (1.0 + lambda_max);
  const bool spd_ok = rep.spd_min_eigenvalue > 0.0 && rep.spd_residual < tol::kStructure;

  const Eigen::MatrixXd j2 = J * J + Eigen::MatrixXd::Identity(d, d);
  rep.j_squared_residual = j2.cwiseAbs().maxCoeff() / (1.0 + J.cwiseAbs().maxCoeff());

  const Eigen::MatrixXd compat = J.transpose() * g * J - g;
  rep.compat_residual = compat.cwiseAbs().maxCoeff() / (1.0 + g.cwiseAbs().maxCoeff());

  rep.pass = spd_ok && rep.j_squared_residual < tol::kStructure &&
             rep.compat_residual < tol::kStructure;
  return rep;
}

/// Deterministic interior lattice: 3 fractions per axis (1/4, 1/2, 3/4),
/// subsampled by a fixed stride when 3^dim exceeds `cap`.
inline std::vector<Eigen::VectorXd> probe_grid(const ChartManifold& M, int cap = 200) {
  const int d = M.dim();
  long total = 1;
  for (int i = 0; i < d; ++i) total *= 3;
  const long stride = (total + cap - 1) / cap;
  static const double fractions[3] = {0.25, 0.5, 0.75};

  std::vector<Eigen::VectorXd> points;
  points.reserve(cap);
  for (long idx = 0; idx < total && static_cast<int>(points.size()) < cap; idx += stride) {
    long rem = idx;
    Eigen::VectorXd f(d);
    for (int axis = 0; axis < d; ++axis) {
      f[axis] = fractions[rem % 3];
      rem /= 3;
    }
    points.push_back(M.domain().at_fractions(f));
  }
  return points;
}

// ---- catalog ----------------------------------------------------------------

namespace detail {

inline std::vector<Expr> identity_metric(int dim) {
  std::vector<Expr> g(dim * (dim + 1) / 2, Expr::constant(0.0, dim));
  for (int i = 0; i < dim; ++i) g[ChartManifold::lower_index(i, i)] = Expr::constant(1.0, dim);
  return g;
}

/// Entries of the standard structure J0: J e_a = e_{n+a}, J e_{n+a} = -e_a.
inline std::vector<Expr> standard_j(int n) {
  const int dim = 2 * n;
  std::vector<Expr> J(dim * dim, Expr::constant(0.0, dim));
  for (int a = 0; a < n; ++a) {
    J[(n + a) * dim + a] = Expr::constant(1.0, dim);   // row n+a, col a
    J[a * dim + (n + a)] = Expr::constant(-1.0, dim);  // row a, col n+a
  }
  return J;
}

inline Box cube(int dim, double lo, double hi) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(dim, lo);
  b.hi = Eigen::VectorXd::Constant(dim, hi);
  return b;
}

inline int require_integer_n(double v) {
  const int n = static_cast<int>(std::lround(v));
  if (std::abs(v - n) > 1e-12 || n < 2)
    throw ManifoldError("invalid parameters: n must be an integer >= 2");
  return n;
}

// Symbolic dim x dim expression matrices used to assemble the twisted-J entry.
using ExprMat = std::vector<Expr>;

inline ExprMat expr_identity(int dim) {
  ExprMat m(dim * dim, Expr::constant(0.0, dim));
  for (int i = 0; i < dim; ++i) m[i * dim + i] = Expr::constant(1.0, dim);
  return m;
}

inline ExprMat expr_mul(const ExprMat& A, const ExprMat& B, int dim) {
  ExprMat C(dim * dim, Expr::constant(0.0, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Expr s = Expr::constant(0.0, dim);
      for (int k = 0; k < dim; ++k) s = s + A[i * dim + k] * B[k * dim + j];
      C[i * dim + j] = s;
    }
  return C;
}

inline ExprMat expr_add(const ExprMat& A, const ExprMat& B, int dim) {
  ExprMat C(dim * dim, Expr::constant(0.0, dim));
  for (int i = 0; i < dim * dim; ++i) C[i] = A[i] + B[i];
  return C;
}

inline ExprMat expr_scale(const Expr& s, const ExprMat& A, int dim) {
  ExprMat C(dim * dim, Expr::constant(0.0, dim));
  for (int i = 0; i < dim * dim; ++i) C[i] = s * A[i];
  return C;
}

inline ExprMat expr_transpose(const ExprMat& A, int dim) {
  ExprMat C(dim * dim, Expr::constant(0.0, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) C[i * dim + j] = A[j * dim + i];
  return C;
}

}  // namespace detail

/// Flat R^{2n}: identity metric, standard J. Kaehler.
inline ChartManifold make_flat(int n) {
  const int dim = 2 * n;
  return ChartManifold(n, detail::cube(dim, -1.0, 1.0), detail::identity_metric(dim),
                       detail::standard_j(n), "flat", {static_cast<double>(n)});
}

/// Fubini-Study metric in an affine chart, scaled so the holomorphic sectional
/// curvature equals c. With u = 1 + sum(x_a^2 + y_a^2):
///   g(dx_a, dx_b) = g(dy_a, dy_b) = (4/c) (delta_ab u - x_a x_b - y_a y_b) / u^2
///   g(dx_a, dy_b) = -(4/c) (x_a y_b - x_b y_a) / u^2
/// For c = 4 the metric is the identity at the chart origin. Kaehler.
inline ChartManifold make_fubini_study(int n, double c) {
  if (c <= 0.0) throw ManifoldError("invalid parameters: c must be positive");
  const int dim = 2 * n;
  const auto X = [&](int a) { return Expr::variable(a, dim); };        // x_a, 0-based
  const auto Y = [&](int a) { return Expr::variable(n + a, dim); };    // y_a

  Expr u = Expr::constant(1.0, dim);
  for (int i = 0; i < dim; ++i) u = u + pow(Expr::variable(i, dim), 2);
  const Expr u2 = pow(u, 2);
  const Expr scale = Expr::constant(4.0 / c, dim);

  std::vector<Expr> g(dim * (dim + 1) / 2, Expr::constant(0.0, dim));
  const auto set = [&](int i, int j, const Expr& e) {
    if (i < j) std::swap(i, j);
    g[ChartManifold::lower_index(i, j)] = e;
  };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b) {
      const Expr delta = Expr::constant(a == b ? 1.0 : 0.0, dim);
      const Expr common = scale * (delta * u - X(a) * X(b) - Y(a) * Y(b)) / u2;
      set(a, b, common);          // x_a x_b block
      set(n + a, n + b, common);  // y_a y_b block
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;  // the cross block is antisymmetric in (a,b)
      // g(dx_a, dy_b) lives at matrix entry (a, n+b); row n+b is always the larger index
      const Expr cross = -(scale * (X(a) * Y(b) - X(b) * Y(a)) / u2);
      set(n + b, a, cross);
    }

  return ChartManifold(n, detail::cube(dim, -0.9, 0.9), std::move(g), detail::standard_j(n),
                       "fubini_study", {static_cast<double>(n), c});
}

/// Hopf-type locally conformally Kaehler chart: g = delta / |z|^2 on a box
/// bounded away from the origin, standard J. Hermitian, non-Kaehler.
inline ChartManifold make_hopf(int n) {
  const int dim = 2 * n;
  Expr r2 = Expr::constant(0.0, dim);
  for (int i = 0; i < dim; ++i) r2 = r2 + pow(Expr::variable(i, dim), 2);

  std::vector<Expr> g(dim * (dim + 1) / 2, Expr::constant(0.0, dim));
  for (int i = 0; i < dim; ++i)
    g[ChartManifold::lower_index(i, i)] = Expr::constant(1.0, dim) / r2;

  // box with min |z| = 0.6 > 0.5, containing z = (1,0,..) and (2,0,..)
  Box b;
  b.lo = Eigen::VectorXd::Constant(dim, -0.45);
  b.hi = Eigen::VectorXd::Constant(dim, 0.45);
  b.lo[0] = 0.6;
  b.hi[0] = 2.5;

  return ChartManifold(n, b, std::move(g), detail::standard_j(n), "hopf",
                       {static_cast<double>(n)});
}

/// Position-dependent almost complex structure J = A J0 A^{-1} with the shear
/// A = I + eps * x2 * E_{1,3}, and metric forced compatible by averaging:
/// g = (g0 + J^T g0 J) / 2 with g0 = I. Generically non-integrable; eps = 0
/// degenerates to the flat fixture.
inline ChartManifold make_twisted_j(int n, double eps) {
  const int dim = 2 * n;
  using detail::ExprMat;

  const Expr shear = Expr::constant(eps, dim) * Expr::variable(1, dim);  // eps * x2
  ExprMat E13(dim * dim, Expr::constant(0.0, dim));
  E13[0 * dim + 2] = Expr::constant(1.0, dim);

  ExprMat A = detail::expr_add(detail::expr_identity(dim), detail::expr_scale(shear, E13, dim), dim);
  ExprMat Ainv = detail::expr_add(detail::expr_identity(dim),
                                  detail::expr_scale(-shear, E13, dim), dim);

  ExprMat J0 = detail::standard_j(n);
  ExprMat J = detail::expr_mul(detail::expr_mul(A, J0, dim), Ainv, dim);

  // g = (I + J^T J) / 2
  ExprMat JtJ = detail::expr_mul(detail::expr_transpose(J, dim), J, dim);
  ExprMat G = detail::expr_add(detail::expr_identity(dim), JtJ, dim);
  std::vector<Expr> g(dim * (dim + 1) / 2, Expr::constant(0.0, dim));
  const Expr half = Expr::constant(0.5, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) g[ChartManifold::lower_index(i, j)] = half * G[i * dim + j];

  return ChartManifold(n, detail::cube(dim, -1.0, 1.0), std::move(g), std::move(J), "twisted_j",
                       {static_cast<double>(n), eps});
}

/// Catalog dispatch. Names and parameter lists are part of the CLI contract:
///   flat(n), fubini_study(n, c), hopf(n), twisted_j(n, eps)
inline ChartManifold catalog_manifold(const std::string& name, const std::vector<double>& params) {
  const auto want = [&](std::size_t k) {
    if (params.size() != k)
      throw ManifoldError("catalog entry '" + name + "' expects " + std::to_string(k) +
                          " parameter(s)");
  };
  if (name == "flat") {
    want(1);
    return make_flat(detail::require_integer_n(params[0]));
  }
  if (name == "fubini_study") {
    want(2);
    return make_fubini_study(detail::require_integer_n(params[0]), params[1]);
  }
  if (name == "hopf") {
    want(1);
    return make_hopf(detail::require_integer_n(params[0]));
  }
  if (name == "twisted_j") {
    want(2);
    return make_twisted_j(detail::require_integer_n(params[0]), params[1]);
  }
  throw ManifoldError("unknown catalog manifold '" + name + "'");
}

// ---- spec file format --------------------------------------------------------
// Versioned plain-text format, documented in docs/manifold-spec.md:
//
//   antiholo-spec v1
//   NAME <free text>
//   DIM <2n>
//   DOMAIN            # 2n lines: <lo> <hi>
//   METRIC            # lines: <i> <j> <expression>, 1-based, lower triangle i >= j
//   J                 # lines: <i> <j> <expression>, 1-based, full matrix
//
// '#' starts a comment; omitted METRIC/J entries default to 0. The parsed
// manifold is validated on the deterministic probe grid before it is returned.

inline ChartManifold load_manifold(const std::string& spec_text) {
  std::istringstream in(spec_text);
  std::string line;

  const auto strip = [](std::string s) {
    if (const auto h = s.find('#'); h != std::string::npos) s.erase(h);
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  };

  if (!std::getline(in, line) || strip(line) != "antiholo-spec v1")
    throw ManifoldError("manifold spec must start with header line 'antiholo-spec v1'");

  int dim = 0;
  std::string name = "unnamed";
  std::vector<std::pair<double, double>> domain_rows;
  std::map<std::pair<int, int>, std::string> metric_rows, j_rows;

  enum class Section { None, Domain, Metric, J } section = Section::None;
  int line_no = 1;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty()) continue;

    const auto fail = [&](const std::string& msg) {
      throw ManifoldError("spec line " + std::to_string(line_no) + ": " + msg);
    };

    if (s.rfind("NAME", 0) == 0 && (s.size() == 4 || std::isspace((unsigned char)s[4]))) {
      name = strip(s.substr(4));
      section = Section::None;
      continue;
    }
    if (s.rfind("DIM", 0) == 0 && (s.size() == 3 || std::isspace((unsigned char)s[3]))) {
      dim = std::stoi(s.substr(3));
      if (dim < 4 || dim % 2 != 0) fail("DIM must be an even integer >= 4");
      section = Section::None;
      continue;
    }
    if (s == "DOMAIN") { section = Section::Domain; continue; }
    if (s == "METRIC") { section = Section::Metric; continue; }
    if (s == "J") { section = Section::J; continue; }

    switch (section) {
      case Section::Domain: {
        std::istringstream row(s);
        double lo, hi;
        if (!(row >> lo >> hi) || lo >= hi) fail("DOMAIN row must be '<lo> <hi>' with lo < hi");
        domain_rows.emplace_back(lo, hi);
        break;
      }
      case Section::Metric:
      case Section::J: {
        if (dim == 0) fail("DIM must appear before METRIC/J entries");
        std::istringstream row(s);
        int i, j;
        if (!(row >> i >> j)) fail("entry row must be '<i> <j> <expression>'");
        std::string expr_text;
        std::getline(row, expr_text);
        expr_text = strip(expr_text);
        if (expr_text.empty()) fail("entry row must be '<i> <j> <expression>'");
        if (i < 1 || i > dim || j < 1 || j > dim) fail("entry indices out of range");
        if (section == Section::Metric) {
          if (i < j) fail("metric entries must address the lower triangle (i >= j)");
          metric_rows[{i - 1, j - 1}] = expr_text;
        } else {
          j_rows[{i - 1, j - 1}] = expr_text;
        }
        break;
      }
      case Section::None:
        fail("unexpected content outside a section: '" + s + "'");
    }
  }

  if (dim == 0) throw ManifoldError("missing DIM section");
  if (static_cast<int>(domain_rows.size()) != dim)
    throw ManifoldError("DOMAIN must provide exactly " + std::to_string(dim) + " rows");
  if (metric_rows.empty()) throw ManifoldError("missing METRIC section");
  if (j_rows.empty()) throw ManifoldError("missing J section");

  Box box;
  box.lo.resize(dim);
  box.hi.resize(dim);
  for (int i = 0; i < dim; ++i) {
    box.lo[i] = domain_rows[i].first;
    box.hi[i] = domain_rows[i].second;
  }

  std::vector<Expr> g(dim * (dim + 1) / 2, Expr::constant(0.0, dim));
  for (const auto& [ij, text] : metric_rows)
    g[ChartManifold::lower_index(ij.first, ij.second)] = Expr::parse(text, dim);

  std::vector<Expr> J(dim * dim, Expr::constant(0.0, dim));
  for (const auto& [ij, text] : j_rows) J[ij.first * dim + ij.second] = Expr::parse(text, dim);

  ChartManifold M(dim / 2, std::move(box), std::move(g), std::move(J), name);

  for (const auto& p : probe_grid(M)) {
    const ValidationReport rep = validate_structure_at(M, p);
    if (!rep.pass) {
      std::ostringstream msg;
      msg << "structure validation failed at probe point (";
      for (int i = 0; i < dim; ++i) msg << (i ? ", " : "") << p[i];
      msg << "): spd_residual=" << rep.spd_residual << " j_squared=" << rep.j_squared_residual
          << " compat=" << rep.compat_residual;
      throw ManifoldError(msg.str());
    }
  }
  return M;
}

}  // namespace antiholo
