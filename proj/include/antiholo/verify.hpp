#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "antiholo/curvid.hpp"
#include "antiholo/frames.hpp"
#include "antiholo/manifold.hpp"
#include "antiholo/planes.hpp"
#include "antiholo/tensorcalc.hpp"
#include "antiholo/tolerances.hpp"

namespace antiholo {

enum class PointClass { Kaehler, HermitianNonKaehler, NonIntegrable };

/// Outcome of the Hermitian constant-curvature implication check (pointwise
/// constant antiholomorphic curvature on a Hermitian non-Kaehler point forces
/// R = nu pi1 and tau = (2n-1) tau*). VIOLATION cannot occur on a valid
/// geometric input; it flags either broken data or a bug.
enum class ImplicationStatus { NotApplicable, HypothesisFails, Verified, Violation };

inline const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Kaehler: return "KAEHLER";
    case PointClass::HermitianNonKaehler: return "HERMITIAN_NON_KAEHLER";
    case PointClass::NonIntegrable: return "NON_INTEGRABLE";
  }
  return "?";
}

inline const char* to_string(ImplicationStatus s) {
  switch (s) {
    case ImplicationStatus::NotApplicable: return "NOT_APPLICABLE";
    case ImplicationStatus::HypothesisFails: return "HYPOTHESIS_FAILS";
    case ImplicationStatus::Verified: return "VERIFIED";
    case ImplicationStatus::Violation: return "VIOLATION";
  }
  return "?";
}

struct PropertyRow {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  enum class Verdict { Pass, Fail, Skipped } verdict = Verdict::Skipped;
  /// Evidence rows document the point's class (e.g. "F = 0" on a non-Kaehler
  /// point); their failures are expected and do not count against the suite.
  bool class_evidence = false;
};

inline const char* to_string(PropertyRow::Verdict v) {
  switch (v) {
    case PropertyRow::Verdict::Pass: return "PASS";
    case PropertyRow::Verdict::Fail: return "FAIL";
    case PropertyRow::Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

struct PointDiagnostics {
  Eigen::VectorXd point;
  PointClass cls = PointClass::Kaehler;
  double f_norm = 0.0;
  double n_norm = 0.0;
  double class_threshold = 0.0;  // epsilon used for both norms
  ConstancyStats stats;
  double residual_char = 0.0;   // characterization identity residual at nu_hat
  double residual_qform = 0.0;  // equivalent Q-form residual
  double tau = 0.0, tau_star = 0.0;
  bool fit_valid = false;
  PiFit fit;
  // |tau - (2n-1) tau*|, |nu_hat - tau*/(2n)|, |nu_hat - tau/(2n(2n-1))|
  std::array<double, 3> trace_checks{0, 0, 0};
  std::vector<PropertyRow> properties;
  bool suite_pass = true;  // all non-evidence, non-skipped rows pass
  ImplicationStatus implication = ImplicationStatus::NotApplicable;
};

/// Classification thresholds scale with the size of the first derivatives of
/// g and J at the point.
inline double class_epsilon(double deriv_scale) { return tol::kOrder3 * (1.0 + deriv_scale); }

inline PointClass classify(double f_norm, double n_norm, double hermitian_residual,
                           double eps) {
  if (f_norm < eps) return PointClass::Kaehler;
  if (n_norm < eps && hermitian_residual < eps) return PointClass::HermitianNonKaehler;
  return PointClass::NonIntegrable;
}

// ---- residuals of the named identities --------------------------------------

/// max |F(X,Z,Y) + F(X,Y,Z)|, relative: F is skew in its last two slots.
inline double f_last_two_skew_residual(const Tensor3& F) {
  const int d = F.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) worst = std::max(worst, std::abs(F(i, j, k) + F(i, k, j)));
  return relative(worst, F.max_abs());
}

/// max |F(X,JY,JZ) + F(X,Y,Z)|, relative.
inline double f_j_pair_flip_residual(const Tensor3& F, const Eigen::MatrixXd& J) {
  const int d = F.dim();
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = F(i, b, c);
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) s += F(i, j, k) * J(j, b) * J(k, c);
        worst = std::max(worst, std::abs(s));
      }
  return relative(worst, F.max_abs());
}

/// max |F(JX,Y,Z) + F(X,JY,Z)|, relative: the Hermitian (integrability)
/// condition on F.
inline double hermitian_condition_residual(const Tensor3& F, const Eigen::MatrixXd& J) {
  const int d = F.dim();
  double worst = 0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = 0;
        for (int i = 0; i < d; ++i) s += F(i, b, c) * J(i, a) + F(a, i, c) * J(i, b);
        worst = std::max(worst, std::abs(s));
      }
  return relative(worst, F.max_abs());
}

/// max |rho*(JX,JY) - rho*(Y,X)|, relative: the twisted symmetry of the
/// *-Ricci tensor (a consequence of the curvature symmetries alone).
inline double rho_star_twisted_symmetry_residual(const Eigen::MatrixXd& rho_star,
                                                 const Eigen::MatrixXd& J) {
  const Eigen::MatrixXd defect = J.transpose() * rho_star * J - rho_star.transpose();
  return defect.cwiseAbs().maxCoeff() / (1.0 + rho_star.cwiseAbs().maxCoeff());
}

/// Complex-component checks on a (0,2) tensor with the twisted symmetry:
/// Q_{a bbar} = Q_{bbar a} and Q_{ab} = -Q_{ba}. Returns the worse residual.
inline double q_complex_symmetry_residual(const Eigen::MatrixXd& Q, const ComplexBasis& basis) {
  const ComplexComponents mixed = complex_components(Q, basis, 0b10u);    // Q(Z_a, Zbar_b)
  const ComplexComponents mixed_r = complex_components(Q, basis, 0b01u);  // Q(Zbar_a, Z_b)
  const ComplexComponents plain = complex_components(Q, basis, 0b00u);    // Q(Z_a, Z_b)
  double worst = 0;
  for (int a = 0; a < basis.n; ++a)
    for (int b = 0; b < basis.n; ++b) {
      worst = std::max(worst, std::abs(mixed(a, b) - mixed_r(b, a)));
      worst = std::max(worst, std::abs(plain(a, b) + plain(b, a)));
    }
  return worst / (1.0 + Q.cwiseAbs().maxCoeff());
}

/// Components of F that must vanish on a Hermitian point. Only the pattern
/// F(Zbar, Z, Z) and its conjugate survive; everything else (including all
/// nabla J components of holomorphic type) must be zero. Returns
/// {max nonessential component, essential skewness defect}.
struct FEssentialReport {
  double nonessential_max = 0.0;      // raw max |component| over forbidden patterns
  double essential_skew_defect = 0.0; // F(Zbar_a, Z_b, Z_g) + F(Zbar_a, Z_g, Z_b), raw
  double essential_max = 0.0;
  double nabla_j_max = 0.0;           // the three holomorphic nabla-J patterns, raw
};

inline FEssentialReport f_essential_components(const Tensor3& F, const ComplexBasis& basis) {
  FEssentialReport rep;
  for (unsigned mask = 0; mask < 8; ++mask) {
    const ComplexComponents c = complex_components(F, basis, mask);
    if (mask == 0b001u) {  // F(Zbar, Z, Z): the essential pattern
      rep.essential_max = c.max_abs();
      for (int a = 0; a < basis.n; ++a)
        for (int b = 0; b < basis.n; ++b)
          for (int g = 0; g < basis.n; ++g)
            rep.essential_skew_defect =
                std::max(rep.essential_skew_defect, std::abs(c(a, b, g) + c(a, g, b)));
      continue;
    }
    if (mask == 0b110u) continue;  // conjugate of the essential pattern
    rep.nonessential_max = std::max(rep.nonessential_max, c.max_abs());
    // nabla_a J_b^g ~ F(Z,Z,Zbar); nabla_abar J_b^g ~ F(Zbar,Z,Zbar); nabla_a J_b^gbar ~ F(Z,Z,Z)
    if (mask == 0b100u || mask == 0b101u || mask == 0b000u)
      rep.nabla_j_max = std::max(rep.nabla_j_max, 2.0 * c.max_abs());
  }
  return rep;
}

// ---- implication check -------------------------------------------------------

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Core of the implication verdict, all inputs in the adapted frame.
inline ImplicationStatus implication_core(PointClass cls, int n, const ConstancyStats& st,
                                          double residual_char, const Tensor4& R4f,
                                          const TraceSet& tr) {
  if (n < 3)
    throw DimensionError(
        "dimension four excluded: the implication check needs complex dimension n >= 3");
  if (cls != PointClass::HermitianNonKaehler) return ImplicationStatus::NotApplicable;

  const bool constant = st.max_dev < tol::kVerdict * (1.0 + std::abs(st.nu_hat)) &&
                        residual_char < tol::kVerdict;
  if (!constant) return ImplicationStatus::HypothesisFails;

  const int dim = 2 * n;
  const Tensor4 model = st.nu_hat * pi1(Eigen::MatrixXd::Identity(dim, dim));
  const double flatness = (R4f - model).frobenius_norm() / (1.0 + R4f.frobenius_norm());
  const double trace_gap = std::abs(tr.tau - (2.0 * n - 1.0) * tr.tau_star);
  const bool conclusion =
      flatness < tol::kVerdict && trace_gap < tol::kVerdict * (1.0 + std::abs(tr.tau));
  return conclusion ? ImplicationStatus::Verified : ImplicationStatus::Violation;
}

// ---- per-point diagnostics ---------------------------------------------------

struct DiagnosticsOptions {
  int samples = 128;
  int restarts = 16;
  std::uint64_t seed = 0;
};

namespace detail {

inline void fill_common(PointDiagnostics& d, const Tensor4& R4f, const Eigen::MatrixXd& Jf,
                        const TraceSet& tr, int n, const DiagnosticsOptions& opt) {
  const int dim = 2 * n;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);

  d.stats = constancy_stats_tensor(R4f, Jf, opt.samples, opt.seed, opt.restarts);
  const IdentityResidual res = residual_constant_antiholo(R4f, tr.rho_star, tr.tau_star,
                                                          d.stats.nu_hat, n, id, Jf);
  d.residual_char = res.characterization;
  d.residual_qform = res.q_form;
  d.tau = tr.tau;
  d.tau_star = tr.tau_star;
  d.trace_checks[0] = std::abs(tr.tau - (2.0 * n - 1.0) * tr.tau_star);
  d.trace_checks[1] = std::abs(d.stats.nu_hat - tr.tau_star / (2.0 * n));
  d.trace_checks[2] = std::abs(d.stats.nu_hat - tr.tau / (2.0 * n * (2.0 * n - 1.0)));
  if (n >= 3) {
    d.fit = fit_pi_basis(R4f, id, Jf);
    d.fit_valid = true;
  }
}

}  // namespace detail

/// Full diagnostics for a chart point of a manifold.
inline PointDiagnostics point_diagnostics(const ChartManifold& M, const Eigen::VectorXd& p,
                                          const DiagnosticsOptions& opt = {}) {
  PointDiagnostics d;
  d.point = p;

  const ValidationReport vrep = validate_structure_at(M, p);
  const CurvaturePackage pkg = compute_package(M, p, true);
  const FrameView view = frame_view(pkg);
  const ComplexBasis basis = complex_basis(view.frame);
  const int n = pkg.n;

  d.f_norm = view.f_norm;
  d.n_norm = view.n_norm;
  d.class_threshold = class_epsilon(pkg.deriv_scale);
  const double herm_res = hermitian_condition_residual(view.F3f, view.Jf);
  d.cls = classify(d.f_norm, d.n_norm, herm_res, d.class_threshold);

  detail::fill_common(d, view.R4f, view.Jf, view.traces, n, opt);

  // property suite
  const auto add = [&](std::string name, double residual, double tolerance, bool applicable,
                       bool evidence = false) {
    PropertyRow row;
    row.name = std::move(name);
    row.residual = residual;
    row.tolerance = tolerance;
    row.class_evidence = evidence;
    row.verdict = !applicable ? PropertyRow::Verdict::Skipped
                  : residual < tolerance ? PropertyRow::Verdict::Pass
                                         : PropertyRow::Verdict::Fail;
    d.properties.push_back(row);
  };

  add("structure_spd", vrep.spd_residual, tol::kStructure, true);
  add("structure_j_squared", vrep.j_squared_residual, tol::kStructure, true);
  add("structure_compatibility", vrep.compat_residual, tol::kStructure, true);

  add("riemann_skew_first_pair", skew12_residual(view.R4f), tol::kOrder2, true);
  add("riemann_skew_last_pair", skew34_residual(view.R4f), tol::kOrder2, true);
  add("riemann_pair_exchange", pair_exchange_residual(view.R4f), tol::kOrder2, true);
  add("first_bianchi", first_bianchi_residual(view.R4f), tol::kOrder2, true);
  add("second_bianchi", second_bianchi_residual(view.nablaRf), tol::kOrder3, true);

  add("rho_star_twisted_symmetry",
      rho_star_twisted_symmetry_residual(view.traces.rho_star, view.Jf), tol::kOrder2, true);
  add("f_last_two_skew", f_last_two_skew_residual(view.F3f), tol::kOrder2, true);
  add("f_j_pair_flip", f_j_pair_flip_residual(view.F3f, view.Jf), tol::kOrder2, true);

  const bool hermitian = d.cls != PointClass::NonIntegrable;
  // Defines "Hermitian": an identity on integrable points, class evidence otherwise.
  add("hermitian_f_condition", herm_res, tol::kOrder2, true, !hermitian);

  const FEssentialReport fe = f_essential_components(view.F3f, basis);
  const double fscale = 1.0 + view.F3f.max_abs();
  add("f_essential_components",
      std::max(fe.nonessential_max, fe.essential_skew_defect) / fscale, tol::kOrder2, hermitian);
  add("nabla_j_holomorphic_vanishing", fe.nabla_j_max / fscale, tol::kOrder2, hermitian);

  const QTensor q = q_from_star_ricci(view.traces.rho_star, view.traces.tau_star,
                                      d.stats.nu_hat, n, Eigen::MatrixXd::Identity(2 * n, 2 * n));
  add("q_complex_symmetry", q_complex_symmetry_residual(q.Q, basis), tol::kOrder2, hermitian);

  const bool kaehler = d.cls == PointClass::Kaehler;
  add("kaehler_f_zero", d.f_norm, d.class_threshold, true, !kaehler);
  add("rho_star_equals_rho",
      (view.traces.rho_star - view.traces.rho).cwiseAbs().maxCoeff() /
          (1.0 + view.traces.rho.cwiseAbs().maxCoeff()),
      tol::kOrder2, true, !kaehler);

  d.suite_pass = true;
  for (const auto& row : d.properties)
    if (!row.class_evidence && row.verdict == PropertyRow::Verdict::Fail) d.suite_pass = false;

  d.implication = implication_core(d.cls, n, d.stats, d.residual_char, view.R4f, view.traces);
  return d;
}

/// Diagnostics for a synthetic algebraic curvature tensor given directly in an
/// orthonormal frame, with the point class supplied by the caller. This is the
/// algebra-level pipeline used to exercise both directions of the
/// characterization without a smooth fixture.
inline PointDiagnostics algebraic_point_diagnostics(const Tensor4& R4f, const Eigen::MatrixXd& Jf,
                                                    int n, PointClass forced_class,
                                                    const DiagnosticsOptions& opt = {}) {
  PointDiagnostics d;
  d.point = Eigen::VectorXd::Zero(2 * n);
  d.cls = forced_class;
  const TraceSet tr = traces_in_frame(R4f, Jf);
  detail::fill_common(d, R4f, Jf, tr, n, opt);
  d.implication = implication_core(d.cls, n, d.stats, d.residual_char, R4f, tr);
  return d;
}

// ---- whole-manifold scan -----------------------------------------------------

struct ScanOptions {
  enum class Sampler { Grid, Random };
  Sampler sampler = Sampler::Random;
  int count = 5;  // grid: points per axis; random: total points
  std::uint64_t seed = 0;
  DiagnosticsOptions diag;
  int threads = 1;  // 0 = hardware concurrency
};

struct ScanSummary {
  double nu_hat_min = 0.0, nu_hat_max = 0.0, nu_hat_spread = 0.0;
  int n_kaehler = 0, n_hermitian_non_kaehler = 0, n_non_integrable = 0;
  bool any_violation = false;
  bool all_suites_pass = true;
};

struct ManifoldReport {
  std::string manifold;
  std::vector<double> params;
  std::string sampler_desc;
  std::uint64_t seed = 0;
  std::vector<PointDiagnostics> points;
  ScanSummary summary;
};

inline std::vector<Eigen::VectorXd> sample_points(const ChartManifold& M, const ScanOptions& opt,
                                                  std::string* desc = nullptr) {
  std::vector<Eigen::VectorXd> pts;
  const int d = M.dim();
  if (opt.sampler == ScanOptions::Sampler::Grid) {
    const int per_axis = std::max(1, opt.count);
    long total = 1;
    for (int i = 0; i < d; ++i) {
      total *= per_axis;
      if (total > 1000000) break;
    }
    const int cap = 200;
    const long stride = (total + cap - 1) / cap;
    for (long idx = 0; idx < total && static_cast<int>(pts.size()) < cap; idx += stride) {
      long rem = idx;
      Eigen::VectorXd f(d);
      for (int axis = 0; axis < d; ++axis) {
        f[axis] = (rem % per_axis + 1.0) / (per_axis + 1.0);
        rem /= per_axis;
      }
      pts.push_back(M.domain().at_fractions(f));
    }
    if (desc)
      *desc = "grid:" + std::to_string(per_axis) + " (" + std::to_string(pts.size()) + " of " +
              std::to_string(total) + " lattice points)";
  } else {
    CounterRng rng(opt.seed, 0xA11CEULL);
    for (int k = 0; k < opt.count; ++k) {
      Eigen::VectorXd p(d);
      for (int i = 0; i < d; ++i) p[i] = rng.uniform(M.domain().lo[i], M.domain().hi[i]);
      pts.push_back(p);
    }
    if (desc) *desc = "random:" + std::to_string(opt.count);
  }
  if (pts.empty()) throw ManifoldError("empty sample set");
  return pts;
}

inline ManifoldReport scan_manifold(const ChartManifold& M, const ScanOptions& opt) {
  if (M.n() < 3)
    throw DimensionError(
        "dimension four excluded: analyze requires complex dimension n >= 3 (real dimension >= 6)");

  ManifoldReport rep;
  rep.manifold = M.name();
  rep.params = M.params();
  rep.seed = opt.seed;
  const std::vector<Eigen::VectorXd> pts = sample_points(M, opt, &rep.sampler_desc);

  rep.points.resize(pts.size());
  int nthreads = opt.threads == 0
                     ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
                     : opt.threads;
  nthreads = std::min<int>(nthreads, static_cast<int>(pts.size()));

  // per-point seeds derive from (scan seed, point index); results are merged
  // by point index, so the outcome does not depend on the thread layout
  const auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      DiagnosticsOptions dopt = opt.diag;
      dopt.seed = opt.seed + 1000003ULL * static_cast<std::uint64_t>(i);
      rep.points[i] = point_diagnostics(M, pts[i], dopt);
    }
  };

  if (nthreads <= 1) {
    work(0, static_cast<int>(pts.size()));
  } else {
    std::vector<std::thread> pool;
    const int chunk = (static_cast<int>(pts.size()) + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const int b = t * chunk;
      const int e = std::min<int>(b + chunk, static_cast<int>(pts.size()));
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  ScanSummary& s = rep.summary;
  bool first = true;
  for (const auto& d : rep.points) {
    const double nu = d.stats.nu_hat;
    if (first || nu < s.nu_hat_min) s.nu_hat_min = nu;
    if (first || nu > s.nu_hat_max) s.nu_hat_max = nu;
    first = false;
    switch (d.cls) {
      case PointClass::Kaehler: ++s.n_kaehler; break;
      case PointClass::HermitianNonKaehler: ++s.n_hermitian_non_kaehler; break;
      case PointClass::NonIntegrable: ++s.n_non_integrable; break;
    }
    if (d.implication == ImplicationStatus::Violation) s.any_violation = true;
    if (!d.suite_pass) s.all_suites_pass = false;
  }
  s.nu_hat_spread = s.nu_hat_max - s.nu_hat_min;
  return rep;
}

}  // namespace antiholo
