#include <catch2/catch_amalgamated.hpp>

#include "antiholo/curvid.hpp"
#include "antiholo/frames.hpp"
#include "antiholo/tensorcalc.hpp"
#include "antiholo/verify.hpp"
#include "oracles.hpp"

using namespace antiholo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("flat manifold frames are the standard basis") {
  const ChartManifold M = catalog_manifold("flat", {3});
  const VectorXd p = VectorXd::Constant(6, 0.2);
  const AdaptedFrame f = adapted_frame_at(M, p);
  CHECK((f.E - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fubini_study at the origin: metric is the identity, frame is standard") {
  const ChartManifold M = catalog_manifold("fubini_study", {3, 4});
  const AdaptedFrame f = adapted_frame_at(M, VectorXd::Zero(6));
  CHECK((f.E - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hopf frame at z=(2,0,0): columns scale with |z|") {
  const ChartManifold M = catalog_manifold("hopf", {3});
  VectorXd p = VectorXd::Zero(6);
  p[0] = 2.0;
  const MatrixXd g = M.metric_at(p);
  const AdaptedFrame f = adapted_frame_at(M, p);
  // g = I/4, so unit vectors have coordinate length |z| = 2
  for (int a = 0; a < 6; ++a) CHECK(f.E.col(a).norm() == Catch::Approx(2.0).margin(1e-12));
  // orthonormality residual
  const MatrixXd gram = f.E.transpose() * g * f.E;
  CHECK((gram - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("frames are g-orthonormal and exactly J-paired on every fixture") {
  const std::pair<const char*, std::vector<double>> entries[] = {
      {"fubini_study", {3, 4}}, {"hopf", {3}}, {"twisted_j", {3, 0.1}}};
  for (const auto& [name, params] : entries) {
    CAPTURE(name);
    const ChartManifold M = catalog_manifold(name, params);
    const VectorXd p = probe_grid(M)[37];
    const MatrixXd g = M.metric_at(p);
    const MatrixXd J = M.j_at(p);
    const AdaptedFrame f = adapted_frame(g, J);
    CHECK((f.E.transpose() * g * f.E - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    for (int a = 0; a < 3; ++a)
      CHECK((f.E.col(3 + a) - J * f.E.col(a)).cwiseAbs().maxCoeff() == 0.0);  // exact by construction
  }
}

TEST_CASE("frame construction is deterministic (bitwise)") {
  const ChartManifold M = catalog_manifold("hopf", {3});
  VectorXd p(6);
  p << 1.3, 0.2, -0.1, 0.3, 0.1, -0.2;
  const AdaptedFrame a = adapted_frame_at(M, p);
  const AdaptedFrame b = adapted_frame_at(M, p);
  CHECK((a.E - b.E).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("special complex basis satisfies the metric component conditions") {
  const std::pair<const char*, std::vector<double>> entries[] = {
      {"fubini_study", {3, 4}}, {"hopf", {3}}, {"twisted_j", {3, 0.1}}};
  for (const auto& [name, params] : entries) {
    CAPTURE(name);
    const ChartManifold M = catalog_manifold(name, params);
    const VectorXd p = probe_grid(M)[53];
    const MatrixXd g = M.metric_at(p);
    const ComplexBasis basis = complex_basis(adapted_frame(g, M.j_at(p)));
    const ComplexComponents plain = complex_components(g, basis, 0b00u);   // g(Z_a, Z_b)
    const ComplexComponents mixed = complex_components(g, basis, 0b10u);   // g(Z_a, Zbar_b)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        CHECK(std::abs(plain(a, b)) < 1e-12);
        CHECK(std::abs(mixed(a, b) - (a == b ? 0.5 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("conjugating every index conjugates the component") {
  const ChartManifold M = catalog_manifold("hopf", {3});
  const VectorXd p = probe_grid(M)[10];
  const CurvaturePackage pkg = compute_package(M, p, false);
  const FrameView view = frame_view(pkg);
  const ComplexBasis basis = complex_basis(view.frame);

  const ComplexComponents c = complex_components(view.F3f, basis, 0b001u);
  const ComplexComponents cc = complex_components(view.F3f, basis, 0b110u);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int g = 0; g < 3; ++g)
        CHECK(std::abs(c(a, b, g) - std::conj(cc(a, b, g))) < 1e-13);
}

TEST_CASE("a real tensor is recovered from its full set of complex components") {
  const ChartManifold M = catalog_manifold("hopf", {3});
  const VectorXd p = probe_grid(M)[29];
  const MatrixXd g = M.metric_at(p);
  const ComplexBasis basis = complex_basis(adapted_frame(g, M.j_at(p)));
  const int n = 3;

  // random real vectors, expanded in the Z basis
  CounterRng rng(31, 0);
  const FrameView view = frame_view(compute_package(M, p, false));
  for (int trial = 0; trial < 4; ++trial) {
    VectorXd X = rng.normal_vector(6), Y = rng.normal_vector(6), Z = rng.normal_vector(6);
    const Eigen::VectorXcd cx = holomorphic_coefficients(X, g, basis);
    const Eigen::VectorXcd cy = holomorphic_coefficients(Y, g, basis);
    const Eigen::VectorXcd cz = holomorphic_coefficients(Z, g, basis);

    // direct evaluation of F(X,Y,Z) in chart coordinates
    const CurvaturePackage pkg = compute_package(M, p, false);
    double direct = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) direct += pkg.F3(i, j, k) * X[i] * Y[j] * Z[k];

    // reconstruction: sum over all 8 bar patterns of the complex components
    // times the matching expansion coefficients (barred slot -> conjugate)
    std::complex<double> acc = 0;
    for (unsigned mask = 0; mask < 8; ++mask) {
      const ComplexComponents comp = complex_components(pkg.F3, basis, mask);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            const std::complex<double> wa = (mask & 1u) ? std::conj(cx[a]) : cx[a];
            const std::complex<double> wb = (mask & 2u) ? std::conj(cy[b]) : cy[b];
            const std::complex<double> wc = (mask & 4u) ? std::conj(cz[c]) : cz[c];
            acc += comp(a, b, c) * wa * wb * wc;
          }
    }
    CHECK(std::abs(acc.imag()) < 1e-10);
    CHECK(std::abs(acc.real() - direct) < 1e-10 * (1.0 + std::abs(direct)));
    (void)view;
  }
}

TEST_CASE("essential F components on Hermitian fixtures, with skewness") {
  for (const char* name : {"hopf", "fubini_study"}) {
    const std::vector<double> params =
        std::string(name) == "fubini_study" ? std::vector<double>{3, 4} : std::vector<double>{3};
    CAPTURE(name);
    const ChartManifold M = catalog_manifold(name, params);
    const VectorXd p = probe_grid(M)[61];
    const FrameView view = frame_view(compute_package(M, p, false));
    const ComplexBasis basis = complex_basis(view.frame);
    const FEssentialReport rep = f_essential_components(view.F3f, basis);
    const double scale = 1.0 + view.F3f.max_abs();
    CHECK(rep.nonessential_max / scale < 1e-8);
    CHECK(rep.essential_skew_defect / scale < 1e-8);
    CHECK(rep.nabla_j_max / scale < 1e-8);
    if (std::string(name) == "hopf") CHECK(rep.essential_max > 0.1);
  }
}

TEST_CASE("Q complex components carry the twisted-symmetry pattern on Hermitian fixtures") {
  for (const char* name : {"hopf", "fubini_study"}) {
    const std::vector<double> params =
        std::string(name) == "fubini_study" ? std::vector<double>{3, 4} : std::vector<double>{3};
    CAPTURE(name);
    const ChartManifold M = catalog_manifold(name, params);
    const VectorXd p = probe_grid(M)[61];
    const FrameView view = frame_view(compute_package(M, p, false));
    const ComplexBasis basis = complex_basis(view.frame);
    const QTensor q = q_from_star_ricci(view.traces.rho_star, view.traces.tau_star, 0.7, 3,
                                        MatrixXd::Identity(6, 6));
    CHECK(q_complex_symmetry_residual(q.Q, basis) < 1e-8);
  }
}

TEST_CASE("frame pivot order changes the frame but not the invariants") {
  const ChartManifold M = catalog_manifold("hopf", {3});
  const VectorXd p = probe_grid(M)[47];
  const CurvaturePackage pkg = compute_package(M, p, true);

  const AdaptedFrame f1 = adapted_frame(pkg.g, pkg.J);
  const AdaptedFrame f2 = adapted_frame(pkg.g, pkg.J, {4, 2, 0, 5, 3, 1});
  CHECK((f1.E - f2.E).cwiseAbs().maxCoeff() > 1e-3);  // genuinely different frames

  const Tensor4 r1 = change_basis(pkg.R4, f1.E);
  const Tensor4 r2 = change_basis(pkg.R4, f2.E);
  const Tensor3 fa = change_basis(pkg.F3, f1.E);
  const Tensor3 fb = change_basis(pkg.F3, f2.E);
  CHECK(std::abs(r1.frobenius_norm() - r2.frobenius_norm()) < 1e-9);
  CHECK(std::abs(fa.frobenius_norm() - fb.frobenius_norm()) < 1e-9);

  const Eigen::MatrixXd j1 = f1.E.transpose() * pkg.g * pkg.J * f1.E;
  const Eigen::MatrixXd j2 = f2.E.transpose() * pkg.g * pkg.J * f2.E;
  const TraceSet t1 = traces_in_frame(r1, j1);
  const TraceSet t2 = traces_in_frame(r2, j2);
  CHECK(std::abs(t1.tau - t2.tau) < 1e-9 * (1 + std::abs(t1.tau)));
  CHECK(std::abs(t1.tau_star - t2.tau_star) < 1e-9 * (1 + std::abs(t1.tau_star)));
}
