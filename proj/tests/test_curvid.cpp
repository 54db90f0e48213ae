#include <catch2/catch_amalgamated.hpp>

#include "antiholo/curvid.hpp"
#include "antiholo/manifold.hpp"
#include "antiholo/planes.hpp"
#include "antiholo/tensorcalc.hpp"
#include "oracles.hpp"

using namespace antiholo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd standard_j6() {
  return catalog_manifold("flat", {3}).j_at(VectorXd::Zero(6));
}

}  // namespace

TEST_CASE("pi1 and pi2 match their naive display evaluations") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  CHECK((pi1(id) - oracles::naive_pi1(id)).max_abs() < 1e-14);
  CHECK((pi2(id, J0) - oracles::naive_pi2(id, J0)).max_abs() < 1e-14);

  // and with a non-trivial g, J from a curved fixture
  const ChartManifold hopf = catalog_manifold("hopf", {3});
  const VectorXd p = probe_grid(hopf)[5];
  const MatrixXd g = hopf.metric_at(p);
  const MatrixXd J = hopf.j_at(p);
  CHECK((pi1(g) - oracles::naive_pi1(g)).max_abs() < 1e-13);
  CHECK((pi2(g, J) - oracles::naive_pi2(g, J)).max_abs() < 1e-13);
}

TEST_CASE("pi1/pi2 plane values: antiholomorphic and holomorphic pairs") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  VectorXd X = id.col(0), Y = id.col(1);
  const VectorXd JX = J0 * X;

  // antiholomorphic orthonormal pair (X, Y): all J-pairings vanish
  CHECK(oracles::pi1_value(id, X, Y, Y, X) == 1.0);
  CHECK(oracles::pi2_value(id, J0, X, Y, Y, X) == 0.0);

  // holomorphic pair (X, JX): brute-force expansion of the display gives 3
  CHECK(oracles::pi1_value(id, X, JX, JX, X) == 1.0);
  CHECK(oracles::pi2_value(id, J0, X, JX, JX, X) == 3.0);

  const Tensor4 p1 = pi1(id);
  const Tensor4 p2 = pi2(id, J0);
  TangentPlane anti{X, Y, 0};
  TangentPlane hol{X, JX, 0};
  CHECK(sectional_curvature(p1, anti) == 1.0);
  CHECK(sectional_curvature(p2, anti) == 0.0);
  CHECK(sectional_curvature(p1, hol) == 1.0);
  CHECK(sectional_curvature(p2, hol) == 3.0);
}

TEST_CASE("pi2 satisfies the first Bianchi identity, by brute-force cyclic sums") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  CounterRng rng(41, 1);
  for (int t = 0; t < 50; ++t) {
    const VectorXd X = rng.normal_vector(6), Y = rng.normal_vector(6), Z = rng.normal_vector(6),
                   U = rng.normal_vector(6);
    const double cyc = oracles::pi2_value(id, J0, X, Y, Z, U) +
                       oracles::pi2_value(id, J0, Y, Z, X, U) +
                       oracles::pi2_value(id, J0, Z, X, Y, U);
    CHECK(std::abs(cyc) < 1e-11);
  }
  CHECK(first_bianchi_residual(pi2(id, J0)) < 1e-14);
}

TEST_CASE("psi(g) equals 2 pi2 exactly") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  const Tensor4 lhs = psi_of(id, id, J0);
  const Tensor4 rhs = 2.0 * pi2(id, J0);
  CHECK((lhs - rhs).max_abs() == 0.0);

  // also with curved g, J
  const ChartManifold hopf = catalog_manifold("hopf", {3});
  const VectorXd p = probe_grid(hopf)[17];
  const MatrixXd g = hopf.metric_at(p);
  const MatrixXd J = hopf.j_at(p);
  CHECK((psi_of(g, g, J) - 2.0 * pi2(g, J)).max_abs() < 1e-14);
}

TEST_CASE("psi(Q) vanishes on antiholomorphic planes for every admissible Q") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  CounterRng qrng(55, 0);
  for (int qi = 0; qi < 10; ++qi) {
    const MatrixXd Q = oracles::random_admissible_q(J0, qrng);
    const Tensor4 psi = psi_of(Q, id, J0);
    CounterRng prng(56, static_cast<std::uint64_t>(qi));
    for (int t = 0; t < 100; ++t) {
      const TangentPlane plane = random_antiholomorphic_plane(id, J0, prng);
      CHECK(std::abs(sectional_curvature(psi, plane)) < 1e-10);
    }
  }
}

TEST_CASE("psi(Q) carries the curvature symmetries for admissible Q (brute force)") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  CounterRng rng(57, 0);
  for (int t = 0; t < 10; ++t) {
    const MatrixXd Q = oracles::random_admissible_q(J0, rng);
    const Tensor4 psi = psi_of(Q, id, J0);
    CHECK(skew12_residual(psi) < 1e-12);
    CHECK(skew34_residual(psi) < 1e-12);
    CHECK(pair_exchange_residual(psi) < 1e-12);
    CHECK(first_bianchi_residual(psi) < 1e-12);

    // spot-check against the naive display on random vectors
    const VectorXd X = rng.normal_vector(6), Y = rng.normal_vector(6), Z = rng.normal_vector(6),
                   U = rng.normal_vector(6);
    double comp = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
          for (int l = 0; l < 6; ++l) comp += psi(i, j, k, l) * X[i] * Y[j] * Z[k] * U[l];
    CHECK(std::abs(comp - oracles::psi_value(Q, id, J0, X, Y, Z, U)) <
          1e-9 * (1.0 + std::abs(comp)));
  }
}

TEST_CASE("psi is linear in Q") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  CounterRng rng(58, 0);
  const MatrixXd Q1 = oracles::random_admissible_q(J0, rng);
  const MatrixXd Q2 = oracles::random_admissible_q(J0, rng);
  const double a = 1.7, b = -0.4;
  const Tensor4 lhs = psi_of(a * Q1 + b * Q2, id, J0);
  const Tensor4 rhs = a * psi_of(Q1, id, J0) + b * psi_of(Q2, id, J0);
  CHECK((lhs - rhs).max_abs() < 1e-12);
}

TEST_CASE("psi rejects inadmissible input") {
  const MatrixXd id = MatrixXd::Identity(6, 6);
  const MatrixXd J0 = standard_j6();
  MatrixXd bad = MatrixXd::Zero(6, 6);
  bad(0, 1) = 1.0;  // violates the twisted symmetry at O(1)
  CHECK_THROWS_AS(psi_of(bad, id, J0), std::invalid_argument);
}

TEST_CASE("q_from_star_ricci on the named cases") {
  const int n = 3, dim = 6;
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  const MatrixXd J0 = standard_j6();

  // flat, nu = 0 -> Q = 0
  const QTensor q0 = q_from_star_ricci(MatrixXd::Zero(dim, dim), 0.0, 0.0, n, id);
  CHECK(q0.Q.cwiseAbs().maxCoeff() == 0.0);
  CHECK(q0.trace == 0.0);

  // synthetic R = nu pi1 with nu = 2: tr Q = (tau* - 2n nu)/(2(2n+1)) = 0
  {
    const double nu = 2.0;
    const Tensor4 R = nu * pi1(id);
    const TraceSet t = traces_in_frame(R, J0);
    const QTensor q = q_from_star_ricci(t.rho_star, t.tau_star, nu, n, id);
    CHECK(std::abs(q.trace) < 1e-12);
    CHECK(std::abs((t.tau_star - 2 * n * nu) / (2 * (2 * n + 1))) < 1e-12);
  }

  // fubini_study(3,4), nu = 1: the oracle tensor gives Q = g/2
  {
    const Tensor4 model = oracles::space_form_curvature(id, J0, 4.0);
    const TraceSet t = traces_in_frame(model, J0);
    const QTensor q = q_from_star_ricci(t.rho_star, t.tau_star, 1.0, n, id);
    CHECK((q.Q - 0.5 * id).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(q.trace == Catch::Approx(3.0).margin(1e-12));
  }
}

TEST_CASE("characterization residual: flat and fubini_study satisfy it, hopf does not") {
  const int n = 3, dim = 6;
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  const MatrixXd J0 = standard_j6();

  {
    const Tensor4 R(dim);  // zero curvature
    const TraceSet t = traces_in_frame(R, J0);
    const IdentityResidual res = residual_constant_antiholo(R, t.rho_star, t.tau_star, 0.0, n, id, J0);
    CHECK(res.characterization == 0.0);
    CHECK(res.q_form == 0.0);
  }
  {
    const ChartManifold fs = catalog_manifold("fubini_study", {3, 4});
    const FrameView view = frame_view(compute_package(fs, probe_grid(fs)[13], false));
    const IdentityResidual res = residual_constant_antiholo(
        view.R4f, view.traces.rho_star, view.traces.tau_star, 1.0, n, id, view.Jf);
    CHECK(res.characterization < 1e-8);
    CHECK(res.q_form < 1e-8);
  }
  {
    const ChartManifold hopf = catalog_manifold("hopf", {3});
    VectorXd p = VectorXd::Zero(6);
    p[0] = 1.0;
    const FrameView view = frame_view(compute_package(hopf, p, false));
    const ConstancyStats st = constancy_stats_tensor(view.R4f, view.Jf, 128, 2);
    const IdentityResidual res = residual_constant_antiholo(
        view.R4f, view.traces.rho_star, view.traces.tau_star, st.nu_hat, n, id, view.Jf);
    CHECK(res.characterization > 1e-2);
    // regression fixture: measured residual at the sampled mean curvature
    CHECK(res.characterization == Catch::Approx(0.4596).epsilon(0.02));
  }
}

TEST_CASE("both forms of the characterization agree to round-off on random inputs") {
  const int n = 3, dim = 6;
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  const MatrixXd J0 = standard_j6();
  CounterRng rng(59, 0);
  for (int t = 0; t < 20; ++t) {
    // arbitrary curvature-like tensor: synthetic plus a symmetric perturbation
    const MatrixXd Q = oracles::random_admissible_q(J0, rng);
    const double nu = rng.uniform(-2, 2);
    Tensor4 R = synthetic_curvature(Q, nu, id, J0);
    if (t % 2) R += 0.3 * pi2(id, J0);  // push it off the model class
    const TraceSet tr = traces_in_frame(R, J0);
    const double nu_probe = rng.uniform(-2, 2);
    const IdentityResidual res =
        residual_constant_antiholo(R, tr.rho_star, tr.tau_star, nu_probe, n, id, J0);
    CHECK(std::abs(res.characterization - res.q_form) < 1e-10);
  }
}

TEST_CASE("synthetic curvature tensors behave as designed") {
  const int dim = 6;
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  const MatrixXd J0 = standard_j6();

  // Q = 0, nu = 2: R = 2 pi1, every sectional curvature equals 2
  {
    const Tensor4 R = synthetic_curvature(MatrixXd::Zero(dim, dim), 2.0, id, J0);
    CHECK((R - 2.0 * pi1(id)).max_abs() == 0.0);
    CounterRng rng(61, 0);
    for (int t = 0; t < 32; ++t) {
      // arbitrary orthonormal pair, not necessarily antiholomorphic
      VectorXd X = rng.normal_vector(dim);
      X.normalize();
      VectorXd Y = rng.normal_vector(dim);
      Y -= Y.dot(X) * X;
      Y.normalize();
      CHECK(sectional_curvature(R, {X, Y, 0}) == Catch::Approx(2.0).margin(1e-12));
    }
  }

  // random admissible Q, nu = 1: antiholomorphic K all equal 1, holomorphic K varies
  {
    CounterRng rng(62, 0);
    const MatrixXd Q = oracles::random_admissible_q(J0, rng);
    const Tensor4 R = synthetic_curvature(Q, 1.0, id, J0);
    CounterRng prng(63, 0);
    double hol_min = 1e30, hol_max = -1e30;
    for (int t = 0; t < 64; ++t) {
      const TangentPlane plane = random_antiholomorphic_plane(id, J0, prng);
      CHECK(std::abs(sectional_curvature(R, plane) - 1.0) < 1e-10);
      VectorXd X = prng.normal_vector(dim);
      X.normalize();
      const TangentPlane hol{X, J0 * X, 0};
      const double k = sectional_curvature(R, hol);
      hol_min = std::min(hol_min, k);
      hol_max = std::max(hol_max, k);
    }
    CHECK(hol_max - hol_min > 1e-3);  // holomorphic curvature genuinely varies
  }

  // Q = g, nu = 0: R = 2 pi2; antiholomorphic K = 0, holomorphic K = 6
  {
    const Tensor4 R = synthetic_curvature(id, 0.0, id, J0);
    CHECK((R - 2.0 * pi2(id, J0)).max_abs() == 0.0);
    VectorXd X = VectorXd::Zero(dim);
    X[0] = 1;
    VectorXd Y = VectorXd::Zero(dim);
    Y[1] = 1;
    CHECK(sectional_curvature(R, {X, Y, 0}) == 0.0);
    CHECK(sectional_curvature(R, {X, J0 * X, 0}) == 6.0);
  }
}

TEST_CASE("pi-basis least-squares fit") {
  const int dim = 6;
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  const MatrixXd J0 = standard_j6();

  {
    const PiFit fit = fit_pi_basis(2.0 * pi1(id), id, J0);
    CHECK(fit.f == Catch::Approx(2.0).margin(1e-12));
    CHECK(fit.h == Catch::Approx(0.0).margin(1e-12));
    CHECK(fit.residual < 1e-14);
  }
  {
    const ChartManifold fs = catalog_manifold("fubini_study", {3, 4});
    const FrameView view = frame_view(compute_package(fs, probe_grid(fs)[19], false));
    const PiFit fit = fit_pi_basis(view.R4f, id, view.Jf);
    CHECK(fit.f == Catch::Approx(1.0).margin(1e-8));
    CHECK(fit.h == Catch::Approx(1.0).margin(1e-8));
    CHECK(fit.residual < 1e-8);
  }
  {
    const ChartManifold hopf = catalog_manifold("hopf", {3});
    VectorXd p = VectorXd::Zero(6);
    p[0] = 1.0;
    const FrameView view = frame_view(compute_package(hopf, p, false));
    const PiFit fit = fit_pi_basis(view.R4f, id, view.Jf);
    CHECK(fit.residual > 1e-2);
    // regression fixture: measured misfit of the cylinder-type curvature
    CHECK(fit.residual == Catch::Approx(0.4985263).epsilon(1e-4));
    CHECK(fit.f == Catch::Approx(2.0 / 3.0).margin(1e-9));
    CHECK(fit.h == Catch::Approx(0.0).margin(1e-9));
  }
  CHECK_THROWS_AS(fit_pi_basis(Tensor4(4), MatrixXd::Identity(4, 4),
                               catalog_manifold("flat", {2}).j_at(VectorXd::Zero(4))),
                  std::invalid_argument);
}
