#include <catch2/catch_amalgamated.hpp>

#include "antiholo/manifold.hpp"
#include "oracles.hpp"

using namespace antiholo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("flat catalog entry: identity metric, standard J, J^2 = -I everywhere") {
  const ChartManifold M = catalog_manifold("flat", {3});
  CHECK(M.dim() == 6);
  VectorXd p(6);
  p << 0.4, -0.9, 0.1, 0.8, -0.3, 0.0;
  CHECK((M.metric_at(p) - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  const MatrixXd J = M.j_at(p);
  CHECK((J * J + MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  // J e_a = e_{n+a}
  for (int a = 0; a < 3; ++a) {
    VectorXd e = VectorXd::Zero(6);
    e[a] = 1;
    VectorXd je = J * e;
    CHECK(je[3 + a] == 1.0);
    CHECK(je.cwiseAbs().sum() == 1.0);
  }
}

TEST_CASE("fubini_study at the chart origin matches the potential's Hessian") {
  const int n = 3;
  const double c = 4.0;
  const ChartManifold M = catalog_manifold("fubini_study", {static_cast<double>(n), c});
  const VectorXd origin = VectorXd::Zero(2 * n);

  // Kaehler potential (2/c) log(1 + |z|^2); at the origin the first
  // derivatives vanish, so the real Hessian there equals the metric
  const oracles::ScalarField potential = [&](const VectorXd& x) {
    return (2.0 / c) * std::log(1.0 + x.squaredNorm());
  };
  const MatrixXd hess = oracles::fd_hessian(potential, origin);
  const MatrixXd g0 = M.metric_at(origin);
  CHECK((g0 - hess).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((g0 - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hopf chart: g = delta/|z|^2, identity at z=(1,0,0), non-constant nearby") {
  const ChartManifold M = catalog_manifold("hopf", {3});
  VectorXd z1 = VectorXd::Zero(6);
  z1[0] = 1.0;
  CHECK((M.metric_at(z1) - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);

  VectorXd z2 = z1;
  z2[1] = 0.3;
  const MatrixXd g2 = M.metric_at(z2);
  CHECK(std::abs(g2(0, 0) - 1.0 / (1.0 + 0.09)) < 1e-15);
  CHECK((g2 - M.metric_at(z1)).cwiseAbs().maxCoeff() > 0.05);

  // domain excludes |z| < 0.5
  for (const auto& p : probe_grid(M)) CHECK(p.norm() > 0.5);
}

TEST_CASE("twisted_j: compatibility forced by construction, eps=0 degenerates to flat") {
  const ChartManifold M = catalog_manifold("twisted_j", {3, 0.1});
  CounterRng rng(3, 0);
  for (int t = 0; t < 5; ++t) {
    VectorXd p(6);
    for (int i = 0; i < 6; ++i) p[i] = rng.uniform(-1, 1);
    const ValidationReport rep = validate_structure_at(M, p);
    CHECK(rep.pass);
    CHECK(rep.compat_residual < 1e-12);
    CHECK(rep.j_squared_residual < 1e-12);
  }

  const ChartManifold M0 = catalog_manifold("twisted_j", {3, 0.0});
  const ChartManifold flat = catalog_manifold("flat", {3});
  VectorXd p(6);
  p << 0.2, 0.8, -0.5, 0.1, 0.9, -0.2;
  CHECK((M0.metric_at(p) - flat.metric_at(p)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((M0.j_at(p) - flat.j_at(p)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("every catalog fixture passes structure validation on its probe grid") {
  const std::pair<const char*, std::vector<double>> entries[] = {
      {"flat", {3}}, {"fubini_study", {3, 4}}, {"hopf", {3}}, {"twisted_j", {3, 0.1}}};
  for (const auto& [name, params] : entries) {
    CAPTURE(name);
    const ChartManifold M = catalog_manifold(name, params);
    const auto grid = probe_grid(M);
    CHECK(grid.size() >= 32);
    CHECK(grid.size() <= 200);
    for (const auto& p : grid) {
      const ValidationReport rep = validate_structure_at(M, p);
      CAPTURE(p.transpose());
      REQUIRE(rep.pass);
    }
  }
}

TEST_CASE("catalog rejects bad names and parameters") {
  CHECK_THROWS_AS(catalog_manifold("torus", {3}), ManifoldError);
  CHECK_THROWS_AS(catalog_manifold("flat", {1}), ManifoldError);
  CHECK_THROWS_AS(catalog_manifold("fubini_study", {3, -1.0}), ManifoldError);
  CHECK_THROWS_AS(catalog_manifold("fubini_study", {3}), ManifoldError);
  CHECK_THROWS_AS(catalog_manifold("flat", {2.5}), ManifoldError);
}

namespace {

std::string flat2_spec() {
  std::string s = "antiholo-spec v1\n";
  s += "NAME flat\n";
  s += "DIM 4\n";
  s += "DOMAIN\n";
  for (int i = 0; i < 4; ++i) s += "-1 1\n";
  s += "METRIC\n";
  for (int i = 1; i <= 4; ++i) s += std::to_string(i) + " " + std::to_string(i) + " 1\n";
  s += "J\n";
  s += "3 1 1\n4 2 1\n1 3 -1\n2 4 -1\n";
  return s;
}

}  // namespace

TEST_CASE("spec file round-trip: a flat(2) spec is structurally equal to the catalog entry") {
  const ChartManifold loaded = load_manifold(flat2_spec());
  const ChartManifold flat2 = catalog_manifold("flat", {2});
  CHECK(loaded.structurally_equal(flat2));
}

TEST_CASE("spec loader errors") {
  {
    std::string bad = flat2_spec() + "METRIC\n1 2 0.5\n";
    CHECK_THROWS_WITH(load_manifold(bad), Catch::Matchers::ContainsSubstring("lower triangle"));
  }
  {
    std::string bad = "antiholo-spec v1\nDIM 4\n";
    CHECK_THROWS_WITH(load_manifold(bad), Catch::Matchers::ContainsSubstring("DOMAIN"));
  }
  {
    std::string bad = "not a spec\n";
    CHECK_THROWS_WITH(load_manifold(bad), Catch::Matchers::ContainsSubstring("antiholo-spec v1"));
  }
  {
    // J entry breaking J^2 = -I: validation must name a probe point
    std::string bad = flat2_spec();
    bad += "J\n3 1 0.5\n";  // overwrite J(3,1)
    CHECK_THROWS_WITH(load_manifold(bad), Catch::Matchers::ContainsSubstring("probe point"));
  }
  {
    // missing header entirely
    CHECK_THROWS_AS(load_manifold(""), ManifoldError);
  }
}

TEST_CASE("validation reports an SPD failure for an indefinite metric") {
  const int dim = 4;
  std::vector<Expr> g(dim * (dim + 1) / 2, Expr::constant(0.0, dim));
  for (int i = 0; i < dim; ++i)
    g[ChartManifold::lower_index(i, i)] = Expr::constant(i == dim - 1 ? -1.0 : 1.0, dim);
  std::vector<Expr> J(dim * dim, Expr::constant(0.0, dim));
  J[(2) * dim + 0] = Expr::constant(1.0, dim);
  J[(3) * dim + 1] = Expr::constant(1.0, dim);
  J[0 * dim + 2] = Expr::constant(-1.0, dim);
  J[1 * dim + 3] = Expr::constant(-1.0, dim);
  Box b;
  b.lo = Eigen::VectorXd::Constant(dim, -1);
  b.hi = Eigen::VectorXd::Constant(dim, 1);
  const ChartManifold M(2, b, g, J, "indefinite");

  const ValidationReport rep = validate_structure_at(M, Eigen::VectorXd::Zero(dim));
  CHECK_FALSE(rep.pass);
  CHECK(rep.spd_min_eigenvalue < 0.0);
  CHECK(rep.spd_residual > tol::kStructure);
}

TEST_CASE("points outside the domain are rejected") {
  const ChartManifold M = catalog_manifold("flat", {2});
  VectorXd p = VectorXd::Constant(4, 2.0);
  CHECK_THROWS_AS(validate_structure_at(M, p), ManifoldError);
}
