// antiholo command-line front end: analyze whole charts, run the per-point
// property checks, or extremize sectional curvature over antiholomorphic
// planes. Machine-readable output is JSON (see docs/report.schema.json).

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "antiholo/report.hpp"
#include "antiholo/verify.hpp"
#include "antiholo/version.hpp"

namespace {

using namespace antiholo;

std::vector<double> parse_csv(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("could not parse ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw std::runtime_error(std::string("empty ") + what + " list");
  return out;
}

struct ManifoldArgs {
  std::string catalog;
  std::string params_csv;
  std::string spec_path;

  ChartManifold resolve() const {
    if (!catalog.empty() && !spec_path.empty())
      throw std::runtime_error("use either --catalog or --spec, not both");
    if (!catalog.empty()) {
      std::vector<double> params;
      if (!params_csv.empty()) params = parse_csv(params_csv, "--params");
      return catalog_manifold(catalog, params);
    }
    if (!spec_path.empty()) {
      std::ifstream in(spec_path);
      if (!in) throw std::runtime_error("cannot read spec file '" + spec_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      return load_manifold(buf.str());
    }
    throw std::runtime_error("one of --catalog or --spec is required");
  }
};

void add_manifold_options(CLI::App* cmd, ManifoldArgs& args) {
  cmd->add_option("--catalog", args.catalog, "catalog manifold name (flat, fubini_study, hopf, twisted_j)");
  cmd->add_option("--params", args.params_csv, "comma-separated catalog parameters");
  cmd->add_option("--spec", args.spec_path, "manifold spec file (antiholo-spec v1)");
}

int thread_cap_from_env() {
  const char* env = std::getenv("ANTIHOLO_THREADS");
  if (!env || !*env) return 1;
  const int v = std::atoi(env);
  return v < 0 ? 1 : v;  // 0 = auto
}

ScanOptions parse_points_spec(const std::string& text) {
  ScanOptions opt;
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("--points must look like grid:N or random:K");
  const std::string kind = text.substr(0, colon);
  const int count = std::atoi(text.c_str() + colon + 1);
  if (count <= 0) throw std::runtime_error("--points count must be positive");
  if (kind == "grid")
    opt.sampler = ScanOptions::Sampler::Grid;
  else if (kind == "random")
    opt.sampler = ScanOptions::Sampler::Random;
  else
    throw std::runtime_error("--points must look like grid:N or random:K");
  opt.count = count;
  return opt;
}

int cmd_analyze(const ManifoldArgs& margs, const std::string& points_spec, std::uint64_t seed,
                const std::string& json_path) {
  const ChartManifold M = margs.resolve();

  ScanOptions opt = parse_points_spec(points_spec);
  opt.seed = seed;
  opt.diag.seed = seed;
  opt.threads = thread_cap_from_env();

  const ManifoldReport rep = scan_manifold(M, opt);

  std::printf("manifold: %s  dim: %d  sampler: %s  seed: %llu\n", rep.manifold.c_str(), M.dim(),
              rep.sampler_desc.c_str(), static_cast<unsigned long long>(rep.seed));
  std::printf("%4s  %-22s %13s %12s %12s  %s\n", "pt", "class", "nu_hat", "max_dev", "char_res",
              "implication");
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const PointDiagnostics& d = rep.points[i];
    std::printf("%4zu  %-22s %13.6g %12.4g %12.4g  %s\n", i, to_string(d.cls), d.stats.nu_hat,
                d.stats.max_dev, d.residual_char, to_string(d.implication));
  }
  const ScanSummary& s = rep.summary;
  std::printf("summary: nu_hat in [%.6g, %.6g], spread %.4g\n", s.nu_hat_min, s.nu_hat_max,
              s.nu_hat_spread);
  std::printf("classes: kaehler=%d hermitian_non_kaehler=%d non_integrable=%d\n", s.n_kaehler,
              s.n_hermitian_non_kaehler, s.n_non_integrable);
  std::printf("property suites: %s, violations: %s\n", s.all_suites_pass ? "all pass" : "FAILURES",
              s.any_violation ? "PRESENT" : "none");

  if (!json_path.empty()) {
    const std::string json = report_to_json(rep);
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write JSON report to '" + json_path + "'");
    out << json;
  }
  return s.any_violation ? 2 : 0;
}

int cmd_checks(const ManifoldArgs& margs, const std::string& point_csv) {
  const ChartManifold M = margs.resolve();
  const std::vector<double> coords = parse_csv(point_csv, "--point");
  if (static_cast<int>(coords.size()) != M.dim())
    throw std::runtime_error("--point needs " + std::to_string(M.dim()) + " coordinates");
  Eigen::VectorXd p(M.dim());
  for (int i = 0; i < M.dim(); ++i) p[i] = coords[i];

  const PointDiagnostics d = point_diagnostics(M, p);
  std::printf("point class: %s   (|F| = %.6g, |N| = %.6g, threshold %.3g)\n", to_string(d.cls),
              d.f_norm, d.n_norm, d.class_threshold);
  std::printf("%-34s %14s %11s  %s\n", "property", "residual", "tolerance", "verdict");
  for (const auto& row : d.properties) {
    std::printf("%-34s %14.6g %11.3g  %s%s\n", row.name.c_str(), row.residual, row.tolerance,
                to_string(row.verdict), row.class_evidence ? " (class evidence)" : "");
  }
  std::printf("suite: %s\n", d.suite_pass ? "PASS" : "FAIL");
  return d.suite_pass ? 0 : 2;
}

int cmd_extremize(const ManifoldArgs& margs, const std::string& point_csv, int restarts,
                  std::uint64_t seed) {
  const ChartManifold M = margs.resolve();
  const std::vector<double> coords = parse_csv(point_csv, "--point");
  if (static_cast<int>(coords.size()) != M.dim())
    throw std::runtime_error("--point needs " + std::to_string(M.dim()) + " coordinates");
  Eigen::VectorXd p(M.dim());
  for (int i = 0; i < M.dim(); ++i) p[i] = coords[i];

  const CurvaturePackage pkg = compute_package(M, p, false);
  const FrameView view = frame_view(pkg);
  const ExtremizeResult ext = extremize_antiholomorphic(view.R4f, view.Jf, restarts, seed);

  std::printf("antiholomorphic sectional curvature at the point:\n");
  std::printf("  K_min = %.12g   (iterations %d)\n", ext.k_min, ext.iterations_min);
  std::printf("  K_max = %.12g   (iterations %d)\n", ext.k_max, ext.iterations_max);
  std::printf("  gap   = %.6g\n", ext.k_max - ext.k_min);
  const auto print_plane = [&](const char* label, const TangentPlane& pl) {
    std::printf("  %s X = [", label);
    for (int i = 0; i < pl.X.size(); ++i) std::printf("%s%.9g", i ? ", " : "", pl.X[i]);
    std::printf("]\n  %s Y = [", label);
    for (int i = 0; i < pl.Y.size(); ++i) std::printf("%s%.9g", i ? ", " : "", pl.Y[i]);
    std::printf("]\n");
  };
  print_plane("argmin", ext.argmin);
  print_plane("argmax", ext.argmax);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"antiholo: chart-level curvature diagnostics for almost Hermitian manifolds"};
  app.set_version_flag("--version", antiholo::kToolVersion);
  app.require_subcommand(1);

  // analyze
  ManifoldArgs a_margs;
  std::string a_points = "random:5";
  std::uint64_t a_seed = 0;
  std::string a_json;
  CLI::App* analyze = app.add_subcommand("analyze", "scan a manifold and report per-point diagnostics");
  add_manifold_options(analyze, a_margs);
  analyze->add_option("--points", a_points, "sample layout: grid:N or random:K (default random:5)");
  analyze->add_option("--seed", a_seed, "random seed");
  analyze->add_option("--json", a_json, "write the machine-readable report here");

  // checks
  ManifoldArgs c_margs;
  std::string c_point;
  CLI::App* checks = app.add_subcommand("checks", "print the property residual table at one point");
  add_manifold_options(checks, c_margs);
  checks->add_option("--point", c_point, "comma-separated chart coordinates")->required();

  // extremize
  ManifoldArgs e_margs;
  std::string e_point;
  int e_restarts = 16;
  std::uint64_t e_seed = 0;
  CLI::App* extremize =
      app.add_subcommand("extremize", "min/max sectional curvature over antiholomorphic planes");
  add_manifold_options(extremize, e_margs);
  extremize->add_option("--point", e_point, "comma-separated chart coordinates")->required();
  extremize->add_option("--restarts", e_restarts, "optimizer restarts (default 16)");
  extremize->add_option("--seed", e_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(a_margs, a_points, a_seed, a_json);
    if (checks->parsed()) return cmd_checks(c_margs, c_point);
    if (extremize->parsed()) return cmd_extremize(e_margs, e_point, e_restarts, e_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
