#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "antiholo/verify.hpp"
#include "antiholo/version.hpp"

namespace antiholo {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace jsonfmt {

/// Decimal with 17 significant digits: round-trips every double and is
/// byte-stable across runs.
inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char esc[8];
          std::snprintf(esc, sizeof(esc), "\\u%04x", c);
          out += esc;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace jsonfmt

/// Internal schema validation before serialization: structural requirements
/// plus JSON representability (finite reals, known verdict strings). The
/// external schema for consumers is docs/report.schema.json.
inline void validate_report(const ManifoldReport& rep) {
  if (rep.points.empty()) throw ReportError("report has no points");
  const auto finite = [](double v, const char* what) {
    if (!std::isfinite(v)) throw ReportError(std::string("non-finite value in report: ") + what);
  };
  finite(rep.summary.nu_hat_min, "summary.nu_hat_min");
  finite(rep.summary.nu_hat_max, "summary.nu_hat_max");
  finite(rep.summary.nu_hat_spread, "summary.nu_hat_spread");
  for (const auto& d : rep.points) {
    if (d.point.size() == 0) throw ReportError("point without coordinates");
    for (int i = 0; i < d.point.size(); ++i) finite(d.point[i], "point coordinate");
    finite(d.f_norm, "f_norm");
    finite(d.n_norm, "n_norm");
    finite(d.stats.nu_hat, "nu_hat");
    finite(d.stats.max_dev, "max_dev");
    finite(d.stats.k_min, "k_min");
    finite(d.stats.k_max, "k_max");
    finite(d.residual_char, "residual_char");
    finite(d.residual_qform, "residual_qform");
    finite(d.tau, "tau");
    finite(d.tau_star, "tau_star");
    for (double t : d.trace_checks) finite(t, "trace_checks");
    if (d.fit_valid) {
      finite(d.fit.f, "fit.f");
      finite(d.fit.h, "fit.h");
      finite(d.fit.residual, "fit.residual");
    }
    for (const auto& row : d.properties) {
      if (row.name.empty()) throw ReportError("property row without name");
      finite(row.residual, "property residual");
      finite(row.tolerance, "property tolerance");
    }
  }
}

/// Deterministic serialization: fixed key order, fixed number formatting.
/// Identical reports produce byte-identical text.
inline std::string report_to_json(const ManifoldReport& rep) {
  validate_report(rep);
  using jsonfmt::number;
  using jsonfmt::quoted;

  std::string out;
  out.reserve(1 << 16);
  out += "{\n";
  out += "  \"tool_version\": " + quoted(kToolVersion) + ",\n";
  out += "  \"manifold\": " + quoted(rep.manifold) + ",\n";
  out += "  \"params\": [";
  for (std::size_t i = 0; i < rep.params.size(); ++i)
    out += (i ? ", " : "") + number(rep.params[i]);
  out += "],\n";
  out += "  \"sampler\": " + quoted(rep.sampler_desc) + ",\n";
  out += "  \"seed\": " + std::to_string(rep.seed) + ",\n";
  out += "  \"points\": [\n";

  for (std::size_t k = 0; k < rep.points.size(); ++k) {
    const PointDiagnostics& d = rep.points[k];
    out += "    {\n";
    out += "      \"point\": [";
    for (int i = 0; i < d.point.size(); ++i) out += (i ? ", " : "") + number(d.point[i]);
    out += "],\n";
    out += "      \"class\": " + quoted(to_string(d.cls)) + ",\n";
    out += "      \"f_norm\": " + number(d.f_norm) + ",\n";
    out += "      \"n_norm\": " + number(d.n_norm) + ",\n";
    out += "      \"class_threshold\": " + number(d.class_threshold) + ",\n";
    out += "      \"nu_hat\": " + number(d.stats.nu_hat) + ",\n";
    out += "      \"max_dev\": " + number(d.stats.max_dev) + ",\n";
    out += "      \"k_min\": " + number(d.stats.k_min) + ",\n";
    out += "      \"k_max\": " + number(d.stats.k_max) + ",\n";
    out += "      \"samples\": " + std::to_string(d.stats.m) + ",\n";
    out += "      \"sample_seed\": " + std::to_string(d.stats.seed) + ",\n";
    out += "      \"residual_char\": " + number(d.residual_char) + ",\n";
    out += "      \"residual_qform\": " + number(d.residual_qform) + ",\n";
    out += "      \"tau\": " + number(d.tau) + ",\n";
    out += "      \"tau_star\": " + number(d.tau_star) + ",\n";
    out += "      \"trace_checks\": {\"tau_vs_tau_star\": " + number(d.trace_checks[0]) +
           ", \"nu_vs_tau_star\": " + number(d.trace_checks[1]) +
           ", \"nu_vs_tau\": " + number(d.trace_checks[2]) + "},\n";
    if (d.fit_valid) {
      out += "      \"fit\": {\"f\": " + number(d.fit.f) + ", \"h\": " + number(d.fit.h) +
             ", \"residual\": " + number(d.fit.residual) + "},\n";
    } else {
      out += "      \"fit\": null,\n";
    }
    out += "      \"properties\": [\n";
    for (std::size_t r = 0; r < d.properties.size(); ++r) {
      const PropertyRow& row = d.properties[r];
      out += "        {\"name\": " + quoted(row.name) + ", \"residual\": " + number(row.residual) +
             ", \"tolerance\": " + number(row.tolerance) + ", \"verdict\": " +
             quoted(to_string(row.verdict)) +
             ", \"class_evidence\": " + (row.class_evidence ? "true" : "false") + "}";
      out += (r + 1 < d.properties.size()) ? ",\n" : "\n";
    }
    out += "      ],\n";
    out += "      \"suite_pass\": " + std::string(d.suite_pass ? "true" : "false") + ",\n";
    out += "      \"implication\": " + quoted(to_string(d.implication)) + "\n";
    out += (k + 1 < rep.points.size()) ? "    },\n" : "    }\n";
  }

  out += "  ],\n";
  const ScanSummary& s = rep.summary;
  out += "  \"summary\": {\n";
  out += "    \"nu_hat_min\": " + number(s.nu_hat_min) + ",\n";
  out += "    \"nu_hat_max\": " + number(s.nu_hat_max) + ",\n";
  out += "    \"nu_hat_spread\": " + number(s.nu_hat_spread) + ",\n";
  out += "    \"n_kaehler\": " + std::to_string(s.n_kaehler) + ",\n";
  out += "    \"n_hermitian_non_kaehler\": " + std::to_string(s.n_hermitian_non_kaehler) + ",\n";
  out += "    \"n_non_integrable\": " + std::to_string(s.n_non_integrable) + ",\n";
  out += "    \"any_violation\": " + std::string(s.any_violation ? "true" : "false") + ",\n";
  out += "    \"all_suites_pass\": " + std::string(s.all_suites_pass ? "true" : "false") + "\n";
  out += "  }\n";
  out += "}\n";
  return out;
}

}  // namespace antiholo
