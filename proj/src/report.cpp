#include "fermichain/report.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "fermichain/errors.hpp"
#include "fermichain/io.hpp"

namespace fermichain {

namespace {

json fit_to_json(const LineFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"max_rel_residual", f.max_rel_residual},
          {"rms_residual", f.rms_residual}};
}

json decay_to_json(const DecayFit& f) {
  if (!f.valid) return {{"valid", false}, {"points", f.points}};
  return {{"valid", true}, {"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual},
          {"points", f.points}};
}

}  // namespace

void require_finite(const json& value) {
  if (value.is_number_float() && !std::isfinite(value.get<double>())) {
    throw NumericalError("non-finite value in output");
  }
  if (value.is_structured()) {
    for (const auto& v : value) require_finite(v);
  }
}

void write_csv(std::ostream& out, const Report& report) {
  require_finite(report.config);
  require_finite(report.result);
  out << "# fermichain " << FERMICHAIN_VERSION << '\n';
  out << "# command: " << report.command << '\n';
  out << "# config: " << report.config.dump() << '\n';
  out << "# result: " << report.result.dump() << '\n';
  for (std::size_t c = 0; c < report.table.columns.size(); ++c) out << (c ? "," : "") << report.table.columns[c];
  out << '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Report& report) {
  json rows = json::array();
  for (const auto& row : report.table.rows) {
    for (double v : row) format_number(v);
    rows.push_back(row);
  }
  const json doc = {{"fermichain_version", FERMICHAIN_VERSION},
                    {"command", report.command},
                    {"config", report.config},
                    {"result", report.result},
                    {"table", {{"columns", report.table.columns}, {"rows", rows}}}};
  require_finite(doc);
  out << doc.dump(2) << '\n';
}

json matrix_to_json(const CMatrix& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

json params_to_json(const XYParams& p) {
  return {{"gamma", p.gamma}, {"lambda", p.lambda}, {"regime", p.regime()}};
}

Table symbol_table(const XYParams& p, int grid) {
  if (grid < 1) throw InvalidArgument("grid must be positive");
  Table t{{"x", "k", "E00", "E01_re", "E01_im", "E11", "trace"}, {}};
  for (int m = 0; m < grid; ++m) {
    const double x = -std::numbers::pi + 2.0 * std::numbers::pi * (m + 0.5) / grid;
    const Block2 e = symbol_eval(p, x);
    t.rows.push_back({x, dispersion(p, x), e(0, 0).real(), e(0, 1).real(), e(0, 1).imag(), e(1, 1).real(),
                      e.trace().real()});
  }
  return t;
}

Report trx_report(const DivergenceScan& scan) {
  Report r;
  r.command = "trx";
  r.result = {{"params", params_to_json(scan.params)},
              {"classification", to_string(scan.classification)},
              {"fit_vs_ln_N", fit_to_json(scan.fit)}};
  r.table.columns = {"N", "trX", "hs_E_minus_F", "hs_theta", "identity_gap", "theta_gap"};
  const bool comp = !scan.compression_values.empty();
  if (comp) r.table.columns.push_back("trX_compression");
  for (std::size_t i = 0; i < scan.sizes.size(); ++i) {
    std::vector<double> row{static_cast<double>(scan.sizes[i]), scan.values[i], scan.hs_E_minus_F[i],
                            scan.hs_theta[i], std::abs(scan.hs_E_minus_F[i] - scan.values[i]),
                            std::abs(scan.hs_theta[i] - 4.0 * scan.values[i])};
    if (comp) row.push_back(scan.compression_values[i]);
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

Report entropy_report(const EntropyScan& scan) {
  Report r;
  r.command = "entropy";
  r.result = {{"params", params_to_json(scan.params)},
              {"fit_vs_log2_L", {{"slope", scan.slope}, {"intercept", scan.intercept},
                                 {"max_rel_residual", scan.max_rel_residual}}}};
  r.table.columns = {"L", "S_bits"};
  for (std::size_t i = 0; i < scan.lengths.size(); ++i) {
    r.table.rows.push_back({static_cast<double>(scan.lengths[i]), scan.entropy[i]});
  }
  return r;
}

Report onecopy_report(const OneCopyScan& scan) {
  Report r;
  r.command = "onecopy";
  const double ratio = scan.entropy_slope != 0.0 ? scan.e1_slope / scan.entropy_slope : 0.0;
  r.result = {{"params", params_to_json(scan.params)},
              {"e1_label", "exact single-copy conversion (majorization) lower bound"},
              {"entropy_slope_vs_log2_L", scan.entropy_slope},
              {"e1_slope_vs_log2_L", scan.e1_slope},
              {"slope_ratio", ratio}};
  r.table.columns = {"L", "E1_bits", "S_bits", "d", "p1"};
  for (const auto& row : scan.rows) {
    r.table.rows.push_back({static_cast<double>(row.length), row.e1, row.entropy, static_cast<double>(row.d),
                            row.largest});
  }
  return r;
}

Report cluster_report(const ClusterScan& scan) {
  Report r;
  r.command = "cluster";
  r.result = {{"exponential_fit", decay_to_json(scan.exponential)},
              {"power_law_fit", decay_to_json(scan.power_law)},
              {"preference", to_string(scan.preference)}};
  r.table.columns = {"k", "connected"};
  for (std::size_t i = 0; i < scan.distances.size(); ++i) {
    r.table.rows.push_back({static_cast<double>(scan.distances[i]), scan.connected[i]});
  }
  return r;
}

Report localize_report(const LocalizationResult& res) {
  Report r;
  r.command = "localize";
  json extraction = json::array();
  for (std::size_t i = 0; i < res.extraction.size(); ++i) {
    const auto& e = res.extraction[i];
    extraction.push_back({{"L", i + 1},
                          {"fidelity", e.fidelity},
                          {"converged", e.converged},
                          {"iterations", e.iterations},
                          {"isometry_a", matrix_to_json(e.isometry_a)},
                          {"isometry_b", matrix_to_json(e.isometry_b)}});
  }
  r.result = {{"M", res.M},
              {"N", res.N},
              {"epsilon", res.epsilon},
              {"L_max", res.L_max},
              {"L_star", res.L_star ? json(*res.L_star) : json(nullptr)},
              {"status", res.L_star ? "Found" : "NotFoundWithin(" + std::to_string(res.L_max) + ")"},
              {"fidelity_label", "singlet fidelity achieved by local isometries (lower bound)"},
              {"extraction", extraction}};
  r.table.columns = {"L", "fidelity", "optimized"};
  for (std::size_t i = 0; i < res.fidelity_per_L.size(); ++i) {
    r.table.rows.push_back({static_cast<double>(i + 1), res.fidelity_per_L[i], res.optimized_per_L[i]});
  }
  return r;
}

Report bell_report(const std::vector<BetaRow>& rows) {
  Report r;
  r.command = "bell";
  r.result = {{"beta_label", "two-qubit marginal lower bound on beta"}, {"cirelson_bound", std::sqrt(2.0)}};
  r.table.columns = {"i", "j", "beta"};
  for (const auto& b : rows) r.table.rows.push_back({static_cast<double>(b.i), static_cast<double>(b.j), b.beta});
  return r;
}

}  // namespace fermichain
