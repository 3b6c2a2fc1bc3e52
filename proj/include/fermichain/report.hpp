#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "fermichain/diagnostics.hpp"
#include "fermichain/entanglement.hpp"
#include "fermichain/resource_states.hpp"

namespace fermichain {

using json = nlohmann::json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Output of one command: echoed configuration, structured result, and a plot-ready table.
struct Report {
  std::string command;
  json config;
  json result;
  Table table;
};

/// CSV: '#' header lines (version, command, config, result as compact JSON), then the table.
void write_csv(std::ostream& out, const Report& report);
/// JSON object with version, command, config, result and the table as column/row arrays.
void write_json(std::ostream& out, const Report& report);

/// Throws NumericalError if any number in the value is NaN or infinite.
void require_finite(const json& value);

/// {"rows", "cols", "entries": [[re, im], ...]} in row-major order.
json matrix_to_json(const CMatrix& m);
json params_to_json(const XYParams& p);

Table symbol_table(const XYParams& p, int grid);
Report trx_report(const DivergenceScan& scan);
Report entropy_report(const EntropyScan& scan);
Report onecopy_report(const OneCopyScan& scan);
Report cluster_report(const ClusterScan& scan);
Report localize_report(const LocalizationResult& result);
Report bell_report(const std::vector<BetaRow>& rows);

}  // namespace fermichain
