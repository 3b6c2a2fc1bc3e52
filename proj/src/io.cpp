#include "fermichain/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "fermichain/errors.hpp"

namespace fermichain {

namespace {

constexpr const char* kMagic = "# fermichain matrix-dump v1";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_dimension(const std::map<std::string, std::string>& fields, const std::string& key) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw InvalidArgument("matrix dump lacks '" + key + "'");
  std::size_t used = 0;
  long v = -1;
  try {
    v = std::stol(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || v < 0) throw InvalidArgument("bad " + key + ": " + it->second);
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) throw NumericalError("non-finite value in output");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_dump(std::ostream& out, const MatrixDump& dump) {
  out << kMagic << '\n';
  std::map<std::string, std::string> fields = dump.meta;
  fields["kind"] = dump.kind;
  fields["rows"] = std::to_string(dump.matrix.rows());
  fields["cols"] = std::to_string(dump.matrix.cols());
  for (const auto& [k, v] : fields) out << "# " << k << ": " << v << '\n';
  for (Eigen::Index r = 0; r < dump.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < dump.matrix.cols(); ++c) {
      out << format_number(dump.matrix(r, c).real()) << ' ' << format_number(dump.matrix(r, c).imag()) << '\n';
    }
  }
}

MatrixDump read_matrix_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kMagic) throw InvalidArgument("not a fermichain matrix dump");
  std::map<std::string, std::string> fields;
  std::vector<cplx> entries;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto colon = t.find(':');
      if (colon != std::string::npos) fields[trim(t.substr(1, colon - 1))] = trim(t.substr(colon + 1));
      continue;
    }
    std::istringstream ls(t);
    double re = 0.0, im = 0.0;
    std::string rest;
    if (!(ls >> re >> im) || (ls >> rest)) throw InvalidArgument("bad matrix entry line: " + t);
    entries.emplace_back(re, im);
  }
  const long rows = parse_dimension(fields, "rows"), cols = parse_dimension(fields, "cols");
  if (static_cast<long>(entries.size()) != rows * cols) {
    throw InvalidArgument("expected " + std::to_string(rows * cols) + " entries, found " +
                          std::to_string(entries.size()));
  }
  MatrixDump dump;
  dump.kind = fields.count("kind") ? fields["kind"] : "";
  fields.erase("kind");
  fields.erase("rows");
  fields.erase("cols");
  dump.meta = fields;
  dump.matrix.resize(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) dump.matrix(r, c) = entries[static_cast<std::size_t>(r * cols + c)];
  }
  return dump;
}

MatrixDump covariance_dump(const CovarianceTruncation& cov, const XYParams& p, CovarianceForm form) {
  MatrixDump d;
  d.kind = form == CovarianceForm::Complex ? "covariance-complex" : "covariance-majorana";
  d.meta["gamma"] = format_number(p.gamma);
  d.meta["lambda"] = format_number(p.lambda);
  d.meta["window"] = std::to_string(cov.window.lo()) + " " + std::to_string(cov.window.hi());
  d.meta["index"] = form == CovarianceForm::Complex ? "2*(site-lo)+component" : "2*(site-lo)+{0,1}";
  d.matrix = form == CovarianceForm::Complex ? cov.complex_form : CMatrix(cov.majorana_form.cast<cplx>());
  return d;
}

MatrixDump density_dump(const DensityMatrix& rho, bool repaired) {
  MatrixDump d;
  d.kind = repaired ? "density-matrix-repaired" : "density-matrix";
  std::string sites;
  for (std::size_t i = 0; i < rho.sites.size(); ++i) sites += (i ? " " : "") + std::to_string(rho.sites[i]);
  d.meta["sites"] = sites;
  d.meta["qubit-order"] = "first site most significant";
  d.matrix = repaired ? rho.repaired : rho.matrix;
  return d;
}

}  // namespace fermichain
