#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fermichain/lattice.hpp"
#include "fermichain/quasifree.hpp"
#include "fermichain/xy_covariance.hpp"

namespace fermichain {

// Matrix-dump text format, version 1:
//
//   # fermichain matrix-dump v1
//   # <key>: <value>            one line per metadata entry, keys sorted; always rows and cols
//   <re> <im>                   rows * cols lines, row-major, printed with %.17g
//
// Blank lines and further '#' lines are ignored by the reader.

struct MatrixDump {
  std::string kind;
  std::map<std::string, std::string> meta;  // excludes kind, rows, cols
  CMatrix matrix;
};

void write_matrix_dump(std::ostream& out, const MatrixDump& dump);
/// Throws InvalidArgument on malformed input or an entry count that does not match rows * cols.
MatrixDump read_matrix_dump(std::istream& in);

enum class CovarianceForm { Complex, Majorana };

MatrixDump covariance_dump(const CovarianceTruncation& cov, const XYParams& p, CovarianceForm form);
MatrixDump density_dump(const DensityMatrix& rho, bool repaired = false);

/// %.17g; throws NumericalError for NaN or infinity.
std::string format_number(double v);

}  // namespace fermichain
