#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "fermichain/errors.hpp"
#include "fermichain/io.hpp"
#include "fermichain/report.hpp"

using namespace fermichain;

TEST_CASE("matrix dump round trip") {
  const XYParams p{0.3, 1.2};
  const CovarianceTruncation cov = build_truncation(p, Window(-2, 3));
  for (CovarianceForm form : {CovarianceForm::Complex, CovarianceForm::Majorana}) {
    const MatrixDump dump = covariance_dump(cov, p, form);
    std::stringstream ss;
    write_matrix_dump(ss, dump);
    const MatrixDump back = read_matrix_dump(ss);
    CHECK(back.kind == dump.kind);
    CHECK(back.meta == dump.meta);
    CHECK(back.matrix == dump.matrix);
  }
}

TEST_CASE("matrix dump layout") {
  MatrixDump d;
  d.kind = "test";
  d.matrix = CMatrix(1, 2);
  d.matrix << cplx(1, -2), cplx(0.5, 0);
  std::stringstream ss;
  write_matrix_dump(ss, d);
  CHECK(ss.str() == "# fermichain matrix-dump v1\n# cols: 2\n# kind: test\n# rows: 1\n1 -2\n0.5 0\n");
}

TEST_CASE("density dump keeps the site order") {
  const DensityMatrix rho = reduced_density_matrix({2, 0}, build_truncation({1, 1}, Window(0, 3)));
  const MatrixDump d = density_dump(rho);
  CHECK(d.meta.at("sites") == "2 0");
  std::stringstream ss;
  write_matrix_dump(ss, d);
  CHECK((read_matrix_dump(ss).matrix - rho.matrix).norm() == 0.0);
}

TEST_CASE("malformed dumps") {
  std::stringstream bad_magic("hello\n");
  CHECK_THROWS_AS(read_matrix_dump(bad_magic), InvalidArgument);
  std::stringstream short_dump("# fermichain matrix-dump v1\n# rows: 1\n# cols: 2\n1 0\n");
  CHECK_THROWS_AS(read_matrix_dump(short_dump), InvalidArgument);
  std::stringstream bad_entry("# fermichain matrix-dump v1\n# rows: 1\n# cols: 1\n1 zero\n");
  CHECK_THROWS_AS(read_matrix_dump(bad_entry), InvalidArgument);
  std::stringstream no_rows("# fermichain matrix-dump v1\n# cols: 1\n1 0\n");
  CHECK_THROWS_AS(read_matrix_dump(no_rows), InvalidArgument);
}

TEST_CASE("non-finite output is rejected") {
  CHECK_THROWS_AS(format_number(std::numeric_limits<double>::quiet_NaN()), NumericalError);
  Report r;
  r.command = "test";
  r.table = {{"x"}, {{std::numeric_limits<double>::infinity()}}};
  std::stringstream ss;
  CHECK_THROWS_AS(write_csv(ss, r), NumericalError);
  CHECK_THROWS_AS(write_json(ss, r), NumericalError);
  Report nested;
  nested.result = {{"value", std::nan("")}};
  CHECK_THROWS_AS(write_json(ss, nested), NumericalError);
}

TEST_CASE("csv and json reports") {
  const EntropyScan scan = entropy_scan({0, 0}, {2, 4, 8}, 32);
  Report r = entropy_report(scan);
  r.config = {{"lengths", {2, 4, 8}}};
  std::stringstream csv, js;
  write_csv(csv, r);
  const std::string text = csv.str();
  CHECK(text.rfind("# fermichain " FERMICHAIN_VERSION "\n", 0) == 0);
  CHECK(text.find("# config: {\"lengths\":[2,4,8]}") != std::string::npos);
  CHECK(text.find("L,S_bits\n2,") != std::string::npos);

  write_json(js, r);
  const json doc = json::parse(js.str());
  CHECK(doc["command"] == "entropy");
  CHECK(doc["table"]["rows"].size() == 3);
  CHECK(doc["table"]["rows"][2][1].get<double>() == scan.entropy[2]);
}

TEST_CASE("symbol table") {
  const Table t = symbol_table({1, 1}, 64);
  CHECK(t.rows.size() == 64);
  for (const auto& row : t.rows) CHECK(row.back() == doctest::Approx(1.0));
  CHECK_THROWS_AS(symbol_table({1, 1}, 0), InvalidArgument);
}

TEST_CASE("localization report carries isometries") {
  const LocalizationResult res = localization_length(omega1_rdm_source(make_omega1(3)), 0, 0, 0.01, 1);
  const Report r = localize_report(res);
  CHECK(r.result["L_star"] == 1);
  CHECK(r.result["extraction"][0]["isometry_a"]["rows"] == 2);
  CHECK(r.result["extraction"][0]["isometry_a"]["entries"].size() == 4);
  const Report missing = localize_report(localization_length(omega1_rdm_source(make_omega1(8)), 4, 0, 0.01, 1));
  CHECK(missing.result["L_star"].is_null());
  CHECK(missing.result["status"] == "NotFoundWithin(1)");
}
