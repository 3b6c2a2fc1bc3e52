#include "doctest.h"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fermichain/errors.hpp"
#include "fermichain/xy_covariance.hpp"

using namespace fermichain;
using std::numbers::pi;

TEST_CASE("criticality classification") {
  CHECK(XYParams{0, 0}.is_critical());
  CHECK(XYParams{1, 1}.is_critical());
  CHECK(XYParams{0.5, -1}.is_critical());
  CHECK_FALSE(XYParams{0, 2}.is_critical());
  CHECK_FALSE(XYParams{1, 2}.is_critical());
  CHECK_FALSE(XYParams{0.5, 0.3}.is_critical());
  CHECK(XYParams{0, 2}.regime() == "gapped");
  CHECK(XYParams{0.5, 0.3}.regime() == "theta-invariant ground state sector");
  CHECK(XYParams{1, 1}.regime() == "critical");
}

TEST_CASE("dispersion") {
  CHECK(dispersion({1, 1}, pi) == doctest::Approx(2.0));
  CHECK(dispersion({0, 0}, pi / 2) == doctest::Approx(0.0).epsilon(1e-15));
  for (double x : {0.1, 1.0, 2.5, 4.0}) CHECK(dispersion({1, 0}, x) == doctest::Approx(1.0));
}

TEST_CASE("symbol evaluation") {
  const Block2 a = symbol_eval({0, 0}, pi / 4);
  CHECK(std::abs(a(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(a(1, 1)) < 1e-15);
  const Block2 b = symbol_eval({0, 0}, 3 * pi / 4);
  CHECK(std::abs(b(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(b(0, 0)) < 1e-15);

  const Block2 e = symbol_eval({1, 1}, pi / 2);
  Block2 k;
  k << -1.0, cplx(0, -1), cplx(0, 1), 1.0;
  const Block2 expect = 0.5 * (Block2::Identity() + k / std::sqrt(2.0));
  CHECK((e - expect).norm() < 1e-14);
  CHECK(std::abs(e.trace() - 1.0) < 1e-14);
  CHECK((e * e - e).norm() < 1e-14);

  CHECK_THROWS_AS(symbol_eval({0, 0}, pi / 2), SymbolSingular);
  CHECK_THROWS_AS(symbol_eval({1, 1}, 0.0), SymbolSingular);
}

TEST_CASE("covariance blocks at the XX point") {
  const Block2 c0 = covariance_block({0, 0}, 0);
  CHECK((c0 - 0.5 * Block2::Identity()).norm() < 1e-8);
  const Block2 c1 = covariance_block({0, 0}, 1);
  CHECK(std::abs(c1(0, 0)) == doctest::Approx(1.0 / pi).epsilon(1e-6));
  CHECK(std::abs(c1(1, 1)) == doctest::Approx(1.0 / pi).epsilon(1e-6));
  const Block2 c2 = covariance_block({0, 0}, 2);
  CHECK(std::abs(c2(0, 0)) < 1e-8);
  CHECK(std::abs(c2(1, 1)) < 1e-8);
  for (long d = 1; d < 20; ++d) {
    const double expect = std::sin(pi * d / 2) / (pi * d);
    CHECK(std::abs(covariance_block({0, 0}, d)(1, 1)) == doctest::Approx(std::abs(expect)).epsilon(1e-6));
  }
}

TEST_CASE("hermitian symmetry of blocks") {
  const SymbolCoefficients coeffs({0.6, 0.8});
  for (long d = 0; d < 12; ++d) CHECK((coeffs.block(-d) - coeffs.block(d).adjoint()).norm() < 1e-12);
  CHECK(coeffs.error_estimate(3) < 1e-6);
}

TEST_CASE("quadrature convergence failure is reported") {
  // A coarse grid cannot resolve the step symbol to a tight tolerance.
  const SymbolCoefficients coarse({0, 0}, QuadratureOptions{6, 1e-12});
  CHECK_THROWS_AS(coarse.block(5), QuadratureNotConverged);
}

TEST_CASE("single-site truncation") {
  const CovarianceTruncation t = build_truncation({0, 0}, Window(0, 1));
  CHECK((t.complex_form - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-8);
  CHECK(t.majorana_form.norm() < 1e-8);
  CHECK((t.majorana_form + t.majorana_form.transpose()).norm() == 0.0);
}

TEST_CASE("translation invariance of truncations") {
  for (XYParams p : {XYParams{0, 0}, XYParams{1, 1}, XYParams{0.4, 2}}) {
    const CovarianceTruncation a = build_truncation(p, Window(-3, 5));
    const CovarianceTruncation b = build_truncation(p, Window(7, 15));
    CHECK((a.complex_form - b.complex_form).norm() < 1e-12);
    CHECK((a.majorana_form - b.majorana_form).norm() < 1e-12);
  }
}

TEST_CASE("gapped spectrum is bounded away from one half") {
  const CovarianceTruncation gapped = build_truncation({1, 2}, Window(0, 8));
  const CovarianceTruncation critical = build_truncation({1, 1}, Window(0, 8));
  Eigen::SelfAdjointEigenSolver<CMatrix> eg(gapped.complex_form), ec(critical.complex_form);
  const auto gap = [](const RVector& ev) { return (ev.array() - 0.5).abs().minCoeff(); };
  CHECK(eg.eigenvalues().minCoeff() > -1e-10);
  CHECK(eg.eigenvalues().maxCoeff() < 1 + 1e-10);
  CHECK(gap(eg.eigenvalues()) > gap(ec.eigenvalues()));
}

TEST_CASE("complex and Majorana forms agree") {
  for (XYParams p : {XYParams{0, 0}, XYParams{1, 1}, XYParams{0.3, 0.7}, XYParams{1, 2}}) {
    const CovarianceTruncation t = build_truncation(p, Window(-4, 4));
    CHECK((t.occupations_from_complex() - t.occupations_from_majorana()).norm() < 1e-10);
    CHECK((t.majorana_form + t.majorana_form.transpose()).norm() == 0.0);
    Eigen::JacobiSVD<RMatrix> svd(t.majorana_form);
    CHECK(svd.singularValues().maxCoeff() <= 1 + 1e-10);
  }
}

TEST_CASE("Gamma compatibility") {
  for (XYParams p : {XYParams{0, 0}, XYParams{1, 1}, XYParams{0.5, 1.5}}) {
    const CovarianceTruncation t = build_truncation(p, Window(-5, 5));
    const CMatrix sum = gamma_conjugate(t.complex_form) + t.complex_form;
    CHECK((sum - CMatrix::Identity(sum.rows(), sum.cols())).norm() < 1e-6);
  }
}

TEST_CASE("ring projection is an exact projection") {
  const Window w(-8, 8);
  for (XYParams p : {XYParams{0, 0}, XYParams{1, 1}, XYParams{0, 2}}) {
    const CMatrix e = ring_projection(p, w);
    CHECK((e * e - e).norm() < 1e-12);
    CHECK((e - e.adjoint()).norm() < 1e-13);
    CHECK(std::abs(e.trace().real() - w.length()) < 1e-10);
    CHECK((gamma_conjugate(e) + e - CMatrix::Identity(e.rows(), e.cols())).norm() < 1e-12);
  }
}
