#include "doctest.h"

#include <cmath>
#include <random>

#include "fermichain/errors.hpp"
#include "fermichain/resource_states.hpp"

using namespace fermichain;

namespace {

CMatrix singlet() {
  CMatrix r = CMatrix::Zero(4, 4);
  r(0, 0) = r(0, 3) = r(3, 0) = r(3, 3) = 0.5;
  return r;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

}  // namespace

TEST_CASE("omega1 construction") {
  const PairedState st = make_omega1(3);
  REQUIRE(st.pairs.size() == 3);
  CHECK(st.pairs[0] == std::pair<Site, Site>{-1, 0});
  CHECK(st.pairs[2] == std::pair<Site, Site>{-3, 2});
  CHECK(st.window == Window(-3, 3));
  CHECK_THROWS_AS(make_omega1(0), InvalidArgument);
}

TEST_CASE("omega1 reduced states") {
  const PairedState st = make_omega1(3);
  CHECK((omega1_rdm(st, {-1, 0}).matrix - singlet()).norm() < 1e-15);
  CHECK((omega1_rdm(st, {-1}).matrix - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((omega1_rdm(st, {-1, 0, -2, 1}).matrix - kron(singlet(), singlet())).norm() < 1e-15);
  // Reordering the sites reorders the tensor factors.
  const CMatrix swapped = omega1_rdm(st, {-1, -2, 0, 1}).matrix;
  CHECK((swapped - permute_qubits(kron(singlet(), singlet()), {0, 2, 1, 3})).norm() < 1e-15);
  CHECK_THROWS_AS(omega1_rdm(st, {5}), SiteOutsideWindow);
  CHECK_THROWS_AS(omega1_rdm(st, {0, 0}), InvalidArgument);
}

TEST_CASE("CHSH values") {
  CHECK(chsh_beta(omega1_rdm(make_omega1(1), {-1, 0})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CMatrix up = CMatrix::Zero(4, 4);
  up(0, 0) = 1.0;
  CHECK(chsh_beta(up) == doctest::Approx(1.0));
  const CMatrix werner = 0.5 * singlet() + 0.125 * CMatrix::Identity(4, 4);
  CHECK(chsh_beta(werner) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(chsh_beta_direct(werner).beta == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));

  const DensityMatrix three = omega1_rdm(make_omega1(2), {-1, 0, 1});
  CHECK_THROWS_AS(chsh_beta(three), NotTwoQubit);
  CHECK_THROWS_AS(chsh_beta(CMatrix::Identity(2, 2)), NotTwoQubit);
}

TEST_CASE("correlation matrix of the singlet") {
  const RMatrix t = correlation_matrix(singlet());
  CHECK(t(0, 0) == doctest::Approx(1.0));
  CHECK(t(1, 1) == doctest::Approx(-1.0));
  CHECK(t(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("direct ascent matches the closed form on random states") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 25; ++trial) {
    CMatrix a(4, 4);
    for (int i = 0; i < 4; ++i) for (int j = 0; j < 4; ++j) a(i, j) = cplx(g(rng), g(rng));
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    CHECK(std::abs(chsh_beta(rho) - chsh_beta_direct(rho).beta) < 1e-6);
  }
}

TEST_CASE("XY marginals") {
  const auto rows = beta_scan_xy({0, 2}, {{0, 1}, {0, 3}});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.beta <= 1 + 1e-6);
  const BetaRow nn = beta_of_pair({0, 0}, 0, 1);
  CHECK(nn.beta > 0.0);
  CHECK(nn.beta <= std::sqrt(2.0) + 1e-10);
  CHECK_THROWS_AS(beta_of_pair({0, 0}, 1, 1), InvalidArgument);
}
