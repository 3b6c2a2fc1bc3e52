#include "fermichain/resource_states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "fermichain/errors.hpp"
#include "fermichain/parallel.hpp"

namespace fermichain {

namespace {

CMatrix singlet_projector() {
  CMatrix r = CMatrix::Zero(4, 4);
  r(0, 0) = r(0, 3) = r(3, 0) = r(3, 3) = 0.5;
  return r;
}

std::array<CMatrix, 3> paulis() {
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  return {x, y, z};
}

CMatrix bloch_observable(const RVector& n) {
  const auto s = paulis();
  return n(0) * s[0] + n(1) * s[1] + n(2) * s[2];
}

RVector unit(const RVector& v, const RVector& fallback) {
  const double n = v.norm();
  return n > 1e-300 ? RVector(v / n) : fallback;
}

void check_two_qubit(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw NotTwoQubit("expected a 4x4 density matrix");
}

}  // namespace

PairedState make_omega1(long J) {
  if (J < 1) throw InvalidArgument("omega1 needs at least one pair");
  PairedState s{{}, Window(-J, J)};
  for (long j = 1; j <= J; ++j) s.pairs.emplace_back(-j, j - 1);
  return s;
}

DensityMatrix omega1_rdm(const PairedState& state, const std::vector<Site>& sites) {
  if (sites.size() > kMaxRdmSites) throw TooManySites(std::to_string(sites.size()) + " sites");
  for (std::size_t a = 0; a < sites.size(); ++a) {
    if (!state.window.contains(sites[a])) {
      throw SiteOutsideWindow("site " + std::to_string(sites[a]) + " outside the paired window");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (sites[a] == sites[b]) throw InvalidArgument("repeated site " + std::to_string(sites[a]));
    }
  }
  auto has = [&](Site s) { return std::find(sites.begin(), sites.end(), s) != sites.end(); };

  // Assemble in an internal order (matched pairs adjacent), then reorder to `sites`.
  std::vector<Site> internal;
  CMatrix rho = CMatrix::Ones(1, 1);
  const CMatrix half = 0.5 * CMatrix::Identity(2, 2);
  for (const auto& [l, r] : state.pairs) {
    const bool hl = has(l), hr = has(r);
    if (hl && hr) {
      rho = Eigen::kroneckerProduct(rho, singlet_projector()).eval();
      internal.push_back(l);
      internal.push_back(r);
    } else if (hl || hr) {
      rho = Eigen::kroneckerProduct(rho, half).eval();
      internal.push_back(hl ? l : r);
    }
  }
  for (Site s : sites) {
    if (std::find(internal.begin(), internal.end(), s) == internal.end()) {
      throw SiteOutsideWindow("site " + std::to_string(s) + " belongs to no pair");
    }
  }
  std::vector<std::size_t> order;
  for (Site s : sites) {
    order.push_back(static_cast<std::size_t>(std::find(internal.begin(), internal.end(), s) - internal.begin()));
  }
  return DensityMatrix::from_matrix(sites, permute_qubits(rho, order));
}

RdmSource omega1_rdm_source(const PairedState& state) {
  return [state](const std::vector<Site>& sites) { return omega1_rdm(state, sites); };
}

RMatrix correlation_matrix(const CMatrix& rho) {
  check_two_qubit(rho);
  const auto s = paulis();
  RMatrix t(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t(i, j) = (rho * CMatrix(Eigen::kroneckerProduct(s[i], s[j]))).trace().real();
    }
  }
  return t;
}

double chsh_beta(const CMatrix& rho) {
  const RMatrix t = correlation_matrix(rho);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(t.transpose() * t, Eigen::EigenvaluesOnly);
  const auto& u = es.eigenvalues();  // ascending
  return std::sqrt(std::max(0.0, u(2) + u(1)));
}

double chsh_beta(const DensityMatrix& rho) {
  if (rho.sites.size() != 2) throw NotTwoQubit(std::to_string(rho.sites.size()) + " qubits");
  return chsh_beta(rho.matrix);
}

ChshAscent chsh_beta_direct(const CMatrix& rho, int starts, std::uint64_t seed) {
  check_two_qubit(rho);
  const auto s = paulis();
  // Expectations of sigma_i x sigma_j, read off rho once; each step maximizes over one vector.
  RMatrix t(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t(i, j) = (rho * CMatrix(Eigen::kroneckerProduct(s[i], s[j]))).trace().real();
    }
  }
  ChshAscent best;
  best.beta = -1.0;
  for (int k = 0; k < starts; ++k) {
    std::mt19937_64 rng(seed + 7919ULL * static_cast<std::uint64_t>(k));
    std::normal_distribution<double> g(0.0, 1.0);
    auto random_unit = [&] {
      RVector v(3);
      for (int i = 0; i < 3; ++i) v(i) = g(rng);
      return RVector(v / v.norm());
    };
    RVector a1 = random_unit(), a2 = random_unit(), b1 = random_unit(), b2 = random_unit();
    double value = -1.0;
    for (int it = 0; it < 5000; ++it) {
      a1 = unit(t * (b1 + b2), a1);
      a2 = unit(t * (b1 - b2), a2);
      b1 = unit(t.transpose() * (a1 + a2), b1);
      b2 = unit(t.transpose() * (a1 - a2), b2);
      const double next = 0.5 * (a1.dot(t * (b1 + b2)) + a2.dot(t * (b1 - b2)));
      if (std::abs(next - value) < 1e-15) {
        value = next;
        break;
      }
      value = next;
    }
    const CMatrix a1o = bloch_observable(a1), a2o = bloch_observable(a2);
    const CMatrix b1o = bloch_observable(b1), b2o = bloch_observable(b2);
    const CMatrix chsh = Eigen::kroneckerProduct(a1o, b1o + b2o).eval() + Eigen::kroneckerProduct(a2o, b1o - b2o).eval();
    const double traced = 0.5 * (rho * chsh).trace().real();
    if (traced > best.beta) best = {traced, a1, a2, b1, b2};
  }
  return best;
}

BetaRow beta_of_pair(const XYParams& p, Site i, Site j, QuadratureOptions opts) {
  if (i == j) throw InvalidArgument("pair sites must differ");
  const Window w(std::min(i, j), std::max(i, j) + 1);
  const DensityMatrix rho = reduced_density_matrix({i, j}, build_truncation(p, w, opts));
  return BetaRow{i, j, chsh_beta(rho)};
}

std::vector<BetaRow> beta_scan_xy(const XYParams& p, const std::vector<std::pair<Site, Site>>& pairs,
                                  QuadratureOptions opts) {
  std::vector<BetaRow> rows(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) { rows[k] = beta_of_pair(p, pairs[k].first, pairs[k].second, opts); });
  return rows;
}

}  // namespace fermichain
