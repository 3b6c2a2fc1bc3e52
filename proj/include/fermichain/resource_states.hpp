#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fermichain/entanglement.hpp"
#include "fermichain/quasifree.hpp"

namespace fermichain {

/// Product of two-qubit singlets |chi_2> = (|00> + |11>)/sqrt(2) on disjoint site pairs.
struct PairedState {
  std::vector<std::pair<Site, Site>> pairs;  // (left, right)
  Window window;
};

/// Pairs (-j, j - 1) for j = 1..J on the window [-J, J).
PairedState make_omega1(long J);

/// Exact reduced state: matched pairs give |chi_2><chi_2| (left site first in the pair),
/// unmatched members give 1/2. Qubit order follows `sites`.
DensityMatrix omega1_rdm(const PairedState& state, const std::vector<Site>& sites);
RdmSource omega1_rdm_source(const PairedState& state);

/// 3x3 correlation matrix T_ij = tr(rho sigma_i x sigma_j).
RMatrix correlation_matrix(const CMatrix& rho);

/// Two-qubit marginal lower bound on beta: sqrt(u1 + u2) from the two largest eigenvalues of
/// T^T T, the supremum of <CHSH>/2 over traceless dichotomic observables.
double chsh_beta(const DensityMatrix& rho);
double chsh_beta(const CMatrix& rho);

struct ChshAscent {
  double beta = 0.0;
  RVector a1, a2, b1, b2;  // Bloch directions of the optimal observables
};

/// Independent check of chsh_beta: block coordinate ascent over the four unit vectors,
/// multi-start, with the value evaluated as a trace against rho.
ChshAscent chsh_beta_direct(const CMatrix& rho, int starts = 16, std::uint64_t seed = 1931);

struct BetaRow {
  Site i = 0;
  Site j = 0;
  double beta = 0.0;
};

BetaRow beta_of_pair(const XYParams& p, Site i, Site j, QuadratureOptions opts = {});
std::vector<BetaRow> beta_scan_xy(const XYParams& p, const std::vector<std::pair<Site, Site>>& pairs,
                                  QuadratureOptions opts = {});

}  // namespace fermichain
