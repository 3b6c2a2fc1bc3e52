#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fermichain/quasifree.hpp"
#include "fermichain/xy_covariance.hpp"

namespace fermichain {

/// Single-mode occupations of a block, sorted ascending, clipped to [0, 1].
struct EntanglementSpectrum {
  std::vector<double> occupations;
};

/// Spectrum of the block-compressed covariance. The block must lie in [-ambient_N, ambient_N).
EntanglementSpectrum entanglement_spectrum(const XYParams& p, const Window& block, long ambient_n,
                                           QuadratureOptions opts = {});
EntanglementSpectrum entanglement_spectrum(const CovarianceTruncation& block_cov);

/// Binary entropy in bits with 0 log 0 = 0.
double binary_entropy(double nu);
/// S = sum_k H2(nu_k), in bits.
double block_entropy(const EntanglementSpectrum& spectrum);

/// Schmidt probabilities of a pure global Gaussian state across a block: products of the
/// per-mode factors max(nu, 1 - nu) / min(nu, 1 - nu), in descending order.
struct SchmidtData {
  std::vector<double> probabilities;
  double tail = 0.0;  // upper bound on the mass not enumerated
};

/// Enumerates until the cumulative mass reaches 1 - tail_bound. Throws TailNotReached when
/// max_terms probabilities do not suffice.
SchmidtData schmidt_from_spectrum(const EntanglementSpectrum& spectrum, double tail_bound = 1e-10,
                                  std::size_t max_terms = std::size_t{1} << 20);
/// The `count` largest probabilities, with the remaining mass as tail.
SchmidtData schmidt_prefix(const EntanglementSpectrum& spectrum, std::size_t count);

struct OneCopy {
  std::int64_t d = 1;
  double e1 = 0.0;  // log2 d, 0 when d = 1
};

/// Largest d with p majorized by the uniform d-vector (exact single-copy conversion to chi_d).
/// Throws TailTooLarge if the unenumerated mass could change a comparison.
OneCopy one_copy_exact(const SchmidtData& schmidt);

struct OneCopyRow {
  long length = 0;
  double entropy = 0.0;  // S(L), bits
  double e1 = 0.0;       // majorization lower bound, bits
  std::int64_t d = 1;
  double largest = 0.0;  // p_1
};

struct OneCopyScan {
  XYParams params;
  std::vector<OneCopyRow> rows;
  double entropy_slope = 0.0;  // fitted against log2 L
  double e1_slope = 0.0;
};

/// Blocks [0, L) for each L, inside the ambient window [-ambient_N, ambient_N).
OneCopyScan one_copy_scan(const XYParams& p, const std::vector<long>& lengths, long ambient_n);

/// Entropy S(L) for blocks [0, L); fitted slope against log2 L in `slope`.
struct EntropyScan {
  XYParams params;
  std::vector<long> lengths;
  std::vector<double> entropy;
  double slope = 0.0;
  double intercept = 0.0;
  double max_rel_residual = 0.0;
};
EntropyScan entropy_scan(const XYParams& p, const std::vector<long>& lengths, long ambient_n);

/// Partial transpose on the qubits at the listed positions.
CMatrix partial_transpose(const CMatrix& rho, std::size_t qubits, const std::vector<std::size_t>& transposed);

/// log2 || rho^{T_B} ||_1 across the cut (group A given as sites; B is the rest).
double log_negativity(const DensityMatrix& rho, const std::vector<Site>& group_a);

struct SeesawOptions {
  int random_starts = 8;
  int max_iterations = 500;
  double tolerance = 1e-10;
  std::uint64_t seed = 20061;
};

struct SingletFidelity {
  double fidelity = 0.0;
  CMatrix isometry_a;  // dim_A x d
  CMatrix isometry_b;  // dim_B x d
  bool converged = false;
  int iterations = 0;
};

/// Achieved value of max over isometries V_A, V_B of <chi_d| (V_A x V_B)^dag rho (V_A x V_B) |chi_d>
/// by alternating polar updates (each step cannot decrease the objective), multi-start.
/// The value is a lower bound on the optimum. `converged` is false when every start hit the
/// iteration cap without stagnating.
SingletFidelity singlet_fidelity(const DensityMatrix& rho, const std::vector<Site>& group_a, int d,
                                 const SeesawOptions& options = {},
                                 const std::optional<std::pair<CMatrix, CMatrix>>& warm_start = std::nullopt);

/// Objective value for given isometries (group A qubits first).
double singlet_overlap(const CMatrix& rho_ab, const CMatrix& va, const CMatrix& vb);

using RdmSource = std::function<DensityMatrix(const std::vector<Site>&)>;

/// Reduced states of the XY ground state, built on the smallest window covering the sites.
RdmSource xy_rdm_source(const XYParams& p, QuadratureOptions opts = {});

struct LocalizationResult {
  long M = 0;
  long N = 0;
  double epsilon = 0.0;
  long L_max = 0;
  std::optional<long> L_star;          // nullopt: NotFoundWithin(L_max)
  std::vector<double> fidelity_per_L;  // achieved, non-decreasing in L
  std::vector<double> optimized_per_L; // best see-saw value on the L blocks themselves
  std::vector<SingletFidelity> extraction;
};

/// Blocks Lambda_1 = [M - L, M), Lambda_2 = [M + N, M + N + L) for L = 1..L_max; singlet
/// fidelity with d = 2. fidelity_per_L is the running maximum of the optimized values.
LocalizationResult localization_length(const RdmSource& source, long M, long N, double epsilon, long L_max,
                                       const SeesawOptions& options = {});

}  // namespace fermichain
