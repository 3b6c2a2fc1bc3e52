#pragma once

#include <string>
#include <vector>

#include "fermichain/fit.hpp"
#include "fermichain/quasifree.hpp"
#include "fermichain/xy_covariance.hpp"

namespace fermichain {

// Quasi-equivalence diagnostics on the window [-N, N) with the half-chain projection P onto
// sites >= 0 (Q = 1 - P, theta = P - Q):
//
//   X_N = PEP - (PEP)^2 + QEQ - (QEQ)^2,   F_N = PEP + QEQ.
//
// The params-based entry points use the ring basis projection E_N (ring_projection), which is
// exactly idempotent, so ||E_N - F_N||^2 = tr X_N and ||E_N - theta E_N theta||^2 = 4 tr X_N hold
// to rounding at every N. The *_of variants accept any hermitian matrix on a window.

double trace_X_of(const CMatrix& e, const Window& w);
double hs_norm_E_minus_F_of(const CMatrix& e, const Window& w);
double hs_norm_theta_conjugation_of(const CMatrix& e, const Window& w);

double trace_X(const XYParams& p, long half_width);
double hs_norm_E_minus_F(const XYParams& p, long half_width);
double hs_norm_theta_conjugation(const XYParams& p, long half_width);

/// tr X computed from the plain block-Toeplitz compression of E (compress, then project).
/// Compressions are not idempotent; the gap to trace_X measures truncation effects.
double trace_X_compression(const XYParams& p, long half_width, QuadratureOptions opts = {});

enum class Classification { Diverging, Converging, Inconclusive };
std::string to_string(Classification c);

struct ClassifierConfig {
  double converge_tol = 1e-3;  // |v(N_last) - v(N_prev)| below this, with shrinking differences
  double min_slope = 0.01;     // log-fit slope (natural log of N) above this ...
  double max_residual = 0.05;  // ... with max relative residual below this
};

struct DivergenceScan {
  XYParams params;
  std::vector<long> sizes;
  std::vector<double> values;             // tr X_N
  std::vector<double> hs_E_minus_F;       // ||E_N - F_N||^2
  std::vector<double> hs_theta;           // ||E_N - theta E_N theta||^2
  std::vector<double> compression_values; // tr X from the compression, empty unless requested
  Classification classification = Classification::Inconclusive;
  LineFit fit;                            // values vs ln N
};

/// Fills scan.fit and scan.classification. Needs at least 4 sizes.
Classification classify_divergence(DivergenceScan& scan, const ClassifierConfig& config = {});

DivergenceScan scan_trace_X(const XYParams& p, const std::vector<long>& sizes,
                            const ClassifierConfig& config = {}, bool with_compression = false);

enum class DecayPreference { Exponential, PowerLaw, None };
std::string to_string(DecayPreference d);

/// ln|v| = intercept + slope * k (exponential) or intercept + slope * ln k (power law),
/// fitted on the points with |v| > floor. residual is the rms in ln|v|.
struct DecayFit {
  bool valid = false;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
};

struct ClusterScan {
  std::vector<long> distances;
  std::vector<double> connected;  // <a tau_k(b)> - <a><b>
  DecayFit exponential;
  DecayFit power_law;
  DecayPreference preference = DecayPreference::None;
};

struct ClusterConfig {
  double floor = 1e-12;       // values at or below this are treated as zero and not fitted
  double preference_ratio = 0.5;  // preferred residual <= ratio * alternative residual
};

ClusterScan cluster_scan(const PauliString& a, const PauliString& b, const CovarianceTruncation& cov,
                         long k_max, const ClusterConfig& config = {});
ClusterScan cluster_scan(const PauliString& a, const PauliString& b, const XYParams& p, long k_max,
                         const ClusterConfig& config = {});

/// Smallest window holding a and tau_k(b) for all k in [1, k_max].
Window cluster_window(const PauliString& a, const PauliString& b, long k_max);

}  // namespace fermichain
