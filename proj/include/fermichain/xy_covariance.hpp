#pragma once

#include <string>
#include <vector>

#include "fermichain/lattice.hpp"

namespace fermichain {

/// Anisotropy gamma and transverse field lambda of the XY chain
///   H = -sum_j (1+gamma) sx_j sx_{j+1} + (1-gamma) sy_j sy_{j+1} + 2 lambda sz_j.
struct XYParams {
  double gamma = 0.0;
  double lambda = 0.0;

  /// |lambda| = 1 with gamma != 0, or |lambda| < 1 with gamma = 0.
  bool is_critical() const;
  /// "critical", "gapped" (|lambda| > 1) or "theta-invariant ground state sector"
  /// for the symmetry-broken region |lambda| < 1, gamma != 0.
  std::string regime() const;
};

using Block2 = Eigen::Matrix2cd;

/// k(x) = sqrt((cos x - lambda)^2 + gamma^2 sin^2 x).
double dispersion(const XYParams& p, double x);

/// K(x) = [[cos x - lambda, -i gamma sin x], [i gamma sin x, -(cos x - lambda)]].
Block2 symbol_generator(const XYParams& p, double x);

/// Momentum-space basis projection E(x) = (1 + K(x)/k(x)) / 2.
/// Throws SymbolSingular when k(x) vanishes (|k| <= 1e-14).
Block2 symbol_eval(const XYParams& p, double x);

struct QuadratureOptions {
  int log2_grid = 14;        // base grid 2^14 points, compared against one doubling
  double tolerance = 1e-6;   // max-abs disagreement allowed between the two grids
};

/// Fourier coefficients C(d) = (2 pi)^-1 int e^{-i d x} E(x) dx on a half-step offset
/// midpoint grid. Samples are cached; coefficients are computed on demand.
class SymbolCoefficients {
 public:
  explicit SymbolCoefficients(const XYParams& p, QuadratureOptions opts = {});

  const XYParams& params() const { return params_; }
  const QuadratureOptions& options() const { return opts_; }

  /// Value on the refined grid. Throws QuadratureNotConverged if the base grid disagrees
  /// by more than the tolerance.
  Block2 block(long d) const;
  /// Base-grid vs refined-grid disagreement for C(d).
  double error_estimate(long d) const;

 private:
  Block2 on_grid(long d, int level) const;

  XYParams params_;
  QuadratureOptions opts_;
  // samples_[0]: base grid, samples_[1]: doubled grid; twiddles_[l][m] = exp(-i pi m / G_l).
  std::vector<Block2> samples_[2];
  std::vector<cplx> twiddles_[2];
};

Block2 covariance_block(const XYParams& p, long d, QuadratureOptions opts = {});

/// Finite compression of a covariance to a window, complex (particle/hole) and Majorana forms.
///
/// complex_form uses the interleaved doubled index 2*(site - lo) + component and satisfies
///   psi(B(h1) B(h2)) = h1^T S A h2,
/// with S the component swap, so that A[2j+1, 2k+1] = <c_j* c_k> and A[2j, 2k] = <c_j c_k*>.
///
/// majorana_form uses m_{2j} = c_j + c_j*, m_{2j+1} = -i (c_j - c_j*) and
///   M_ab = (i/2) <[m_a, m_b]>,   so <m_a m_b> = delta_ab - i M_ab.
struct CovarianceTruncation {
  Window window;
  CMatrix complex_form;
  RMatrix majorana_form;

  /// Derives the Majorana form from a complex form given in the convention above.
  static CovarianceTruncation from_complex_form(Window w, CMatrix a);

  /// Single-mode occupations nu_k >= 1/2, one per site, from the complex form.
  RVector occupations_from_complex() const;
  /// Same quantity from the Majorana form: nu = (1 + |mu|) / 2, mu eigenvalues of iM.
  RVector occupations_from_majorana() const;
};

/// Complex pairing matrix G_ab = <m_a m_b> -> real antisymmetric M.
RMatrix majorana_from_complex(const CMatrix& a);

/// Test vectors h with B(h) = m_{2j + a}.
TestVector majorana_test_vector(const Window& w, Site site, int which);

/// Block-Toeplitz compression of E to the window.
CovarianceTruncation build_truncation(const XYParams& p, const Window& w, QuadratureOptions opts = {});
CovarianceTruncation build_truncation(const SymbolCoefficients& coeffs, const Window& w);

/// Basis projection of the periodic ring formed by the window's sites: E(x) sampled at the
/// n = |window| momenta x_m = 2 pi (m + 1/2) / n. Exactly idempotent and Gamma-compatible.
CMatrix ring_projection(const XYParams& p, const Window& w);

/// S conj(A) S on the doubled index space (the matrix of Gamma A Gamma).
CMatrix gamma_conjugate(const CMatrix& a);

}  // namespace fermichain
