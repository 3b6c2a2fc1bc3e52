#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fermichain/lattice.hpp"
#include "fermichain/pfaffian.hpp"
#include "fermichain/xy_covariance.hpp"

namespace fermichain {

/// Finitely supported Pauli word coefficient * prod_j sigma^{(j)}. Identity sites are not stored.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::map<Site, char> letters, cplx coefficient = 1.0);

  /// Parses whitespace-separated tokens such as "X0 Z1 Y-3"; "I" or "" is the identity.
  static PauliString parse(const std::string& text);

  const std::map<Site, char>& letters() const { return letters_; }
  cplx coefficient() const { return coefficient_; }
  bool is_identity() const { return letters_.empty(); }

  /// Even iff the number of X and Y letters is even.
  bool is_even() const;
  /// Support translated by `steps` sites (tau_k).
  PauliString translated(Site steps) const;
  PauliString operator*(const PauliString& o) const;

  std::vector<Site> support() const;
  std::string to_string() const;

 private:
  std::map<Site, char> letters_;
  cplx coefficient_ = 1.0;
};

/// sign * m_{i1} m_{i2} ... with strictly increasing global Majorana indices 2*site + {0,1}.
struct MajoranaMonomial {
  std::vector<long> indices;
  cplx sign = 1.0;
};

/// Normal-orders a Majorana word using m_a m_b = -m_b m_a (a != b) and m_a^2 = 1.
MajoranaMonomial normal_order(std::vector<long> word, cplx coefficient);

/// Jordan-Wigner reduction with the uniform left string c_j = (prod_{k<j} sz_k) s^-_j, i.e.
///   sz_j = i m_{2j} m_{2j+1},  sx_j = Z_{<j} m_{2j},  sy_j = -Z_{<j} m_{2j+1}.
/// Strings are anchored at the leftmost support site; odd strings reduce to nullopt (Zero).
std::optional<MajoranaMonomial> jordan_wigner_reduce(const PauliString& p);

/// Pair value (Gamma h1, A h2) = h1^T S A h2.
cplx pairing_value(const TestVector& h1, const TestVector& h2, const CovarianceTruncation& cov);

/// psi_A(B(h_1) ... B(h_2n)) as the explicit signed sum over the (2n-1)!! pairings.
/// Odd inputs give 0. Throws TooManyFactors above 12 factors.
cplx wick_moment_bruteforce(const std::vector<TestVector>& factors, const CovarianceTruncation& cov);

/// Same moment as the Pfaffian of the antisymmetrized pairing matrix.
cplx moment_pfaffian(const std::vector<TestVector>& factors, const CovarianceTruncation& cov);

/// <m_{i1} ... m_{ik}> for a normal-ordered monomial, from the Majorana form.
cplx majorana_expectation(const MajoranaMonomial& mono, const CovarianceTruncation& cov);

/// <p> in the theta-invariant state whose even part is the quasi-free state of `cov`.
/// Throws SupportOutsideWindow. Returns the real part; imaginary residue only appears for
/// non-hermitian p and is dropped (use pauli_expectation_complex).
double pauli_expectation(const PauliString& p, const CovarianceTruncation& cov);
cplx pauli_expectation_complex(const PauliString& p, const CovarianceTruncation& cov);

/// 2^n x 2^n matrix of a Pauli string on `sites`; sites[0] is the most significant qubit.
CMatrix pauli_matrix(const PauliString& p, const std::vector<Site>& sites);

struct DensityMatrix {
  std::vector<Site> sites;
  CMatrix matrix;    // as reconstructed
  CMatrix repaired;  // negative eigenvalues clipped to 0, renormalized

  Eigen::Index qubits() const { return static_cast<Eigen::Index>(sites.size()); }
  double min_eigenvalue() const;

  /// Wraps an explicit matrix (hermitized) and computes the repaired copy.
  static DensityMatrix from_matrix(std::vector<Site> sites, CMatrix m);
};

constexpr std::size_t kMaxRdmSites = 12;

/// rho = 2^-n sum_P <P> P over all 4^n strings on `sites`.
DensityMatrix reduced_density_matrix(const std::vector<Site>& sites, const CovarianceTruncation& cov);

/// Traces out the qubits at the given positions of the site list.
CMatrix partial_trace(const CMatrix& rho, std::size_t qubits, const std::vector<std::size_t>& traced);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Site>& keep);

/// Reorders the tensor factors: new qubit i is old qubit order[i].
CMatrix permute_qubits(const CMatrix& rho, const std::vector<std::size_t>& order);

}  // namespace fermichain
