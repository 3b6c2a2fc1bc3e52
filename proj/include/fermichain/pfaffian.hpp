#pragma once

#include <cmath>
#include <algorithm>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "fermichain/errors.hpp"

namespace fermichain {

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

}  // namespace detail

/// Checks antisymmetry to `tol` (absolute, relative to the largest entry) and even dimension.
template <class Derived>
void check_antisymmetric(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) throw NotAntisymmetric("matrix is not square");
  if (m.rows() % 2 != 0) throw OddDimension("dimension " + std::to_string(m.rows()) + " is odd");
  if (m.rows() == 0) return;
  const double scale = std::max(1.0, static_cast<double>(m.cwiseAbs().maxCoeff()));
  const double err = static_cast<double>((m + m.transpose()).cwiseAbs().maxCoeff());
  if (err > tol * scale) throw NotAntisymmetric("|m + m^T| = " + std::to_string(err));
}

/// Pfaffian by Parlett-Reid tridiagonalization with partial pivoting.
/// Works for real and complex scalars; the input is copied.
template <class Scalar>
Scalar pfaffian(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a, bool check = true) {
  if (check) check_antisymmetric(a);
  const Eigen::Index n = a.rows();
  if (n == 0) return Scalar(1);
  Scalar pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = k + 1;
    double best = detail::magnitude(a(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      const double v = detail::magnitude(a(i, k));
      if (v > best) {
        best = v;
        kp = i;
      }
    }
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == Scalar(0)) return Scalar(0);
    pf *= a(k, k + 1);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
      const Vec tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const Vec col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

inline double pfaffian(const Eigen::MatrixXd& a) { return pfaffian<double>(a); }
inline std::complex<double> pfaffian(const Eigen::MatrixXcd& a) { return pfaffian<std::complex<double>>(a); }

}  // namespace fermichain
