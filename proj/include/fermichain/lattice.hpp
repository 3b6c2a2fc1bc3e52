#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace fermichain {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

using Site = std::int64_t;

/// Half-open interval of lattice sites [lo, hi). Site 0 belongs to the right half chain.
class Window {
 public:
  Window(Site lo, Site hi);

  Site lo() const { return lo_; }
  Site hi() const { return hi_; }
  Eigen::Index length() const { return static_cast<Eigen::Index>(hi_ - lo_); }

  bool contains(Site s) const { return s >= lo_ && s < hi_; }
  bool contains(const Window& other) const { return other.lo_ >= lo_ && other.hi_ <= hi_; }
  Eigen::Index index_of(Site s) const;
  Site site_at(Eigen::Index i) const { return lo_ + static_cast<Site>(i); }
  Window translated(Site steps) const { return Window(lo_ + steps, hi_ + steps); }

  bool operator==(const Window&) const = default;

 private:
  Site lo_;
  Site hi_;
};

/// Symmetric window [-N, N) with the half-chain split at its center.
Window centered_window(Site half_width);

/// Element h = f1 (+) f2 of the doubled test-function space, restricted to a window.
/// f1 is the creation component, f2 the annihilation component: B(h) = c*(f1) + c(f2).
struct TestVector {
  Window window;
  CVector f1;
  CVector f2;

  TestVector(Window w, CVector a, CVector b);

  static TestVector zero(Window w);
  /// Unit vector at `site` in component 0 (f1) or 1 (f2).
  static TestVector delta(Window w, Site site, int component);

  /// Interleaved coordinates: entry 2*(site - lo) + component.
  CVector doubled() const;
  static TestVector from_doubled(Window w, const CVector& v);

  TestVector operator+(const TestVector& o) const;
  TestVector operator-(const TestVector& o) const;
  TestVector operator*(cplx a) const;
};

enum class LatticeOperatorKind { Shift, ThetaMinus, HalfProjection, GammaInvolution };

TestVector shift_apply(const TestVector& v, Site steps);
TestVector theta_minus_apply(const TestVector& v);
TestVector half_projection_apply(const TestVector& v);
TestVector gamma_apply(const TestVector& v);

/// Dense matrix of an operator on the doubled index space of `w`.
/// Shift is the one-step shift truncated to the window (mass leaving at hi is dropped).
/// GammaInvolution is antilinear; the returned matrix S is its linear part, Gamma v = S conj(v).
CMatrix operator_matrix(LatticeOperatorKind kind, const Window& w);

}  // namespace fermichain
