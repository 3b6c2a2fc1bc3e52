#include "fermichain/lattice.hpp"

#include <string>

#include "fermichain/errors.hpp"

namespace fermichain {

Window::Window(Site lo, Site hi) : lo_(lo), hi_(hi) {
  if (lo >= hi) {
    throw InvalidArgument("window [" + std::to_string(lo) + ", " + std::to_string(hi) + ") is empty");
  }
}

Eigen::Index Window::index_of(Site s) const {
  if (!contains(s)) {
    throw SiteOutsideWindow("site " + std::to_string(s) + " not in [" + std::to_string(lo_) + ", " +
                            std::to_string(hi_) + ")");
  }
  return static_cast<Eigen::Index>(s - lo_);
}

Window centered_window(Site half_width) { return Window(-half_width, half_width); }

TestVector::TestVector(Window w, CVector a, CVector b) : window(w), f1(std::move(a)), f2(std::move(b)) {
  if (f1.size() != window.length() || f2.size() != window.length()) {
    throw InvalidArgument("test vector components must match the window length");
  }
}

TestVector TestVector::zero(Window w) {
  return TestVector(w, CVector::Zero(w.length()), CVector::Zero(w.length()));
}

TestVector TestVector::delta(Window w, Site site, int component) {
  TestVector v = zero(w);
  (component == 0 ? v.f1 : v.f2)(w.index_of(site)) = 1.0;
  return v;
}

CVector TestVector::doubled() const {
  CVector out(2 * window.length());
  for (Eigen::Index i = 0; i < window.length(); ++i) {
    out(2 * i) = f1(i);
    out(2 * i + 1) = f2(i);
  }
  return out;
}

TestVector TestVector::from_doubled(Window w, const CVector& v) {
  if (v.size() != 2 * w.length()) throw InvalidArgument("doubled vector has wrong length");
  TestVector out = zero(w);
  for (Eigen::Index i = 0; i < w.length(); ++i) {
    out.f1(i) = v(2 * i);
    out.f2(i) = v(2 * i + 1);
  }
  return out;
}

TestVector TestVector::operator+(const TestVector& o) const {
  if (!(window == o.window)) throw InvalidArgument("window mismatch");
  return TestVector(window, f1 + o.f1, f2 + o.f2);
}

TestVector TestVector::operator-(const TestVector& o) const { return *this + o * cplx(-1.0); }

TestVector TestVector::operator*(cplx a) const { return TestVector(window, f1 * a, f2 * a); }

TestVector shift_apply(const TestVector& v, Site steps) {
  // (u^k f)_j = f_{j-k}: data is carried along with the window.
  return TestVector(v.window.translated(steps), v.f1, v.f2);
}

namespace {

template <class Fn>
TestVector sitewise(const TestVector& v, Fn weight) {
  TestVector out = v;
  for (Eigen::Index i = 0; i < v.window.length(); ++i) {
    const double w = weight(v.window.site_at(i));
    out.f1(i) *= w;
    out.f2(i) *= w;
  }
  return out;
}

}  // namespace

TestVector theta_minus_apply(const TestVector& v) {
  return sitewise(v, [](Site j) { return j >= 0 ? 1.0 : -1.0; });
}

TestVector half_projection_apply(const TestVector& v) {
  return sitewise(v, [](Site j) { return j >= 0 ? 1.0 : 0.0; });
}

TestVector gamma_apply(const TestVector& v) {
  return TestVector(v.window, v.f2.conjugate(), v.f1.conjugate());
}

CMatrix operator_matrix(LatticeOperatorKind kind, const Window& w) {
  const Eigen::Index n = w.length();
  CMatrix m = CMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Site j = w.site_at(i);
    for (int a = 0; a < 2; ++a) {
      const Eigen::Index r = 2 * i + a;
      switch (kind) {
        case LatticeOperatorKind::Shift:
          if (i + 1 < n) m(r + 2, r) = 1.0;
          break;
        case LatticeOperatorKind::ThetaMinus:
          m(r, r) = j >= 0 ? 1.0 : -1.0;
          break;
        case LatticeOperatorKind::HalfProjection:
          m(r, r) = j >= 0 ? 1.0 : 0.0;
          break;
        case LatticeOperatorKind::GammaInvolution:
          m(2 * i + (1 - a), r) = 1.0;
          break;
      }
    }
  }
  return m;
}

}  // namespace fermichain
