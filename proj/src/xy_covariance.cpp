#include "fermichain/xy_covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fermichain/errors.hpp"

namespace fermichain {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularK = 1e-14;
const cplx kI(0.0, 1.0);

}  // namespace

bool XYParams::is_critical() const {
  const bool on_field_line = std::abs(std::abs(lambda) - 1.0) == 0.0 && gamma != 0.0;
  const bool isotropic = std::abs(lambda) < 1.0 && gamma == 0.0;
  return on_field_line || isotropic;
}

std::string XYParams::regime() const {
  if (is_critical()) return "critical";
  if (std::abs(lambda) > 1.0) return "gapped";
  return "theta-invariant ground state sector";
}

double dispersion(const XYParams& p, double x) {
  const double a = std::cos(x) - p.lambda;
  const double b = p.gamma * std::sin(x);
  return std::sqrt(a * a + b * b);
}

Block2 symbol_generator(const XYParams& p, double x) {
  const double a = std::cos(x) - p.lambda;
  const double s = p.gamma * std::sin(x);
  Block2 k;
  k << a, -kI * s, kI * s, -a;
  return k;
}

Block2 symbol_eval(const XYParams& p, double x) {
  const double k = dispersion(p, x);
  if (k <= kSingularK) {
    std::ostringstream msg;
    msg << "k(x) = " << k << " at x = " << x << " (gamma=" << p.gamma << ", lambda=" << p.lambda << ")";
    throw SymbolSingular(msg.str());
  }
  return 0.5 * (Block2::Identity() + symbol_generator(p, x) / k);
}

SymbolCoefficients::SymbolCoefficients(const XYParams& p, QuadratureOptions opts)
    : params_(p), opts_(opts) {
  if (opts.log2_grid < 2 || opts.log2_grid > 24) throw InvalidArgument("log2_grid out of range");
  for (int level = 0; level < 2; ++level) {
    const std::size_t g = std::size_t{1} << (opts.log2_grid + level);
    samples_[level].resize(g);
    for (std::size_t k = 0; k < g; ++k) {
      const double x = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(g);
      samples_[level][k] = symbol_eval(p, x);
    }
    twiddles_[level].resize(2 * g);
    for (std::size_t m = 0; m < 2 * g; ++m) {
      twiddles_[level][m] = std::polar(1.0, -kPi * static_cast<double>(m) / static_cast<double>(g));
    }
  }
}

Block2 SymbolCoefficients::on_grid(long d, int level) const {
  const auto& samples = samples_[level];
  const auto& tw = twiddles_[level];
  const long g = static_cast<long>(samples.size());
  const long period = 2 * g;
  // x_k = pi (2k + 1) / G, so exp(-i d x_k) = tw[d (2k + 1) mod 2G].
  long step = (2 * d) % period;
  if (step < 0) step += period;
  long m = d % period;
  if (m < 0) m += period;
  Block2 acc = Block2::Zero();
  for (long k = 0; k < g; ++k) {
    acc += tw[static_cast<std::size_t>(m)] * samples[static_cast<std::size_t>(k)];
    m += step;
    if (m >= period) m -= period;
  }
  return acc / static_cast<double>(g);
}

double SymbolCoefficients::error_estimate(long d) const {
  return (on_grid(d, 0) - on_grid(d, 1)).cwiseAbs().maxCoeff();
}

Block2 SymbolCoefficients::block(long d) const {
  const Block2 coarse = on_grid(d, 0);
  const Block2 fine = on_grid(d, 1);
  const double err = (coarse - fine).cwiseAbs().maxCoeff();
  if (err > opts_.tolerance) {
    std::ostringstream msg;
    msg << "C(" << d << ") grid disagreement " << err << " exceeds " << opts_.tolerance;
    throw QuadratureNotConverged(msg.str());
  }
  return fine;
}

Block2 covariance_block(const XYParams& p, long d, QuadratureOptions opts) {
  return SymbolCoefficients(p, opts).block(d);
}

TestVector majorana_test_vector(const Window& w, Site site, int which) {
  TestVector h = TestVector::zero(w);
  const Eigen::Index i = w.index_of(site);
  if (which == 0) {
    h.f1(i) = 1.0;
    h.f2(i) = 1.0;
  } else {
    h.f1(i) = kI;
    h.f2(i) = -kI;
  }
  return h;
}

namespace {

CMatrix swap_matrix(Eigen::Index dim) {
  CMatrix s = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; i += 2) {
    s(i, i + 1) = 1.0;
    s(i + 1, i) = 1.0;
  }
  return s;
}

}  // namespace

RMatrix majorana_from_complex(const CMatrix& a) {
  const Eigen::Index dim = a.rows();
  if (dim % 2 != 0 || a.cols() != dim) throw InvalidArgument("complex form must be square with even dimension");
  // Columns of h are the doubled test vectors of m_0, m_1, ...
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim / 2; ++i) {
    h(2 * i, 2 * i) = 1.0;
    h(2 * i + 1, 2 * i) = 1.0;
    h(2 * i, 2 * i + 1) = kI;
    h(2 * i + 1, 2 * i + 1) = -kI;
  }
  const CMatrix g = h.transpose() * swap_matrix(dim) * a * h;
  CMatrix m = kI * (g - CMatrix::Identity(dim, dim));
  RMatrix real = m.real();
  return 0.5 * (real - real.transpose());
}

CovarianceTruncation CovarianceTruncation::from_complex_form(Window w, CMatrix a) {
  if (a.rows() != 2 * w.length() || a.cols() != 2 * w.length()) {
    throw InvalidArgument("complex form dimension does not match window");
  }
  RMatrix m = majorana_from_complex(a);
  return CovarianceTruncation{w, std::move(a), std::move(m)};
}

RVector CovarianceTruncation::occupations_from_complex() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(complex_form, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();  // ascending
  const Eigen::Index n = window.length();
  return ev.tail(n);
}

RVector CovarianceTruncation::occupations_from_majorana() const {
  // iM is hermitian with spectrum +-mu_k.
  const CMatrix im = cplx(0.0, 1.0) * majorana_form.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(im, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const Eigen::Index n = window.length();
  RVector nu = (RVector::Ones(n) + ev.tail(n)) / 2.0;
  std::sort(nu.data(), nu.data() + n);
  return nu;
}

CovarianceTruncation build_truncation(const SymbolCoefficients& coeffs, const Window& w) {
  const Eigen::Index n = w.length();
  std::vector<Block2> blocks(static_cast<std::size_t>(2 * n - 1));
  for (long d = -(n - 1); d <= n - 1; ++d) blocks[static_cast<std::size_t>(d + n - 1)] = coeffs.block(d);
  CMatrix a(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      a.block<2, 2>(2 * j, 2 * k) = blocks[static_cast<std::size_t>(j - k + n - 1)];
    }
  }
  return CovarianceTruncation::from_complex_form(w, std::move(a));
}

CovarianceTruncation build_truncation(const XYParams& p, const Window& w, QuadratureOptions opts) {
  return build_truncation(SymbolCoefficients(p, opts), w);
}

CMatrix ring_projection(const XYParams& p, const Window& w) {
  const Eigen::Index n = w.length();
  std::vector<Block2> samples(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < n; ++m) {
    samples[static_cast<std::size_t>(m)] = symbol_eval(p, 2.0 * kPi * (m + 0.5) / static_cast<double>(n));
  }
  std::vector<Block2> blocks(static_cast<std::size_t>(n));
  for (Eigen::Index d = 0; d < n; ++d) {
    Block2 acc = Block2::Zero();
    for (Eigen::Index m = 0; m < n; ++m) {
      // d (2m + 1) reduced mod 2n keeps the phase argument small.
      const long long arg = (static_cast<long long>(d) * (2 * m + 1)) % (2 * n);
      acc += std::polar(1.0, -kPi * static_cast<double>(arg) / static_cast<double>(n)) *
             samples[static_cast<std::size_t>(m)];
    }
    blocks[static_cast<std::size_t>(d)] = acc / static_cast<double>(n);
  }
  // Antiperiodic offset: C(d - n) = -C(d), so index by (j - k) directly.
  CMatrix e(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index d = j - k;
      e.block<2, 2>(2 * j, 2 * k) = d >= 0 ? blocks[static_cast<std::size_t>(d)]
                                           : Block2(-blocks[static_cast<std::size_t>(d + n)]);
    }
  }
  return 0.5 * (e + e.adjoint());
}

CMatrix gamma_conjugate(const CMatrix& a) {
  const CMatrix s = swap_matrix(a.rows());
  return s * a.conjugate() * s;
}

}  // namespace fermichain
