#include "fermichain/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fermichain/errors.hpp"
#include "fermichain/parallel.hpp"

namespace fermichain {

namespace {

// +1 on doubled indices of sites >= 0, -1 elsewhere.
RVector theta_signs(const Window& w) {
  RVector s(2 * w.length());
  for (Eigen::Index i = 0; i < w.length(); ++i) {
    const double v = w.site_at(i) >= 0 ? 1.0 : -1.0;
    s(2 * i) = v;
    s(2 * i + 1) = v;
  }
  return s;
}

void check_square(const CMatrix& e, const Window& w) {
  if (e.rows() != 2 * w.length() || e.cols() != 2 * w.length()) {
    throw InvalidArgument("operator dimension does not match window");
  }
}

Window checked_window(long half_width) {
  if (half_width < 2) throw InvalidArgument("half width N must be >= 2");
  return centered_window(half_width);
}

}  // namespace

double trace_X_of(const CMatrix& e, const Window& w) {
  check_square(e, w);
  const RVector s = theta_signs(w);
  // tr(Y - Y^2) for Y = PEP and Y = QEQ, with R = E in the last term of X.
  // tr(Y^2) = sum_ij Y_ij Y_ji, restricted to the indices where Y is supported.
  double total = 0.0;
  for (double side : {1.0, -1.0}) {
    cplx tr = 0.0, tr_sq = 0.0;
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
      if (s(i) != side) continue;
      tr += e(i, i);
      for (Eigen::Index j = 0; j < e.cols(); ++j) {
        if (s(j) == side) tr_sq += e(i, j) * e(j, i);
      }
    }
    total += (tr - tr_sq).real();
  }
  return total;
}

double hs_norm_E_minus_F_of(const CMatrix& e, const Window& w) {
  check_square(e, w);
  const RVector s = theta_signs(w);
  CMatrix f = e;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      if (s(i) != s(j)) f(i, j) = 0.0;
    }
  }
  return (e - f).squaredNorm();
}

double hs_norm_theta_conjugation_of(const CMatrix& e, const Window& w) {
  check_square(e, w);
  const RVector s = theta_signs(w);
  const CMatrix conj = s.cast<cplx>().asDiagonal() * e * s.cast<cplx>().asDiagonal();
  return (e - conj).squaredNorm();
}

double trace_X(const XYParams& p, long half_width) {
  const Window w = checked_window(half_width);
  return trace_X_of(ring_projection(p, w), w);
}

double hs_norm_E_minus_F(const XYParams& p, long half_width) {
  const Window w = checked_window(half_width);
  return hs_norm_E_minus_F_of(ring_projection(p, w), w);
}

double hs_norm_theta_conjugation(const XYParams& p, long half_width) {
  const Window w = checked_window(half_width);
  return hs_norm_theta_conjugation_of(ring_projection(p, w), w);
}

double trace_X_compression(const XYParams& p, long half_width, QuadratureOptions opts) {
  const Window w = checked_window(half_width);
  return trace_X_of(build_truncation(p, w, opts).complex_form, w);
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Diverging: return "Diverging";
    case Classification::Converging: return "Converging";
    default: return "Inconclusive";
  }
}

std::string to_string(DecayPreference d) {
  switch (d) {
    case DecayPreference::Exponential: return "exponential";
    case DecayPreference::PowerLaw: return "power-law";
    default: return "none";
  }
}

Classification classify_divergence(DivergenceScan& scan, const ClassifierConfig& config) {
  const auto& v = scan.values;
  if (scan.sizes.size() != v.size() || v.size() < 4) {
    throw InvalidArgument("divergence classification needs at least 4 sizes");
  }
  for (std::size_t i = 1; i < scan.sizes.size(); ++i) {
    if (scan.sizes[i] <= scan.sizes[i - 1]) throw InvalidArgument("sizes must be strictly increasing");
  }
  std::vector<double> logs;
  for (long n : scan.sizes) logs.push_back(std::log(static_cast<double>(n)));
  scan.fit = fit_line(logs, v);

  const std::size_t m = v.size();
  const double first_diff = std::abs(v[1] - v[0]);
  const double last_diff = std::abs(v[m - 1] - v[m - 2]);
  if (last_diff < config.converge_tol && last_diff <= first_diff) {
    scan.classification = Classification::Converging;
  } else if (scan.fit.slope > config.min_slope && scan.fit.max_rel_residual < config.max_residual) {
    scan.classification = Classification::Diverging;
  } else {
    scan.classification = Classification::Inconclusive;
  }
  return scan.classification;
}

DivergenceScan scan_trace_X(const XYParams& p, const std::vector<long>& sizes, const ClassifierConfig& config,
                            bool with_compression) {
  DivergenceScan scan;
  scan.params = p;
  scan.sizes = sizes;
  const std::size_t m = sizes.size();
  scan.values.resize(m);
  scan.hs_E_minus_F.resize(m);
  scan.hs_theta.resize(m);
  if (with_compression) scan.compression_values.resize(m);
  parallel_for(m, [&](std::size_t i) {
    const Window w = checked_window(sizes[i]);
    const CMatrix e = ring_projection(p, w);
    scan.values[i] = trace_X_of(e, w);
    scan.hs_E_minus_F[i] = hs_norm_E_minus_F_of(e, w);
    scan.hs_theta[i] = hs_norm_theta_conjugation_of(e, w);
    if (with_compression) scan.compression_values[i] = trace_X_compression(p, sizes[i]);
  });
  for (double v : scan.values) {
    if (!std::isfinite(v) || v < -1e-10) throw NumericalError("tr X value " + std::to_string(v) + " is invalid");
  }
  classify_divergence(scan, config);
  return scan;
}

// ---------------------------------------------------------------- cluster properties

Window cluster_window(const PauliString& a, const PauliString& b, long k_max) {
  if (a.is_identity() && b.is_identity()) return Window(0, 1);
  Site lo = std::numeric_limits<Site>::max(), hi = std::numeric_limits<Site>::min();
  for (Site s : a.support()) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  for (Site s : b.support()) {
    lo = std::min(lo, s);
    hi = std::max(hi, s + k_max);
  }
  return Window(lo, hi + 1);
}

namespace {

DecayFit fit_decay(const std::vector<long>& ks, const std::vector<double>& values, bool power, double floor) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (std::abs(values[i]) > floor) {
      x.push_back(power ? std::log(static_cast<double>(ks[i])) : static_cast<double>(ks[i]));
      y.push_back(std::log(std::abs(values[i])));
    }
  }
  DecayFit f;
  f.points = x.size();
  if (x.size() < 3) return f;
  const LineFit lf = fit_line(x, y);
  f.valid = true;
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.residual = lf.rms_residual;
  return f;
}

}  // namespace

ClusterScan cluster_scan(const PauliString& a, const PauliString& b, const CovarianceTruncation& cov, long k_max,
                         const ClusterConfig& config) {
  if (k_max < 1) throw InvalidArgument("k_max must be >= 1");
  if (!cov.window.contains(cluster_window(a, b, k_max))) {
    throw SupportOutsideWindow("cluster scan does not fit in the covariance window");
  }
  ClusterScan scan;
  const double ea = pauli_expectation(a, cov);
  const double eb = pauli_expectation(b, cov);
  scan.distances.resize(static_cast<std::size_t>(k_max));
  scan.connected.resize(static_cast<std::size_t>(k_max));
  parallel_for(static_cast<std::size_t>(k_max), [&](std::size_t i) {
    const long k = static_cast<long>(i) + 1;
    scan.distances[i] = k;
    scan.connected[i] = pauli_expectation(a * b.translated(k), cov) - ea * eb;
  });
  scan.exponential = fit_decay(scan.distances, scan.connected, false, config.floor);
  scan.power_law = fit_decay(scan.distances, scan.connected, true, config.floor);
  if (scan.exponential.valid && scan.power_law.valid) {
    if (scan.exponential.residual <= config.preference_ratio * scan.power_law.residual) {
      scan.preference = DecayPreference::Exponential;
    } else if (scan.power_law.residual <= config.preference_ratio * scan.exponential.residual) {
      scan.preference = DecayPreference::PowerLaw;
    }
  }
  return scan;
}

ClusterScan cluster_scan(const PauliString& a, const PauliString& b, const XYParams& p, long k_max,
                         const ClusterConfig& config) {
  return cluster_scan(a, b, build_truncation(p, cluster_window(a, b, k_max)), k_max, config);
}

}  // namespace fermichain
