#include "fermichain/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "fermichain/errors.hpp"
#include "fermichain/fit.hpp"
#include "fermichain/parallel.hpp"

namespace fermichain {

// ---------------------------------------------------------------- spectra and entropy

EntanglementSpectrum entanglement_spectrum(const CovarianceTruncation& block_cov) {
  const RVector nu = block_cov.occupations_from_complex();
  EntanglementSpectrum out;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const double v = nu(i);
    if (v < -1e-10 || v > 1.0 + 1e-10) throw NumericalError("occupation " + std::to_string(v) + " outside [0,1]");
    out.occupations.push_back(std::clamp(v, 0.0, 1.0));
  }
  std::sort(out.occupations.begin(), out.occupations.end());
  return out;
}

EntanglementSpectrum entanglement_spectrum(const XYParams& p, const Window& block, long ambient_n,
                                           QuadratureOptions opts) {
  if (!centered_window(ambient_n).contains(block)) {
    throw SupportOutsideWindow("block not inside the ambient window");
  }
  return entanglement_spectrum(build_truncation(p, block, opts));
}

double binary_entropy(double nu) {
  if (nu <= 0.0 || nu >= 1.0) return 0.0;
  return -nu * std::log2(nu) - (1.0 - nu) * std::log2(1.0 - nu);
}

double block_entropy(const EntanglementSpectrum& spectrum) {
  double s = 0.0;
  for (double nu : spectrum.occupations) s += binary_entropy(nu);
  return s;
}

// ---------------------------------------------------------------- Schmidt data

namespace {

// Best-first enumeration of products p1 * prod_{k in S} r_k over subsets S, r sorted descending.
// Each subset is generated once: from (S, last = i) go to S + {i+1} and S - {i} + {i+1}.
template <class Stop>
SchmidtData enumerate_schmidt(const EntanglementSpectrum& spectrum, Stop stop) {
  double top = 1.0;
  std::vector<double> ratios;
  for (double nu : spectrum.occupations) {
    const double hi = std::max(nu, 1.0 - nu), lo = std::min(nu, 1.0 - nu);
    top *= hi;
    if (lo > 0.0) ratios.push_back(lo / hi);
  }
  std::sort(ratios.begin(), ratios.end(), std::greater<>());

  SchmidtData out;
  double mass = top;
  out.probabilities.push_back(top);
  struct Node {
    double value;
    std::size_t last;
    bool operator<(const Node& o) const { return value < o.value; }
  };
  std::priority_queue<Node> heap;
  if (!ratios.empty()) heap.push({top * ratios[0], 0});
  while (!heap.empty() && !stop(out.probabilities.size(), mass)) {
    const Node n = heap.top();
    heap.pop();
    out.probabilities.push_back(n.value);
    mass += n.value;
    if (n.last + 1 < ratios.size()) {
      heap.push({n.value * ratios[n.last + 1], n.last + 1});
      heap.push({n.value / ratios[n.last] * ratios[n.last + 1], n.last + 1});
    }
  }
  out.tail = heap.empty() ? 0.0 : std::max(0.0, 1.0 - mass);
  return out;
}

}  // namespace

SchmidtData schmidt_from_spectrum(const EntanglementSpectrum& spectrum, double tail_bound, std::size_t max_terms) {
  if (!(tail_bound > 0.0 && tail_bound < 1.0)) throw InvalidArgument("tail bound must lie in (0, 1)");
  bool capped = false;
  SchmidtData out = enumerate_schmidt(spectrum, [&](std::size_t count, double mass) {
    if (mass >= 1.0 - tail_bound) return true;
    if (count >= max_terms) {
      capped = true;
      return true;
    }
    return false;
  });
  if (capped) {
    throw TailNotReached(std::to_string(max_terms) + " terms leave mass " + std::to_string(out.tail));
  }
  return out;
}

SchmidtData schmidt_prefix(const EntanglementSpectrum& spectrum, std::size_t count) {
  return enumerate_schmidt(spectrum, [&](std::size_t c, double) { return c >= count; });
}

OneCopy one_copy_exact(const SchmidtData& schmidt) {
  const auto& p = schmidt.probabilities;
  if (p.empty()) throw InvalidArgument("empty Schmidt data");
  constexpr double slack = 1e-12;
  const auto d_max = static_cast<std::int64_t>(std::floor(1.0 / p.front() + slack));
  for (std::int64_t d = d_max; d >= 2; --d) {
    bool ok = true;
    double partial = 0.0;
    for (std::int64_t k = 1; k <= d && ok; ++k) {
      const double bound = static_cast<double>(k) / static_cast<double>(d) + slack;
      if (static_cast<std::size_t>(k) <= p.size()) {
        partial += p[static_cast<std::size_t>(k - 1)];
        ok = partial <= bound;
      } else if (partial + schmidt.tail > bound) {
        // Unknown entries could push the partial sum past the bound.
        throw TailTooLarge("tail " + std::to_string(schmidt.tail) + " undecides d = " + std::to_string(d));
      }
    }
    if (ok) return OneCopy{d, std::log2(static_cast<double>(d))};
  }
  return OneCopy{1, 0.0};
}

OneCopyScan one_copy_scan(const XYParams& p, const std::vector<long>& lengths, long ambient_n) {
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (lengths[i] <= lengths[i - 1]) throw InvalidArgument("lengths must be ascending");
  }
  OneCopyScan scan;
  scan.params = p;
  scan.rows.resize(lengths.size());
  const SymbolCoefficients coeffs(p);
  parallel_for(lengths.size(), [&](std::size_t i) {
    const long l = lengths[i];
    const Window block(0, l);
    if (!centered_window(ambient_n).contains(block)) throw SupportOutsideWindow("block exceeds ambient window");
    const EntanglementSpectrum spec = entanglement_spectrum(build_truncation(coeffs, block));
    OneCopyRow row;
    row.length = l;
    row.entropy = block_entropy(spec);
    // Only the first floor(1/p1) probabilities enter the majorization test.
    const SchmidtData head = schmidt_prefix(spec, 1);
    const auto need = static_cast<std::size_t>(std::floor(1.0 / head.probabilities.front() + 1e-12)) + 1;
    const OneCopy oc = one_copy_exact(schmidt_prefix(spec, need));
    row.d = oc.d;
    row.e1 = oc.e1;
    row.largest = head.probabilities.front();
    scan.rows[i] = row;
  });
  if (lengths.size() >= 2) {
    std::vector<double> x, s, e;
    for (const auto& r : scan.rows) {
      x.push_back(std::log2(static_cast<double>(r.length)));
      s.push_back(r.entropy);
      e.push_back(r.e1);
    }
    scan.entropy_slope = fit_line(x, s).slope;
    scan.e1_slope = fit_line(x, e).slope;
  }
  return scan;
}

EntropyScan entropy_scan(const XYParams& p, const std::vector<long>& lengths, long ambient_n) {
  EntropyScan scan;
  scan.params = p;
  scan.lengths = lengths;
  scan.entropy.resize(lengths.size());
  const SymbolCoefficients coeffs(p);
  parallel_for(lengths.size(), [&](std::size_t i) {
    const Window block(0, lengths[i]);
    if (!centered_window(ambient_n).contains(block)) throw SupportOutsideWindow("block exceeds ambient window");
    scan.entropy[i] = block_entropy(entanglement_spectrum(build_truncation(coeffs, block)));
  });
  if (lengths.size() >= 2) {
    std::vector<double> x;
    for (long l : lengths) x.push_back(std::log2(static_cast<double>(l)));
    const LineFit f = fit_line(x, scan.entropy);
    scan.slope = f.slope;
    scan.intercept = f.intercept;
    scan.max_rel_residual = f.max_rel_residual;
  }
  return scan;
}

// ---------------------------------------------------------------- negativity

CMatrix partial_transpose(const CMatrix& rho, std::size_t qubits, const std::vector<std::size_t>& transposed) {
  std::size_t mask = 0;
  for (std::size_t q : transposed) mask |= std::size_t{1} << (qubits - 1 - q);
  const Eigen::Index dim = rho.rows();
  CMatrix out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto ur = static_cast<std::size_t>(r), uc = static_cast<std::size_t>(c);
      const std::size_t nr = (ur & ~mask) | (uc & mask);
      const std::size_t nc = (uc & ~mask) | (ur & mask);
      out(r, c) = rho(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
    }
  }
  return out;
}

namespace {

// Positions (in rho.sites) of the qubits not in group A; validates group A.
std::vector<std::size_t> complement_positions(const DensityMatrix& rho, const std::vector<Site>& group_a) {
  for (Site s : group_a) {
    if (std::find(rho.sites.begin(), rho.sites.end(), s) == rho.sites.end()) {
      throw SiteOutsideWindow("cut site " + std::to_string(s) + " not in density matrix");
    }
  }
  std::vector<std::size_t> b;
  for (std::size_t q = 0; q < rho.sites.size(); ++q) {
    if (std::find(group_a.begin(), group_a.end(), rho.sites[q]) == group_a.end()) b.push_back(q);
  }
  return b;
}

}  // namespace

double log_negativity(const DensityMatrix& rho, const std::vector<Site>& group_a) {
  const auto b = complement_positions(rho, group_a);
  const CMatrix pt = partial_transpose(rho.matrix, rho.sites.size(), b);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return std::max(0.0, std::log2(trace_norm));
}

// ---------------------------------------------------------------- singlet fidelity

namespace {

CMatrix polar_isometry(const CMatrix& g) {
  Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(rows, cols);
}

// Psi = V_A V_B^T / sqrt(d), vectorized row-major over (a, b); rho acts on that vector.
CMatrix rho_times_psi(const CMatrix& rho, const CMatrix& va, const CMatrix& vb) {
  const Eigen::Index da = va.rows(), db = vb.rows();
  const double d = static_cast<double>(va.cols());
  const CMatrix psi = va * vb.transpose() / std::sqrt(d);
  CVector vec(da * db);
  for (Eigen::Index a = 0; a < da; ++a) vec.segment(a * db, db) = psi.row(a).transpose();
  const CVector out = rho * vec;
  CMatrix m(da, db);
  for (Eigen::Index a = 0; a < da; ++a) m.row(a) = out.segment(a * db, db).transpose();
  return m;
}

struct SeesawRun {
  double value;
  CMatrix va, vb;
  bool converged;
  int iterations;
};

SeesawRun seesaw(const CMatrix& rho, CMatrix va, CMatrix vb, const SeesawOptions& opt) {
  double value = singlet_overlap(rho, va, vb);
  const double d = static_cast<double>(va.cols());
  for (int it = 1; it <= opt.max_iterations; ++it) {
    // dF/d conj(V_A) = (rho Psi) conj(V_B) / sqrt(d); F is convex in each factor, so the
    // polar maximizer of Re tr(V^dag G) never lowers F.
    CMatrix rp = rho_times_psi(rho, va, vb);
    const CMatrix ga = rp * vb.conjugate() / std::sqrt(d);
    if (ga.norm() > 0.0) va = polar_isometry(ga);
    rp = rho_times_psi(rho, va, vb);
    const CMatrix gb = rp.transpose() * va.conjugate() / std::sqrt(d);
    if (gb.norm() > 0.0) vb = polar_isometry(gb);
    const double next = singlet_overlap(rho, va, vb);
    const bool stalled = std::abs(next - value) <= opt.tolerance;
    value = std::max(value, next);
    if (stalled) return {value, va, vb, true, it};
  }
  return {value, va, vb, false, opt.max_iterations};
}

}  // namespace

double singlet_overlap(const CMatrix& rho_ab, const CMatrix& va, const CMatrix& vb) {
  const Eigen::Index da = va.rows(), db = vb.rows();
  const double d = static_cast<double>(va.cols());
  const CMatrix psi = va * vb.transpose() / std::sqrt(d);
  CVector vec(da * db);
  for (Eigen::Index a = 0; a < da; ++a) vec.segment(a * db, db) = psi.row(a).transpose();
  return (vec.adjoint() * rho_ab * vec)(0, 0).real();
}

SingletFidelity singlet_fidelity(const DensityMatrix& rho, const std::vector<Site>& group_a, int d,
                                 const SeesawOptions& options,
                                 const std::optional<std::pair<CMatrix, CMatrix>>& warm_start) {
  if (d < 1) throw InvalidArgument("target dimension d must be positive");
  const auto b_pos = complement_positions(rho, group_a);
  std::vector<std::size_t> order;
  for (Site s : group_a) {
    order.push_back(static_cast<std::size_t>(std::find(rho.sites.begin(), rho.sites.end(), s) - rho.sites.begin()));
  }
  order.insert(order.end(), b_pos.begin(), b_pos.end());
  const CMatrix rho_ab = permute_qubits(rho.repaired, order);
  const Eigen::Index da = Eigen::Index{1} << group_a.size();
  const Eigen::Index db = Eigen::Index{1} << b_pos.size();
  if (da < d || db < d) throw InvalidArgument("each side of the cut needs dimension >= d");

  std::vector<std::pair<CMatrix, CMatrix>> starts;
  if (warm_start && warm_start->first.rows() == da && warm_start->second.rows() == db &&
      warm_start->first.cols() == d && warm_start->second.cols() == d) {
    starts.push_back(*warm_start);
  }
  for (int s = 0; s < options.random_starts; ++s) {
    std::mt19937_64 rng(options.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s + 1));
    CMatrix va = random_isometry(da, d, rng);
    CMatrix vb = random_isometry(db, d, rng);
    starts.emplace_back(std::move(va), std::move(vb));
  }
  std::vector<SeesawRun> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    runs[i] = seesaw(rho_ab, starts[i].first, starts[i].second, options);
  });
  SingletFidelity best;
  best.fidelity = -1.0;
  for (const auto& r : runs) {
    best.converged = best.converged || r.converged;
    best.iterations = std::max(best.iterations, r.iterations);
    if (r.value > best.fidelity) {
      best.fidelity = r.value;
      best.isometry_a = r.va;
      best.isometry_b = r.vb;
    }
  }
  return best;
}

RdmSource xy_rdm_source(const XYParams& p, QuadratureOptions opts) {
  auto coeffs = std::make_shared<SymbolCoefficients>(p, opts);
  return [coeffs](const std::vector<Site>& sites) {
    const auto [lo, hi] = std::minmax_element(sites.begin(), sites.end());
    return reduced_density_matrix(sites, build_truncation(*coeffs, Window(*lo, *hi + 1)));
  };
}

LocalizationResult localization_length(const RdmSource& source, long M, long N, double epsilon, long L_max,
                                       const SeesawOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (N < 0) throw InvalidArgument("distance N must be non-negative");
  if (L_max < 1 || 2 * static_cast<std::size_t>(L_max) > kMaxRdmSites) {
    throw TooManySites("2 * L_max must be at most " + std::to_string(kMaxRdmSites));
  }
  LocalizationResult res;
  res.M = M;
  res.N = N;
  res.epsilon = epsilon;
  res.L_max = L_max;
  std::optional<std::pair<CMatrix, CMatrix>> warm;
  double achieved = 0.0;
  for (long l = 1; l <= L_max; ++l) {
    std::vector<Site> left, sites;
    for (Site s = M - l; s < M; ++s) left.push_back(s);
    sites = left;
    for (Site s = M + N; s < M + N + l; ++s) sites.push_back(s);
    const DensityMatrix rho = source(sites);
    SingletFidelity sf = singlet_fidelity(rho, left, 2, options, warm);
    res.optimized_per_L.push_back(sf.fidelity);
    achieved = std::max(achieved, sf.fidelity);
    res.fidelity_per_L.push_back(achieved);
    // Warm start for L + 1: new site M - L - 1 is the leading qubit of A, M + N + L the trailing one of B.
    const CMatrix e0 = CMatrix::Identity(2, 1);
    warm = std::make_pair(CMatrix(Eigen::kroneckerProduct(e0, sf.isometry_a)),
                          CMatrix(Eigen::kroneckerProduct(sf.isometry_b, e0)));
    res.extraction.push_back(std::move(sf));
    if (!res.L_star && achieved >= 1.0 - epsilon) res.L_star = l;
  }
  return res;
}

}  // namespace fermichain
