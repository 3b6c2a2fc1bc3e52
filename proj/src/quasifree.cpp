#include "fermichain/quasifree.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <string_view>

#include <Eigen/Eigenvalues>

#include "fermichain/errors.hpp"
#include "fermichain/parallel.hpp"

namespace fermichain {

namespace {

const cplx kI(0.0, 1.0);

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return kI;
    case 2: return -1.0;
    default: return -kI;
  }
}

// Global Majorana index -> (site, 0/1).
std::pair<Site, int> split_majorana(long idx) {
  const int a = static_cast<int>(((idx % 2) + 2) % 2);
  return {static_cast<Site>((idx - a) / 2), a};
}

}  // namespace

// ---------------------------------------------------------------- PauliString

PauliString::PauliString(std::map<Site, char> letters, cplx coefficient) : coefficient_(coefficient) {
  for (auto [site, letter] : letters) {
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
    if (up == 'I') continue;
    if (up != 'X' && up != 'Y' && up != 'Z') {
      throw InvalidArgument(std::string("unknown Pauli letter '") + letter + "'");
    }
    letters_[site] = up;
  }
}

PauliString PauliString::parse(const std::string& text) {
  std::istringstream in(text);
  std::map<Site, char> letters;
  std::string token;
  while (in >> token) {
    if (token == "I" || token == "i") continue;
    if (token.size() < 2) throw InvalidArgument("bad Pauli token '" + token + "'");
    Site site = 0;
    try {
      std::size_t used = 0;
      site = std::stoll(token.substr(1), &used);
      if (used != token.size() - 1) throw InvalidArgument("");
    } catch (const std::exception&) {
      throw InvalidArgument("bad Pauli token '" + token + "'");
    }
    if (letters.count(site)) throw InvalidArgument("site " + std::to_string(site) + " repeated");
    letters[site] = token[0];
  }
  return PauliString(std::move(letters));
}

bool PauliString::is_even() const {
  int odd = 0;
  for (const auto& [site, l] : letters_) odd += (l == 'X' || l == 'Y');
  return odd % 2 == 0;
}

PauliString PauliString::translated(Site steps) const {
  std::map<Site, char> moved;
  for (const auto& [site, l] : letters_) moved[site + steps] = l;
  return PauliString(std::move(moved), coefficient_);
}

PauliString PauliString::operator*(const PauliString& o) const {
  std::map<Site, char> out = letters_;
  cplx coef = coefficient_ * o.coefficient_;
  for (const auto& [site, l] : o.letters_) {
    auto it = out.find(site);
    if (it == out.end()) {
      out[site] = l;
      continue;
    }
    const char a = it->second;
    if (a == l) {
      out.erase(it);
      continue;
    }
    // sigma_a sigma_b = i eps_abc sigma_c
    constexpr std::string_view cyc = "XYZ";
    const int ia = static_cast<int>(cyc.find(a));
    const int ib = static_cast<int>(cyc.find(l));
    const char c = cyc[static_cast<std::size_t>(3 - ia - ib)];
    coef *= ((ib - ia + 3) % 3 == 1) ? kI : -kI;
    it->second = c;
  }
  return PauliString(std::move(out), coef);
}

std::vector<Site> PauliString::support() const {
  std::vector<Site> s;
  for (const auto& [site, l] : letters_) s.push_back(site);
  return s;
}

std::string PauliString::to_string() const {
  std::ostringstream out;
  if (coefficient_ != cplx(1.0)) out << "(" << coefficient_.real() << "," << coefficient_.imag() << ") ";
  if (letters_.empty()) out << "I";
  bool first = true;
  for (const auto& [site, l] : letters_) {
    if (!first) out << ' ';
    out << l << site;
    first = false;
  }
  return out.str();
}

// ---------------------------------------------------------------- Majorana algebra

MajoranaMonomial normal_order(std::vector<long> word, cplx coefficient) {
  // Insertion sort; each transposition of distinct neighbours flips the sign.
  for (std::size_t i = 1; i < word.size(); ++i) {
    for (std::size_t j = i; j > 0 && word[j - 1] > word[j]; --j) {
      std::swap(word[j - 1], word[j]);
      coefficient = -coefficient;
    }
  }
  MajoranaMonomial out;
  out.sign = coefficient;
  for (std::size_t i = 0; i < word.size();) {
    if (i + 1 < word.size() && word[i] == word[i + 1]) {
      i += 2;  // m_a^2 = 1
    } else {
      out.indices.push_back(word[i]);
      ++i;
    }
  }
  return out;
}

std::optional<MajoranaMonomial> jordan_wigner_reduce(const PauliString& p) {
  if (!p.is_even()) return std::nullopt;
  if (p.is_identity()) return MajoranaMonomial{{}, p.coefficient()};
  const Site anchor = p.letters().begin()->first;
  std::vector<long> word;
  cplx coef = p.coefficient();
  int i_powers = 0;
  for (const auto& [site, letter] : p.letters()) {
    if (letter == 'Z') {
      word.push_back(2 * site);
      word.push_back(2 * site + 1);
      ++i_powers;
      continue;
    }
    for (Site k = anchor; k < site; ++k) {
      word.push_back(2 * k);
      word.push_back(2 * k + 1);
      ++i_powers;
    }
    if (letter == 'X') {
      word.push_back(2 * site);
    } else {
      word.push_back(2 * site + 1);
      coef = -coef;
    }
  }
  return normal_order(std::move(word), coef * ipow(i_powers));
}

// ---------------------------------------------------------------- moments

cplx pairing_value(const TestVector& h1, const TestVector& h2, const CovarianceTruncation& cov) {
  if (!(h1.window == cov.window) || !(h2.window == cov.window)) {
    throw InvalidArgument("test vectors must live on the covariance window");
  }
  const CVector a = h1.doubled();
  const CVector b = cov.complex_form * h2.doubled();
  cplx acc = 0.0;
  // (Gamma h1, A h2) = sum over sites of h1_f1 (Ah2)_f2 + h1_f2 (Ah2)_f1
  for (Eigen::Index i = 0; i < a.size(); i += 2) acc += a(i) * b(i + 1) + a(i + 1) * b(i);
  return acc;
}

namespace {

cplx pairing_sum(const CMatrix& w, std::vector<int>& remaining) {
  if (remaining.empty()) return 1.0;
  const int first = remaining.front();
  cplx total = 0.0;
  for (std::size_t j = 1; j < remaining.size(); ++j) {
    const int partner = remaining[j];
    std::vector<int> rest;
    rest.reserve(remaining.size() - 2);
    for (std::size_t k = 1; k < remaining.size(); ++k) {
      if (k != j) rest.push_back(remaining[k]);
    }
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * w(first, partner) * pairing_sum(w, rest);
  }
  return total;
}

CMatrix pairing_matrix(const std::vector<TestVector>& factors, const CovarianceTruncation& cov) {
  const auto n = static_cast<Eigen::Index>(factors.size());
  CMatrix w = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      w(i, j) = pairing_value(factors[static_cast<std::size_t>(i)], factors[static_cast<std::size_t>(j)], cov);
      w(j, i) = -w(i, j);
    }
  }
  return w;
}

}  // namespace

cplx wick_moment_bruteforce(const std::vector<TestVector>& factors, const CovarianceTruncation& cov) {
  if (factors.size() > 12) throw TooManyFactors(std::to_string(factors.size()) + " factors exceed 12");
  if (factors.size() % 2 == 1) return 0.0;
  const CMatrix w = pairing_matrix(factors, cov);
  std::vector<int> idx(factors.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return pairing_sum(w, idx);
}

cplx moment_pfaffian(const std::vector<TestVector>& factors, const CovarianceTruncation& cov) {
  if (factors.size() % 2 == 1) return 0.0;
  return pfaffian<cplx>(pairing_matrix(factors, cov), false);
}

cplx majorana_expectation(const MajoranaMonomial& mono, const CovarianceTruncation& cov) {
  const std::size_t len = mono.indices.size();
  if (len % 2 == 1) return 0.0;
  if (len == 0) return mono.sign;
  std::vector<Eigen::Index> local(len);
  for (std::size_t i = 0; i < len; ++i) {
    const auto [site, a] = split_majorana(mono.indices[i]);
    if (!cov.window.contains(site)) {
      throw SupportOutsideWindow("Majorana mode at site " + std::to_string(site) + " outside window");
    }
    local[i] = 2 * cov.window.index_of(site) + a;
  }
  const auto k = static_cast<Eigen::Index>(len);
  RMatrix sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      sub(i, j) = cov.majorana_form(local[static_cast<std::size_t>(i)], local[static_cast<std::size_t>(j)]);
    }
  }
  // <m_a m_b> = -i M_ab for a != b, so the Pfaffian of the pairing matrix is (-i)^{k/2} Pf(M).
  return mono.sign * ipow(-static_cast<int>(len / 2)) * pfaffian<double>(sub, false);
}

cplx pauli_expectation_complex(const PauliString& p, const CovarianceTruncation& cov) {
  for (const auto& [site, l] : p.letters()) {
    if (!cov.window.contains(site)) {
      throw SupportOutsideWindow("site " + std::to_string(site) + " of " + p.to_string() + " outside window");
    }
  }
  const auto mono = jordan_wigner_reduce(p);
  if (!mono) return 0.0;
  return majorana_expectation(*mono, cov);
}

double pauli_expectation(const PauliString& p, const CovarianceTruncation& cov) {
  return pauli_expectation_complex(p, cov).real();
}

// ---------------------------------------------------------------- density matrices

CMatrix pauli_matrix(const PauliString& p, const std::vector<Site>& sites) {
  const std::size_t n = sites.size();
  if (n > 16) throw TooManySites("pauli_matrix on more than 16 qubits");
  std::uint64_t xmask = 0, zmask = 0;
  int y_count = 0;
  for (const auto& [site, l] : p.letters()) {
    const auto it = std::find(sites.begin(), sites.end(), site);
    if (it == sites.end()) throw SupportOutsideWindow("site " + std::to_string(site) + " not in site list");
    const std::size_t q = static_cast<std::size_t>(it - sites.begin());
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    if (l == 'X' || l == 'Y') xmask |= bit;
    if (l == 'Z' || l == 'Y') zmask |= bit;
    y_count += (l == 'Y');
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix m = CMatrix::Zero(dim, dim);
  const cplx base = p.coefficient() * ipow(y_count);
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
    const double s = (std::popcount(b & zmask) % 2 == 0) ? 1.0 : -1.0;
    m(static_cast<Eigen::Index>(b ^ xmask), static_cast<Eigen::Index>(b)) = base * s;
  }
  return m;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

DensityMatrix DensityMatrix::from_matrix(std::vector<Site> sites, CMatrix m) {
  const Eigen::Index dim = Eigen::Index{1} << sites.size();
  if (m.rows() != dim || m.cols() != dim) throw InvalidArgument("density matrix dimension mismatch");
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  RVector ev = es.eigenvalues();
  bool clipped = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) {
      ev(i) = 0.0;
      clipped = true;
    }
  }
  CMatrix repaired = m;
  if (clipped) {
    repaired = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    repaired /= repaired.trace().real();
    repaired = 0.5 * (repaired + repaired.adjoint()).eval();
  }
  return DensityMatrix{std::move(sites), std::move(m), std::move(repaired)};
}

namespace {

// In-place Walsh-Hadamard transform: out(b) = sum_z in(z) (-1)^{popcount(b & z)}.
void walsh_hadamard(std::vector<cplx>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const cplx a = v[j];
        const cplx b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

DensityMatrix reduced_density_matrix(const std::vector<Site>& sites, const CovarianceTruncation& cov) {
  const std::size_t n = sites.size();
  if (n == 0) throw InvalidArgument("empty site list");
  if (n > kMaxRdmSites) throw TooManySites(std::to_string(n) + " sites exceed " + std::to_string(kMaxRdmSites));
  for (std::size_t i = 0; i < n; ++i) {
    if (!cov.window.contains(sites[i])) {
      throw SupportOutsideWindow("site " + std::to_string(sites[i]) + " outside covariance window");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (sites[i] == sites[j]) throw InvalidArgument("repeated site in site list");
    }
  }
  const std::size_t dim = std::size_t{1} << n;
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  // A Pauli string is labelled by masks (x, z); P_{x,z}|b> = i^{|x&z|} (-1)^{|b&z|} |b ^ x>.
  // For fixed x the column rho(b ^ x, b) is a Walsh-Hadamard transform over z.
  // Odd strings (|x| odd) have zero expectation.
  parallel_for(dim, [&](std::size_t x) {
    if (std::popcount(x) % 2 == 1) return;
    std::vector<cplx> g(dim);
    for (std::size_t z = 0; z < dim; ++z) {
      std::map<Site, char> letters;
      for (std::size_t q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        const bool xb = x & bit, zb = z & bit;
        if (xb || zb) letters[sites[q]] = xb ? (zb ? 'Y' : 'X') : 'Z';
      }
      const double value = pauli_expectation(PauliString(std::move(letters)), cov);
      g[z] = value * ipow(std::popcount(x & z));
    }
    walsh_hadamard(g);
    for (std::size_t b = 0; b < dim; ++b) {
      rho(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) = g[b] / static_cast<double>(dim);
    }
  });
  return DensityMatrix::from_matrix(sites, std::move(rho));
}

CMatrix partial_trace(const CMatrix& rho, std::size_t qubits, const std::vector<std::size_t>& traced) {
  std::vector<std::size_t> keep;
  for (std::size_t q = 0; q < qubits; ++q) {
    if (std::find(traced.begin(), traced.end(), q) == traced.end()) keep.push_back(q);
  }
  const std::size_t nk = keep.size(), nt = qubits - nk;
  auto compose = [&](std::size_t kept_bits, std::size_t traced_bits) {
    std::size_t full = 0;
    for (std::size_t i = 0; i < nk; ++i) {
      if (kept_bits >> (nk - 1 - i) & 1) full |= std::size_t{1} << (qubits - 1 - keep[i]);
    }
    for (std::size_t i = 0; i < nt; ++i) {
      if (traced_bits >> (nt - 1 - i) & 1) full |= std::size_t{1} << (qubits - 1 - traced[i]);
    }
    return static_cast<Eigen::Index>(full);
  };
  const Eigen::Index dk = Eigen::Index{1} << nk;
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < (std::size_t{1} << nt); ++t) {
        acc += rho(compose(static_cast<std::size_t>(r), t), compose(static_cast<std::size_t>(c), t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Site>& keep) {
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < rho.sites.size(); ++q) {
    if (std::find(keep.begin(), keep.end(), rho.sites[q]) == keep.end()) traced.push_back(q);
  }
  std::vector<Site> kept_sites;
  for (Site s : rho.sites) {
    if (std::find(keep.begin(), keep.end(), s) != keep.end()) kept_sites.push_back(s);
  }
  if (kept_sites.size() != keep.size()) throw SiteOutsideWindow("kept site not present in density matrix");
  return DensityMatrix::from_matrix(kept_sites, partial_trace(rho.matrix, rho.sites.size(), traced));
}

CMatrix permute_qubits(const CMatrix& rho, const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (rho.rows() != dim) throw InvalidArgument("qubit order does not match matrix dimension");
  std::vector<Eigen::Index> map(static_cast<std::size_t>(dim));
  for (std::size_t b = 0; b < static_cast<std::size_t>(dim); ++b) {
    std::size_t old = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (b >> (n - 1 - i) & 1) old |= std::size_t{1} << (n - 1 - order[i]);
    }
    map[b] = static_cast<Eigen::Index>(old);
  }
  CMatrix out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) out(r, c) = rho(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
  }
  return out;
}

}  // namespace fermichain
