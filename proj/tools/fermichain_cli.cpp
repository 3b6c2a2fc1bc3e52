#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "fermichain/diagnostics.hpp"
#include "fermichain/entanglement.hpp"
#include "fermichain/errors.hpp"
#include "fermichain/io.hpp"
#include "fermichain/report.hpp"
#include "fermichain/resource_states.hpp"

using namespace fermichain;

namespace {

constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 1;

struct Common {
  double gamma = 0.0;
  double lambda = 0.0;
  int log2_grid = 14;
  double quad_tol = 1e-6;
  std::string out;
  std::string format;
};

void add_params(CLI::App* app, Common& c) {
  app->add_option("--gamma", c.gamma, "Anisotropy gamma")->capture_default_str();
  app->add_option("--lambda", c.lambda, "Transverse field lambda")->capture_default_str();
}

void add_quadrature(CLI::App* app, Common& c) {
  app->add_option("--log2-grid", c.log2_grid, "Quadrature base grid exponent")->capture_default_str()->check(
      CLI::Range(6, 22));
  app->add_option("--quad-tol", c.quad_tol, "Quadrature base/refined agreement tolerance")->capture_default_str();
}

void add_output(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output file (default: stdout)");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

QuadratureOptions quadrature(const Common& c) { return {c.log2_grid, c.quad_tol}; }

json base_config(const Common& c, bool with_quadrature) {
  json cfg = {{"gamma", c.gamma}, {"lambda", c.lambda}};
  if (with_quadrature) cfg["quadrature"] = {{"log2_grid", c.log2_grid}, {"tolerance", c.quad_tol}};
  return cfg;
}

template <class Write>
void emit(const Common& c, Write write) {
  if (c.out.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::ios_base::failure("cannot open " + c.out);
  write(f);
  if (!f) throw std::ios_base::failure("write failed for " + c.out);
}

void emit_report(const Common& c, const Report& r, const std::string& default_format) {
  const std::string fmt = c.format.empty() ? default_format : c.format;
  emit(c, [&](std::ostream& os) {
    if (fmt == "json") {
      write_json(os, r);
    } else {
      write_csv(os, r);
    }
  });
}

std::vector<std::pair<Site, Site>> parse_pairs(const std::vector<std::string>& texts) {
  std::vector<std::pair<Site, Site>> pairs;
  for (const auto& t : texts) {
    const auto comma = t.find(',');
    if (comma == std::string::npos) throw InvalidArgument("pair must look like i,j: " + t);
    try {
      std::size_t u1 = 0, u2 = 0;
      const std::string a = t.substr(0, comma), b = t.substr(comma + 1);
      const Site i = std::stol(a, &u1), j = std::stol(b, &u2);
      if (u1 != a.size() || u2 != b.size()) throw InvalidArgument("");
      pairs.emplace_back(i, j);
    } catch (const std::exception&) {
      throw InvalidArgument("pair must look like i,j: " + t);
    }
  }
  return pairs;
}

// Short end-to-end checks of the core identities.
int run_selftest() {
  int failures = 0;
  auto line = [&](const std::string& name, bool ok, double value) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " " << format_number(value) << '\n';
    if (!ok) ++failures;
  };

  const CovarianceTruncation cov = build_truncation(XYParams{0.7, 0.4}, Window(0, 3));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TestVector> factors;
    for (int f = 0; f < 6; ++f) {
      TestVector h = TestVector::zero(cov.window);
      for (Eigen::Index i = 0; i < h.f1.size(); ++i) {
        h.f1(i) = cplx(g(rng), g(rng));
        h.f2(i) = cplx(g(rng), g(rng));
      }
      factors.push_back(h);
    }
    const cplx wick = wick_moment_bruteforce(factors, cov);
    const cplx pf = moment_pfaffian(factors, cov);
    worst = std::max(worst, std::abs(wick - pf) / std::max(1.0, std::abs(wick)));
  }
  line("wick-vs-pfaffian", worst < 1e-9, worst);

  const double trx = trace_X({0, 0}, 16);
  const double gap = std::abs(hs_norm_E_minus_F({0, 0}, 16) - trx) / trx;
  line("hs-identity", gap < 1e-8, gap);
  const double theta_gap = std::abs(hs_norm_theta_conjugation({0, 0}, 16) - 4.0 * trx) / trx;
  line("theta-identity", theta_gap < 1e-8, theta_gap);

  const double beta = chsh_beta(omega1_rdm(make_omega1(1), {-1, 0}));
  line("cirelson", std::abs(beta - std::sqrt(2.0)) < 1e-10, beta);

  const DensityMatrix rho = reduced_density_matrix({0, 1}, build_truncation(XYParams{1, 1}, Window(0, 2)));
  const double tr_err = std::abs(rho.matrix.trace() - cplx(1.0));
  line("rdm-trace", tr_err < 1e-10, tr_err);
  return failures == 0 ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-free states of the XY chain: covariances, criticality diagnostics, entanglement"};
  app.set_version_flag("--version", std::string(FERMICHAIN_VERSION));
  app.require_subcommand(1);

  Common c;

  auto* symbol = app.add_subcommand("symbol", "Sample the momentum-space projection E(x) and k(x)");
  int grid = 1024;
  add_params(symbol, c);
  symbol->add_option("--grid", grid, "Number of sample points")->capture_default_str()->check(CLI::PositiveNumber);
  add_output(symbol, c);

  auto* covariance = app.add_subcommand("covariance", "Dump a covariance truncation or a reduced density matrix");
  std::vector<long> window{-4, 4};
  std::string form = "complex";
  std::vector<Site> rdm_sites;
  add_params(covariance, c);
  add_quadrature(covariance, c);
  covariance->add_option("--window", window, "Window lo,hi (half-open)")->delimiter(',')->expected(2)->capture_default_str();
  covariance->add_option("--form", form, "complex or majorana")->check(CLI::IsMember({"complex", "majorana"}))->capture_default_str();
  covariance->add_option("--rdm", rdm_sites, "Dump the reduced density matrix on these sites instead")->delimiter(',');
  add_output(covariance, c);

  auto* trx = app.add_subcommand("trx", "tr X_N over a ladder of half widths, with classification");
  std::vector<long> ladder{16, 32, 64, 128, 256};
  ClassifierConfig classifier;
  bool with_compression = false;
  add_params(trx, c);
  add_quadrature(trx, c);
  trx->add_option("--N-ladder", ladder, "Half widths N")->delimiter(',')->capture_default_str();
  trx->add_option("--converge-tol", classifier.converge_tol)->capture_default_str();
  trx->add_option("--min-slope", classifier.min_slope)->capture_default_str();
  trx->add_option("--max-residual", classifier.max_residual)->capture_default_str();
  trx->add_flag("--compression", with_compression, "Also report tr X from the plain compression");
  add_output(trx, c);

  auto* entropy = app.add_subcommand("entropy", "Block entropy S(L) for blocks [0, L)");
  auto* onecopy = app.add_subcommand("onecopy", "Single-copy entanglement E1(L) next to S(L)");
  std::vector<long> lengths{2, 4, 8, 16, 32, 64};
  long ambient = 0;
  for (auto* sub : {entropy, onecopy}) {
    add_params(sub, c);
    add_quadrature(sub, c);
    sub->add_option("--lengths", lengths, "Block lengths, ascending")->delimiter(',')->capture_default_str();
    sub->add_option("--ambient-N", ambient, "Ambient half width (default 4 * max L)");
    add_output(sub, c);
  }

  auto* cluster = app.add_subcommand("cluster", "Connected correlator <a tau_k(b)> - <a><b> for k = 1..k_max");
  std::string obs_a = "Z0", obs_b = "Z0";
  long k_max = 24;
  ClusterConfig cluster_cfg;
  add_params(cluster, c);
  add_quadrature(cluster, c);
  cluster->add_option("--a", obs_a, "Pauli string a")->capture_default_str();
  cluster->add_option("--b", obs_b, "Pauli string b")->capture_default_str();
  cluster->add_option("--k-max", k_max)->capture_default_str()->check(CLI::PositiveNumber);
  cluster->add_option("--floor", cluster_cfg.floor, "Values at or below this are not fitted")->capture_default_str();
  add_output(cluster, c);

  auto* localize = app.add_subcommand("localize", "Smallest block length with singlet fidelity >= 1 - eps");
  std::string resource = "xy";
  long loc_m = 0, loc_n = 0, l_max = 3, pairs_j = 0;
  double eps = 0.01;
  SeesawOptions seesaw;
  add_params(localize, c);
  add_quadrature(localize, c);
  localize->add_option("--resource", resource, "xy or omega1")->check(CLI::IsMember({"xy", "omega1"}))->capture_default_str();
  localize->add_option("--M", loc_m, "Left block ends at M")->capture_default_str();
  localize->add_option("--N", loc_n, "Gap between the blocks")->capture_default_str();
  localize->add_option("--eps", eps)->capture_default_str();
  localize->add_option("--L-max", l_max)->capture_default_str();
  localize->add_option("--J", pairs_j, "omega1 pairs (default: enough to cover the blocks)");
  localize->add_option("--seed", seesaw.seed)->capture_default_str();
  localize->add_option("--starts", seesaw.random_starts)->capture_default_str();
  localize->add_option("--max-iter", seesaw.max_iterations)->capture_default_str();
  add_output(localize, c);

  auto* bell = app.add_subcommand("bell", "CHSH value of two-qubit marginals");
  std::vector<std::string> pair_texts;
  std::string bell_resource = "xy";
  long bell_j = 0;
  add_params(bell, c);
  add_quadrature(bell, c);
  bell->add_option("--resource", bell_resource, "xy or omega1")->check(CLI::IsMember({"xy", "omega1"}))->capture_default_str();
  bell->add_option("--pair", pair_texts, "Site pair i,j (repeatable)")->required()->allow_extra_args(false);
  bell->add_option("--J", bell_j, "omega1 pairs (default: enough to cover the sites)");
  add_output(bell, c);

  auto* selftest = app.add_subcommand("selftest", "Quick consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (selftest->parsed()) return run_selftest();

    const XYParams p{c.gamma, c.lambda};
    if (symbol->parsed()) {
      Report r;
      r.command = "symbol";
      r.config = base_config(c, false);
      r.config["grid"] = grid;
      r.result = {{"params", params_to_json(p)}, {"sampling", "x_m = -pi + 2 pi (m + 1/2) / grid"}};
      r.table = symbol_table(p, grid);
      emit_report(c, r, "csv");
    } else if (covariance->parsed()) {
      const Window w(window[0], window[1]);
      const CovarianceTruncation cov = build_truncation(p, w, quadrature(c));
      MatrixDump dump;
      if (rdm_sites.empty()) {
        dump = covariance_dump(cov, p, form == "complex" ? CovarianceForm::Complex : CovarianceForm::Majorana);
      } else {
        dump = density_dump(reduced_density_matrix(rdm_sites, cov));
        dump.meta["gamma"] = format_number(p.gamma);
        dump.meta["lambda"] = format_number(p.lambda);
      }
      dump.meta["fermichain-version"] = FERMICHAIN_VERSION;
      emit(c, [&](std::ostream& os) {
        if (c.format == "json") {
          json doc = {{"fermichain_version", FERMICHAIN_VERSION}, {"kind", dump.kind}, {"meta", dump.meta},
                      {"matrix", matrix_to_json(dump.matrix)}};
          require_finite(doc);
          os << doc.dump(2) << '\n';
        } else {
          write_matrix_dump(os, dump);
        }
      });
    } else if (trx->parsed()) {
      DivergenceScan scan = scan_trace_X(p, ladder, classifier, with_compression);
      Report r = trx_report(scan);
      r.config = base_config(c, with_compression);
      r.config["N_ladder"] = ladder;
      r.config["classifier"] = {{"converge_tol", classifier.converge_tol}, {"min_slope", classifier.min_slope},
                                {"max_residual", classifier.max_residual}};
      r.config["projection"] = "ring basis projection on [-N, N)";
      emit_report(c, r, "csv");
    } else if (entropy->parsed() || onecopy->parsed()) {
      if (lengths.empty()) throw InvalidArgument("no lengths given");
      const long amb = ambient > 0 ? ambient : 4 * *std::max_element(lengths.begin(), lengths.end());
      Report r = entropy->parsed() ? entropy_report(entropy_scan(p, lengths, amb))
                                   : onecopy_report(one_copy_scan(p, lengths, amb));
      r.config = base_config(c, true);
      r.config["lengths"] = lengths;
      r.config["ambient_N"] = amb;
      emit_report(c, r, "csv");
    } else if (cluster->parsed()) {
      const PauliString a = PauliString::parse(obs_a), b = PauliString::parse(obs_b);
      const CovarianceTruncation cov = build_truncation(p, cluster_window(a, b, k_max), quadrature(c));
      Report r = cluster_report(cluster_scan(a, b, cov, k_max, cluster_cfg));
      r.config = base_config(c, true);
      r.config["a"] = a.to_string();
      r.config["b"] = b.to_string();
      r.config["k_max"] = k_max;
      r.config["floor"] = cluster_cfg.floor;
      r.config["preference_ratio"] = cluster_cfg.preference_ratio;
      emit_report(c, r, "csv");
    } else if (localize->parsed()) {
      json cfg;
      RdmSource source;
      if (resource == "omega1") {
        const long reach = std::max({std::abs(loc_m - l_max), std::abs(loc_m + loc_n + l_max), 1L}) + 1;
        const long j = pairs_j > 0 ? pairs_j : reach;
        source = omega1_rdm_source(make_omega1(j));
        cfg = {{"resource", "omega1"}, {"J", j}};
      } else {
        source = xy_rdm_source(p, quadrature(c));
        cfg = base_config(c, true);
        cfg["resource"] = "xy";
      }
      cfg.update({{"M", loc_m}, {"N", loc_n}, {"eps", eps}, {"L_max", l_max}, {"d", 2},
                  {"seesaw", {{"seed", seesaw.seed}, {"random_starts", seesaw.random_starts},
                              {"max_iterations", seesaw.max_iterations}, {"tolerance", seesaw.tolerance}}}});
      Report r = localize_report(localization_length(source, loc_m, loc_n, eps, l_max, seesaw));
      r.config = cfg;
      emit_report(c, r, "json");
    } else if (bell->parsed()) {
      const auto pairs = parse_pairs(pair_texts);
      std::vector<BetaRow> rows;
      json cfg;
      if (bell_resource == "omega1") {
        long reach = 1;
        for (const auto& [i, j] : pairs) reach = std::max({reach, std::abs(i) + 1, std::abs(j) + 1});
        const PairedState st = make_omega1(bell_j > 0 ? bell_j : reach);
        for (const auto& [i, j] : pairs) rows.push_back({i, j, chsh_beta(omega1_rdm(st, {i, j}))});
        cfg = {{"resource", "omega1"}, {"J", bell_j > 0 ? bell_j : reach}};
      } else {
        rows = beta_scan_xy(p, pairs, quadrature(c));
        cfg = base_config(c, true);
        cfg["resource"] = "xy";
      }
      json pj = json::array();
      for (const auto& [i, j] : pairs) pj.push_back({i, j});
      cfg["pairs"] = pj;
      Report r = bell_report(rows);
      r.config = cfg;
      emit_report(c, r, "csv");
    }
    return 0;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
