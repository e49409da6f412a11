// Command-line runner for the XX0 laboratory. Subcommands expose the
// experiments with explicit, reproducible configuration: identical
// invocations produce byte-identical output. Data goes to --out (or standard
// output); progress lines for long sweeps go to standard error.

#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "xx0lab/xx0lab.hpp"

namespace {

using namespace xx0lab;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t sep = text.find(',', start);
    if (sep == std::string::npos) sep = text.size();
    out.push_back(std::stoi(text.substr(start, sep - start)));
    start = sep + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

ordered_json complex_json(cdouble z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json matrix_json(const Eigen::MatrixXcd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

int run_spectrum(int n, double h, const std::string& out, const std::string& vectors_path) {
  const auto states = full_spectrum(n, h);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = n;
  j["h"] = h;
  ordered_json list = ordered_json::array();
  for (const auto& s : states) list.push_back(eigenstate_to_json(s));
  j["states"] = list;
  emit_text(j.dump(2) + "\n", out);
  if (!vectors_path.empty()) {
    std::vector<StateVector> vs;
    vs.reserve(states.size());
    for (const auto& s : states) vs.push_back(s.materialize());
    write_vectors_binary(vs, vectors_path);
  }
  return 0;
}

int run_thermo(const std::vector<int>& ns, double T, double h, const std::string& out) {
  const ThermoParams params{T, h};
  const double f_bulk = bulk_free_energy(params);
  const double s_density = entropy_density(params);
  CsvTable table;
  table.header = {"n", "T", "h", "log2Z_over_n", "f_bulk", "abs_err", "S_density"};
  for (int n : ns) {
    std::cerr << "# thermo n=" << n << "\n";
    const double log2z_n = log2_partition_function(n, params) / n;
    table.rows.push_back({std::to_string(n), format_double(T), format_double(h),
                          format_double(log2z_n), format_double(f_bulk),
                          format_double(std::abs(log2z_n - f_bulk)),
                          format_double(s_density)});
  }
  emit_text(table.to_string(), out);
  return 0;
}

int run_equilibrium(int n, double T, double h, int bins, double tol,
                    const std::string& scorer, const std::string& out) {
  const ThermoParams params{T, h};
  const SelectionRule rule =
      scorer == "variational" ? SelectionRule::variational : SelectionRule::density_distance;
  const auto sub = select_equilibrium_subspace(n, params, bins, tol, rule);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = sub.dim();
  j["nS_estimate"] = dimension_estimate(n, params);
  j["boltzmann_mass"] = boltzmann_mass(sub);
  ordered_json members = ordered_json::array();
  for (const auto& mem : sub.members) {
    ordered_json mj;
    mj["m"] = mem.state.m();
    mj["momentum_indices"] = mem.state.momenta.indices;
    mj["score"] = mem.score;
    members.push_back(mj);
  }
  j["members"] = members;
  emit_text(j.dump(2) + "\n", out);
  return 0;
}

int run_tcf_scan(const std::vector<int>& ns, double T, double h, const std::string& ops_text,
                 int bins_flag, double tol, int samples, std::uint64_t seed,
                 const std::string& out) {
  const ThermoParams params{T, h};
  std::vector<LocalOperator> ops;
  std::vector<std::string> op_names;
  {
    std::size_t start = 0;
    while (start <= ops_text.size()) {
      std::size_t sep = ops_text.find(';', start);
      if (sep == std::string::npos) sep = ops_text.size();
      const std::string piece = ops_text.substr(start, sep - start);
      if (!piece.empty()) {
        ops.push_back(parse_local_operator(piece));
        op_names.push_back(local_operator_to_text(ops.back()));
      }
      start = sep + 1;
    }
  }
  if (ops.empty()) throw std::invalid_argument("tcf-scan: no operators given");

  CsvTable table;
  table.header = {"n",    "T",          "h",    "operator", "dim_C",
                  "full", "restricted", "mean", "std_dev",  "max_spread"};
  for (int n : ns) {
    const int bins = bins_flag > 0 ? bins_flag : default_bins(n);
    const auto sub = select_equilibrium_subspace(n, params, bins, tol);
    const PackedSubspace pack(sub);
    const auto fulls = thermal_correlation_full_many(ops, n, params);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      std::cerr << "# tcf-scan n=" << n << " operator=" << op_names[k] << "\n";
      const TcfReport rep = tcf_report(ops[k], sub, samples, seed, false, &pack);
      table.rows.push_back({std::to_string(n), format_double(T), format_double(h),
                            op_names[k], std::to_string(sub.dim()),
                            format_double(fulls[k].real()),
                            format_double(rep.restricted_value.real()),
                            format_double(rep.mean.real()), format_double(rep.std_dev),
                            format_double(rep.max_spread)});
    }
  }
  emit_text(table.to_string(), out);
  return 0;
}

int run_qec_check(int n, double T, double h, int bins_flag, double tol, double kl_tol,
                  int weight, int family_size, int samples, std::uint64_t seed,
                  const std::string& form, const std::string& fixture, const std::string& out) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  if (!fixture.empty()) {
    if (n != 3) throw std::invalid_argument("qec-check fixtures are defined for n = 3");
    const CodeSpace code = repetition_code_space(n);
    const ErrorChannel channel =
        fixture == "repetition-x"
            ? repetition_x_channel(n)
            : (fixture == "repetition-z" ? z1_phase_channel(n)
                                         : throw std::invalid_argument("unknown fixture: " + fixture));
    const KLReport basis = kl_check_basis(channel, code, kl_tol);
    const KLReport random = kl_check_random(channel, code, std::max(2, samples), seed, kl_tol);
    j["dim_C"] = code.dim();
    j["m"] = channel.size();
    j["c_matrix"] = matrix_json(basis.c_matrix);
    j["max_violation_diag"] = basis.max_violation_diag;
    j["max_violation_offdiag"] = basis.max_violation_offdiag;
    j["passed"] = form == "basis"    ? basis.passed
                  : form == "random" ? random.passed
                                     : (basis.passed && random.passed);
    j["degenerate"] = false;
    if (form != "basis") j["random_max_violation"] = random.max_violation;
    emit_text(j.dump(2) + "\n", out);
    return 0;
  }
  const ThermoParams params{T, h};
  const int bins = bins_flag > 0 ? bins_flag : default_bins(n);
  std::cerr << "# qec-check n=" << n << " weight=" << weight << " family=" << family_size
            << "\n";
  const auto rep = qec_on_equilibrium(n, params, bins, tol, weight, family_size, seed,
                                      samples, kl_tol);
  j["dim_C"] = rep.subspace.dim();
  j["m"] = static_cast<int>(rep.family.size());
  j["c_matrix"] = matrix_json(rep.basis.c_matrix);
  j["max_violation_diag"] = rep.basis.max_violation_diag;
  j["max_violation_offdiag"] = rep.basis.max_violation_offdiag;
  j["passed"] = form == "basis"    ? rep.basis.passed
                : form == "random" ? rep.random.passed
                                   : (rep.basis.passed && rep.random.passed);
  j["degenerate"] = rep.degenerate;
  if (form != "basis") j["random_max_violation"] = rep.random.max_violation;
  emit_text(j.dump(2) + "\n", out);
  return 0;
}

int run_recovery_test(std::uint64_t seed, int trials, const std::string& out) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  ordered_json fixtures = ordered_json::array();

  {  // correctable fixture: {Id, X1, X2, X3}/2 on the 3-qubit repetition code
    const CodeSpace code = repetition_code_space(3);
    const ErrorChannel channel = repetition_x_channel(3);
    const KLReport kl = kl_check_basis(channel, code);
    const ErrorChannel recovery = build_recovery(channel, code);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::MatrixXcd basis = code.basis_matrix();
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      Eigen::MatrixXcd g(code.dim(), code.dim());
      for (int r = 0; r < code.dim(); ++r)
        for (int c = 0; c < code.dim(); ++c) g(r, c) = cdouble(gauss(rng), gauss(rng));
      Eigen::MatrixXcd rho_c = g * g.adjoint();
      rho_c /= rho_c.trace().real();
      DensityMatrix rho;
      rho.n = 3;
      rho.entries = basis * rho_c * basis.adjoint();
      const DensityMatrix back = apply_channel(recovery, apply_channel(channel, rho));
      worst = std::max(worst, (back.entries - rho.entries).norm());
    }
    ordered_json f;
    f["name"] = "repetition-x";
    f["kl_passed"] = kl.passed;
    f["max_roundtrip_residual"] = worst;
    f["rejected"] = false;
    fixtures.push_back(f);
  }
  {  // uncorrectable fixture: {Id, Z1}/sqrt(2) must be rejected
    const CodeSpace code = repetition_code_space(3);
    const ErrorChannel channel = z1_phase_channel(3);
    const KLReport kl = kl_check_basis(channel, code);
    bool rejected = false;
    try {
      build_recovery(channel, code);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    ordered_json f;
    f["name"] = "repetition-z";
    f["kl_passed"] = kl.passed;
    f["max_roundtrip_residual"] = nullptr;
    f["rejected"] = rejected;
    fixtures.push_back(f);
  }
  j["fixtures"] = fixtures;
  emit_text(j.dump(2) + "\n", out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-size XX0 laboratory: exact eigenbasis, thermodynamics, "
               "equilibrium subspace, correlation and error-correction checks"};
  app.require_subcommand(1);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "enumerate the full eigenbasis as JSON");
  int sp_n = 2;
  double sp_h = 0.0;
  std::string sp_out, sp_vectors;
  spectrum->add_option("--n", sp_n, "chain length")->required();
  spectrum->add_option("--h", sp_h, "magnetic field");
  spectrum->add_option("--out", sp_out, "output path (default stdout)");
  spectrum->add_option("--vectors", sp_vectors,
                       "dump amplitude vectors (little-endian complex doubles)");

  // thermo
  auto* thermo = app.add_subcommand("thermo", "finite-n free energy against the bulk integral");
  std::string th_nlist;
  double th_T = 1.0, th_h = 0.0;
  std::string th_out;
  thermo->add_option("--n-list", th_nlist, "comma-separated chain lengths")->required();
  thermo->add_option("--T", th_T, "temperature")->required();
  thermo->add_option("--h", th_h, "magnetic field");
  thermo->add_option("--out", th_out, "output path (default stdout)");

  // equilibrium
  auto* equilibrium = app.add_subcommand("equilibrium", "select the equilibrium subspace");
  int eq_n = 8, eq_bins = 0;
  double eq_T = 1.0, eq_h = 0.0, eq_tol = kDefaultSelectionTol;
  std::string eq_scorer = "density", eq_out;
  equilibrium->add_option("--n", eq_n, "chain length")->required();
  equilibrium->add_option("--T", eq_T, "temperature")->required();
  equilibrium->add_option("--h", eq_h, "magnetic field");
  equilibrium->add_option("--bins", eq_bins, "momentum bins (default n/4)");
  equilibrium->add_option("--tol", eq_tol, "L1 selection tolerance");
  equilibrium->add_option("--scorer", eq_scorer, "density | variational")
      ->check(CLI::IsMember({"density", "variational"}));
  equilibrium->add_option("--out", eq_out, "output path (default stdout)");

  // tcf-scan
  auto* tcf = app.add_subcommand("tcf-scan", "constancy of correlation functions over the subspace");
  std::string tc_nlist, tc_ops = "Z1;X1 X2;Y1 Y2;Z1 Z2", tc_out;
  double tc_T = 1.0, tc_h = 0.0, tc_tol = kDefaultSelectionTol;
  int tc_bins = 0, tc_samples = 32;
  std::uint64_t tc_seed = 0;
  tcf->add_option("--n-list", tc_nlist, "comma-separated chain lengths")->required();
  tcf->add_option("--T", tc_T, "temperature")->required();
  tcf->add_option("--h", tc_h, "magnetic field");
  tcf->add_option("--ops", tc_ops, "semicolon-separated operators, e.g. \"Z1;X1 X2\"");
  tcf->add_option("--bins", tc_bins, "momentum bins (default n/4 per n)");
  tcf->add_option("--tol", tc_tol, "L1 selection tolerance");
  tcf->add_option("--samples", tc_samples, "random unit vectors drawn in the span");
  tcf->add_option("--seed", tc_seed, "sampling seed");
  tcf->add_option("--out", tc_out, "output path (default stdout)");

  // qec-check
  auto* qec = app.add_subcommand("qec-check", "Knill-Laflamme check on the equilibrium code");
  int qc_n = 8, qc_bins = 0, qc_weight = 1, qc_family = 4, qc_samples = 32;
  double qc_T = 1.0, qc_h = 0.0, qc_tol = kDefaultSelectionTol, qc_kl_tol = 1e-8;
  std::uint64_t qc_seed = 0;
  std::string qc_form = "both", qc_fixture, qc_out;
  qec->add_option("--n", qc_n, "chain length")->required();
  qec->add_option("--T", qc_T, "temperature");
  qec->add_option("--h", qc_h, "magnetic field");
  qec->add_option("--bins", qc_bins, "momentum bins (default n/4)");
  qec->add_option("--tol", qc_tol, "L1 selection tolerance");
  qec->add_option("--kl-tol", qc_kl_tol, "Knill-Laflamme pass tolerance");
  qec->add_option("--weight", qc_weight, "max error weight");
  qec->add_option("--family-size", qc_family, "number of Kraus operators");
  qec->add_option("--samples", qc_samples, "random-form samples");
  qec->add_option("--seed", qc_seed, "family and sampling seed");
  qec->add_option("--form", qc_form, "basis | random | both")
      ->check(CLI::IsMember({"basis", "random", "both"}));
  qec->add_option("--fixture", qc_fixture, "repetition-x | repetition-z (bypasses selection)");
  qec->add_option("--out", qc_out, "output path (default stdout)");

  // recovery-test
  auto* recovery = app.add_subcommand("recovery-test", "recovery round-trip on fixture codes");
  std::uint64_t rc_seed = 0;
  int rc_trials = 10;
  std::string rc_out;
  recovery->add_option("--seed", rc_seed, "density-matrix sampling seed");
  recovery->add_option("--trials", rc_trials, "random code-space density matrices");
  recovery->add_option("--out", rc_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(spectrum)) return run_spectrum(sp_n, sp_h, sp_out, sp_vectors);
    if (app.got_subcommand(thermo))
      return run_thermo(parse_int_list(th_nlist), th_T, th_h, th_out);
    if (app.got_subcommand(equilibrium)) {
      const int bins = eq_bins > 0 ? eq_bins : default_bins(eq_n);
      return run_equilibrium(eq_n, eq_T, eq_h, bins, eq_tol, eq_scorer, eq_out);
    }
    if (app.got_subcommand(tcf))
      return run_tcf_scan(parse_int_list(tc_nlist), tc_T, tc_h, tc_ops, tc_bins, tc_tol,
                          tc_samples, tc_seed, tc_out);
    if (app.got_subcommand(qec))
      return run_qec_check(qc_n, qc_T, qc_h, qc_bins, qc_tol, qc_kl_tol, qc_weight, qc_family,
                           qc_samples, qc_seed, qc_form, qc_fixture, qc_out);
    if (app.got_subcommand(recovery)) return run_recovery_test(rc_seed, rc_trials, rc_out);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
