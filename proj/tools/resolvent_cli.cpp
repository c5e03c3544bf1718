// Command-line driver: verify / basis-check / bound-table / oracle-compare /
// search. Exit codes: 0 success, 1 proven-inequality violation (a bug, not a
// math surprise), 2 invalid input, 3 precision failure.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "resolvent/report.hpp"

namespace {

using namespace resolvent;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

NormKind parse_norm(const std::string& s) {
  if (s == "1") return NormKind::p1;
  if (s == "2") return NormKind::p2;
  if (s == "inf") return NormKind::pinf;
  throw std::invalid_argument("--norm must be 1, 2 or inf");
}

Structure::Kind parse_family(const std::string& s) {
  if (s == "diagonal") return Structure::Kind::diagonal;
  if (s == "jordan") return Structure::Kind::jordan;
  if (s == "similarity") return Structure::Kind::similarity;
  throw std::invalid_argument("--family must be diagonal, jordan or similarity");
}

Complex parse_complex_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("--lambda expects \"re,im\"");
  try {
    return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("--lambda expects \"re,im\" with numeric parts");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of resolvent bounds for power-bounded matrices"};
  app.require_subcommand(1);

  // shared option storage
  std::string out_path, format = "json", norm_str = "2", family_str = "jordan";
  std::uint64_t seed = 0;
  double modulus_cap = kDefaultModulusCap;
  std::size_t degree = 4096, quad_samples = 8192;

  auto add_common = [&](CLI::App* cmd, bool with_norm_family) {
    cmd->add_option("--seed", seed, "base seed for all randomness");
    cmd->add_option("--out", out_path, "output file (stdout when omitted)");
    cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--modulus-cap", modulus_cap, "max allowed eigenvalue modulus");
    cmd->add_option("--degree", degree, "series truncation degree");
    cmd->add_option("--quad-samples", quad_samples, "circle quadrature grid size");
    if (with_norm_family) {
      cmd->add_option("--norm", norm_str, "vector norm: 1, 2 or inf")
          ->check(CLI::IsMember({"1", "2", "inf"}));
      cmd->add_option("--family", family_str, "instance family")
          ->check(CLI::IsMember({"diagonal", "jordan", "similarity"}));
    }
  };

  // verify
  auto* verify = app.add_subcommand("verify", "sweep random instances against the ratio bound");
  int v_n = 2, v_samples = 10, v_lambda_grid = 256;
  bool v_proof_chain = false, v_perf = false;
  std::size_t v_oracle_degree = 256;
  verify->add_option("--n", v_n, "matrix dimension");
  verify->add_option("--samples", v_samples, "number of instances");
  verify->add_option("--lambda-grid", v_lambda_grid, "circle grid size per instance");
  verify->add_flag("--proof-chain", v_proof_chain,
                   "also compute projection, Hardy route and l1 oracle per instance");
  verify->add_option("--oracle-degree", v_oracle_degree, "truncation degree for the l1 oracle");
  verify->add_flag("--perf", v_perf, "write timing block to <out>.perf.json");
  add_common(verify, true);

  // basis-check
  auto* basis_check = app.add_subcommand("basis-check", "diagnostics for one spectrum file");
  std::string bc_file;
  basis_check->add_option("spectrum", bc_file, "JSON file: array of {re, im}")->required();
  add_common(basis_check, false);

  // bound-table
  auto* bound_table = app.add_subcommand("bound-table", "closed-form bounds per dimension");
  int bt_from = 1, bt_to = 12;
  double bt_c = 1.0;
  bound_table->add_option("--n-from", bt_from, "first dimension");
  bound_table->add_option("--n-to", bt_to, "last dimension");
  bound_table->add_option("--C", bt_c, "power-bound constant");
  add_common(bound_table, false);

  // oracle-compare
  auto* oracle_cmp = app.add_subcommand("oracle-compare",
                                        "l1 oracle vs the projected-kernel construction");
  std::string oc_file, oc_lambda = "1,0";
  int oc_max_iters = 20000;
  double oc_tol = 1e-8;
  oracle_cmp->add_option("--spectrum", oc_file, "JSON spectrum file")->required();
  oracle_cmp->add_option("--lambda", oc_lambda, "query point as re,im");
  oracle_cmp->add_option("--max-iters", oc_max_iters, "solver iteration cap");
  oracle_cmp->add_option("--tol", oc_tol, "solver tolerance");
  add_common(oracle_cmp, false);

  // search
  auto* search_cmd = app.add_subcommand("search", "randomized extremal-instance search");
  int s_n = 2, s_restarts = 16, s_local_steps = 20, s_lambda_grid = 256;
  bool s_contraction = false, s_full_plane = false;
  search_cmd->add_option("--n", s_n, "matrix dimension");
  search_cmd->add_option("--restarts", s_restarts, "independent restarts");
  search_cmd->add_option("--local-steps", s_local_steps, "local refinement rounds");
  search_cmd->add_option("--lambda-grid", s_lambda_grid, "circle grid size");
  search_cmd->add_flag("--contraction", s_contraction, "restrict to ||T||_2 <= 1");
  search_cmd->add_flag("--full-plane", s_full_plane, "also sample |lambda| in (1,4]");
  add_common(search_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify)) {
      VerifyOptions opts;
      opts.n = v_n;
      opts.family = parse_family(family_str);
      opts.norm_kind = parse_norm(norm_str);
      opts.samples = v_samples;
      opts.seed = seed;
      opts.lambda_grid = v_lambda_grid;
      opts.modulus_cap = modulus_cap;
      opts.degree = degree;
      opts.quad_samples = quad_samples;
      opts.proof_chain = v_proof_chain;
      opts.oracle_degree = v_oracle_degree;

      const auto t0 = std::chrono::steady_clock::now();
      const auto reports = generate_verify_reports(opts);
      const auto t1 = std::chrono::steady_clock::now();
      write_output(format == "csv" ? verify_reports_csv(reports) : verify_reports_json(reports),
                   out_path);
      if (v_perf && !out_path.empty()) {
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        std::ofstream perf(out_path + ".perf.json");
        perf << "{\"elapsed_ms\":" << ms << ",\"samples\":" << reports.size() << "}\n";
      }
      return verify_exit_code(reports);
    }

    if (app.got_subcommand(basis_check)) {
      const Spectrum sigma(parse_spectrum_json(read_file(bc_file)), modulus_cap);
      const BasisCheckResult res = run_basis_check(sigma, degree, quad_samples, std::cout);
      if (!out_path.empty()) {
        std::ostringstream oss;
        oss << "{\"gram_deviation\":" << detail::fmt_double(res.gram_deviation)
            << ",\"interpolation_residual\":" << detail::fmt_double(res.interpolation_residual)
            << ",\"reconstruction_error\":" << detail::fmt_double(res.reconstruction_error)
            << ",\"worst_h1_slack\":" << detail::fmt_double(res.worst_h1_slack)
            << ",\"pass\":" << (res.pass ? "true" : "false") << "}\n";
        write_output(oss.str(), out_path);
      }
      return res.pass ? 0 : 1;
    }

    if (app.got_subcommand(bound_table)) {
      write_output(format == "csv" ? bound_table_csv(bt_from, bt_to, bt_c)
                                   : bound_table_json(bt_from, bt_to, bt_c),
                   out_path);
      return 0;
    }

    if (app.got_subcommand(oracle_cmp)) {
      const Spectrum sigma(parse_spectrum_json(read_file(oc_file)), modulus_cap);
      const Complex lambda = parse_complex_pair(oc_lambda);
      // the l1 problem scales quadratically with degree; default lower than
      // the series default unless the user asks otherwise
      const std::size_t oracle_degree = oracle_cmp->count("--degree") ? degree : 256;
      const OracleCompareReport rep =
          run_oracle_compare(sigma, lambda, oracle_degree, oc_max_iters, oc_tol);
      write_output(oracle_compare_json(rep), out_path);
      return rep.comparison.gap >= -1e-6 ? 0 : 1;
    }

    if (app.got_subcommand(search_cmd)) {
      SearchConfig cfg;
      cfg.n = s_n;
      cfg.family = parse_family(family_str);
      cfg.norm_kind = parse_norm(norm_str);
      cfg.restarts = s_restarts;
      cfg.local_steps = s_local_steps;
      cfg.seed = seed;
      cfg.lambda_grid = s_lambda_grid;
      cfg.modulus_cap = modulus_cap;
      cfg.contraction = s_contraction;
      cfg.full_plane = s_full_plane;
      const SearchRecord rec = cfg.contraction ? contraction_search(cfg) : search(cfg);
      write_output(search_record_json(rec), out_path);
      return 0;
    }
  } catch (const violation_error& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return 1;
  } catch (const precision_error& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
