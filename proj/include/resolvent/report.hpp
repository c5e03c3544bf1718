#pragma once

// Batch drivers and report emission. Serialization is deterministic by
// construction: fixed field order, %.17g floats, 64-bit seeds as strings
// (JSON numbers only round-trip to 2^53). Timing data never enters report
// files; determinism tests compare bytes.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resolvent/bounds.hpp"
#include "resolvent/malmquist.hpp"
#include "resolvent/matrix_ops.hpp"
#include "resolvent/quotient.hpp"
#include "resolvent/search.hpp"
#include "resolvent/spectrum.hpp"

namespace resolvent {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_complex(Complex z) {
  return "{\"re\":" + fmt_double(z.real()) + ",\"im\":" + fmt_double(z.imag()) + "}";
}

inline std::string fmt_spectrum(const std::vector<Complex>& pts) {
  std::string out = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ",";
    out += fmt_complex(pts[i]);
  }
  return out + "]";
}

inline std::string fmt_bool(bool b) { return b ? "true" : "false"; }

inline std::string fmt_structure(const Structure& s) {
  std::string out = "{\"kind\":\"";
  out += structure_name(s.kind);
  out += "\"";
  if (s.kind == Structure::Kind::jordan)
    out += ",\"coupling\":" + fmt_double(s.coupling);
  if (s.kind == Structure::Kind::similarity) {
    out += ",\"conditioning\":" + fmt_double(s.conditioning);
    out += ",\"seed\":\"" + std::to_string(s.seed) + "\"";
  }
  return out + "}";
}

} // namespace detail

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  int n = 2;
  Structure::Kind family = Structure::Kind::jordan;
  NormKind norm_kind = NormKind::p2;
  int samples = 10;
  std::uint64_t seed = 0;
  int lambda_grid = 256;
  double modulus_cap = kDefaultModulusCap;
  std::size_t degree = 4096;
  std::size_t quad_samples = 8192;
  bool proof_chain = false;     // also compute the function-space quantities
  std::size_t oracle_degree = 256;
};

struct BoundReport {
  int id = 0;
  int n = 0;
  Structure structure;
  NormKind norm_kind = NormKind::p2;
  std::vector<Complex> spectrum;
  Complex lambda;
  double dist = 0.0;
  double resolvent = 0.0;
  PowerBoundEstimate power;
  double ratio = 0.0;
  double zarouf = 0.0;
  double davies_simon = 0.0;
  bool ratio_ok = true;
  // proof-chain block (populated only when requested)
  bool has_chain = false;
  double malmquist_wiener = 0.0;
  double hardy_route = 0.0;
  double analytic_bound = 0.0;
  double oracle_value = 0.0;
  double oracle_gap = 0.0;
  double normalized_resolvent = 0.0;
  bool wiener_ok = true;
  bool oracle_dominance_ok = true;
  bool oracle_sandwich_ok = true;
};

inline std::vector<BoundReport> generate_verify_reports(const VerifyOptions& opts) {
  if (opts.n < 1) throw std::invalid_argument("verify: n must be >= 1");
  if (opts.samples < 1) throw std::invalid_argument("verify: samples must be >= 1");
  if (opts.lambda_grid < 64) throw std::invalid_argument("verify: lambda-grid must be >= 64");

  SearchConfig draw_cfg;
  draw_cfg.n = opts.n;
  draw_cfg.family = opts.family;
  draw_cfg.norm_kind = opts.norm_kind;
  draw_cfg.modulus_cap = opts.modulus_cap;

  std::vector<BoundReport> reports;
  reports.reserve(static_cast<std::size_t>(opts.samples));
  for (int i = 0; i < opts.samples; ++i) {
    std::mt19937_64 rng(detail::derive_seed(opts.seed, static_cast<std::uint64_t>(i)));
    const detail::Candidate cand = detail::draw_candidate(draw_cfg, rng);
    std::vector<Complex> pts;
    detail::candidate_spectrum(cand, opts.modulus_cap, pts);
    const Spectrum sigma(pts, opts.modulus_cap);
    Structure structure;
    switch (opts.family) {
      case Structure::Kind::diagonal: structure = Structure::diagonal(); break;
      case Structure::Kind::jordan: structure = Structure::jordan(cand.coupling); break;
      default: structure = Structure::similarity(cand.conditioning, cand.matrix_seed); break;
    }
    const MatrixOperator op = from_spectrum(sigma, structure, opts.norm_kind);
    const PowerBoundEstimate bound = power_bound(op);

    BoundReport r;
    r.id = i;
    r.n = opts.n;
    r.structure = structure;
    r.norm_kind = opts.norm_kind;
    r.spectrum = sigma.points();
    r.power = bound;

    double best_ratio = -1.0;
    Complex best_lambda(1.0, 0.0);
    for (int t = 0; t < opts.lambda_grid; ++t) {
      const double theta = 2.0 * kPi * static_cast<double>(t) / static_cast<double>(opts.lambda_grid);
      const Complex lambda = std::polar(1.0, theta);
      const double ratio = resolvent_ratio(op, lambda, bound);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_lambda = lambda;
      }
    }
    r.lambda = best_lambda;
    r.ratio = best_ratio;
    r.dist = spectral_distance(best_lambda, sigma);
    r.resolvent = resolvent_norm(op, best_lambda);
    r.zarouf = zarouf_bound(opts.n, 1.0);
    r.davies_simon = davies_simon_bound(opts.n, 1.0, r.dist);
    r.ratio_ok = r.ratio <= r.zarouf + 1e-6;

    if (opts.proof_chain) {
      r.has_chain = true;
      const auto basis =
          std::make_shared<const MalmquistBasis>(build_basis(sigma, opts.degree));
      const ProjectionResult proj = project_kernel(basis, best_lambda);
      const WienerBoundRecord wb = wiener_upper_bound(proj, opts.quad_samples);
      r.malmquist_wiener = wb.computed_wiener;
      r.hardy_route = wb.hardy_route;
      r.analytic_bound = wb.analytic_bound;
      r.wiener_ok = wb.computed_wiener <= wb.analytic_bound + 1e-6 &&
                    wb.computed_wiener <= wb.hardy_route + 1e-8;

      const QuotientProblem problem =
          make_quotient_problem(best_lambda, sigma, opts.oracle_degree);
      const ComparisonRecord cmp = compare_with_construction(problem, proj);
      r.oracle_value = cmp.oracle;
      r.oracle_gap = cmp.gap;
      r.normalized_resolvent = r.resolvent / bound.value;
      r.oracle_dominance_ok = cmp.gap >= -1e-6;
      r.oracle_sandwich_ok = r.normalized_resolvent <= cmp.oracle + 1e-6;
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

inline int verify_exit_code(const std::vector<BoundReport>& reports) {
  for (const BoundReport& r : reports) {
    if (r.power.certified && !r.ratio_ok) return 1;
    if (r.has_chain && (!r.wiener_ok || !r.oracle_dominance_ok ||
                        (r.power.certified && !r.oracle_sandwich_ok)))
      return 1;
  }
  return 0;
}

inline std::string verify_reports_json(const std::vector<BoundReport>& reports) {
  using detail::fmt_bool;
  using detail::fmt_complex;
  using detail::fmt_double;
  std::string out = "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const BoundReport& r = reports[i];
    if (i) out += ",";
    out += "\n{\"id\":" + std::to_string(r.id);
    out += ",\"n\":" + std::to_string(r.n);
    out += ",\"family\":\"" + std::string(structure_name(r.structure.kind)) + "\"";
    out += ",\"norm\":\"" + std::string(norm_name(r.norm_kind)) + "\"";
    out += ",\"structure\":" + detail::fmt_structure(r.structure);
    out += ",\"spectrum\":" + detail::fmt_spectrum(r.spectrum);
    out += ",\"lambda\":" + fmt_complex(r.lambda);
    out += ",\"dist\":" + fmt_double(r.dist);
    out += ",\"resolvent_norm\":" + fmt_double(r.resolvent);
    out += ",\"power_bound\":{\"value\":" + fmt_double(r.power.value) +
           ",\"k_max\":" + std::to_string(r.power.k_max) +
           ",\"certified\":" + fmt_bool(r.power.certified) + "}";
    out += ",\"ratio\":" + fmt_double(r.ratio);
    out += ",\"zarouf_bound\":" + fmt_double(r.zarouf);
    out += ",\"davies_simon_bound\":" + fmt_double(r.davies_simon);
    if (r.has_chain) {
      out += ",\"malmquist_wiener\":" + fmt_double(r.malmquist_wiener);
      out += ",\"hardy_route\":" + fmt_double(r.hardy_route);
      out += ",\"analytic_bound\":" + fmt_double(r.analytic_bound);
      out += ",\"oracle_value\":" + fmt_double(r.oracle_value);
      out += ",\"oracle_gap\":" + fmt_double(r.oracle_gap);
      out += ",\"normalized_resolvent\":" + fmt_double(r.normalized_resolvent);
    } else {
      out += ",\"malmquist_wiener\":null,\"hardy_route\":null,\"analytic_bound\":null"
             ",\"oracle_value\":null,\"oracle_gap\":null,\"normalized_resolvent\":null";
    }
    out += ",\"pass\":{\"ratio_bound\":" + fmt_bool(r.ratio_ok);
    if (r.has_chain) {
      out += ",\"wiener_bound\":" + fmt_bool(r.wiener_ok);
      out += ",\"oracle_dominance\":" + fmt_bool(r.oracle_dominance_ok);
      out += ",\"oracle_sandwich\":" + fmt_bool(r.oracle_sandwich_ok);
    } else {
      out += ",\"wiener_bound\":null,\"oracle_dominance\":null,\"oracle_sandwich\":null";
    }
    out += "}}";
  }
  return out + "\n]\n";
}

inline std::string verify_reports_csv(const std::vector<BoundReport>& reports) {
  using detail::fmt_double;
  std::string out =
      "id,n,family,norm,lambda_re,lambda_im,dist,resolvent_norm,power_bound,certified,"
      "ratio,zarouf,davies_simon,ratio_ok\n";
  for (const BoundReport& r : reports) {
    out += std::to_string(r.id) + "," + std::to_string(r.n) + ",";
    out += structure_name(r.structure.kind);
    out += ",";
    out += norm_name(r.norm_kind);
    out += "," + fmt_double(r.lambda.real()) + "," + fmt_double(r.lambda.imag());
    out += "," + fmt_double(r.dist) + "," + fmt_double(r.resolvent);
    out += "," + fmt_double(r.power.value) + ",";
    out += r.power.certified ? "1" : "0";
    out += "," + fmt_double(r.ratio) + "," + fmt_double(r.zarouf);
    out += "," + fmt_double(r.davies_simon) + ",";
    out += r.ratio_ok ? "1" : "0";
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// bound-table

inline std::string bound_table_csv(int n_from, int n_to, double c) {
  if (n_from < 1 || n_to < n_from) throw std::invalid_argument("bound-table: bad n range");
  using detail::fmt_double;
  const double dx = crossover_distance();
  std::string out = "n,zarouf,asymptotic,ds_0.1,ds_crossover,ds_1,ds_2,hilbert_ref,lower_ref\n";
  for (int n = n_from; n <= n_to; ++n) {
    out += std::to_string(n);
    out += "," + fmt_double(zarouf_bound(n, c));
    out += "," + fmt_double(asymptotic_bound(n, c));
    out += "," + fmt_double(davies_simon_bound(n, c, 0.1));
    out += "," + fmt_double(davies_simon_bound(n, c, dx));
    out += "," + fmt_double(davies_simon_bound(n, c, 1.0));
    out += "," + fmt_double(davies_simon_bound(n, c, 2.0));
    out += "," + fmt_double(hilbert_reference(n));
    out += "," + fmt_double(lower_reference(n));
    out += "\n";
  }
  return out;
}

inline std::string bound_table_json(int n_from, int n_to, double c) {
  if (n_from < 1 || n_to < n_from) throw std::invalid_argument("bound-table: bad n range");
  using detail::fmt_double;
  const double dx = crossover_distance();
  std::string out = "[";
  for (int n = n_from; n <= n_to; ++n) {
    if (n > n_from) out += ",";
    out += "\n{\"n\":" + std::to_string(n);
    out += ",\"zarouf\":" + fmt_double(zarouf_bound(n, c));
    out += ",\"asymptotic\":" + fmt_double(asymptotic_bound(n, c));
    out += ",\"ds_0.1\":" + fmt_double(davies_simon_bound(n, c, 0.1));
    out += ",\"ds_crossover\":" + fmt_double(davies_simon_bound(n, c, dx));
    out += ",\"ds_1\":" + fmt_double(davies_simon_bound(n, c, 1.0));
    out += ",\"ds_2\":" + fmt_double(davies_simon_bound(n, c, 2.0));
    out += ",\"hilbert_ref\":" + fmt_double(hilbert_reference(n));
    out += ",\"lower_ref\":" + fmt_double(lower_reference(n));
    out += ",\"crossover_dist\":" + fmt_double(dx);
    out += "}";
  }
  return out + "\n]\n";
}

// ---------------------------------------------------------------------------
// spectrum files

inline std::vector<Complex> parse_spectrum_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spectrum file: parse error: ") + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw std::invalid_argument("spectrum file: expected a nonempty JSON array of {re, im}");
  std::vector<Complex> pts;
  pts.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("re") || !item.contains("im") ||
        !item["re"].is_number() || !item["im"].is_number())
      throw std::invalid_argument("spectrum file: each entry must be {\"re\": num, \"im\": num}");
    pts.emplace_back(item["re"].get<double>(), item["im"].get<double>());
  }
  return pts;
}

// ---------------------------------------------------------------------------
// basis-check

struct BasisCheckResult {
  double gram_deviation = 0.0;
  double interpolation_residual = 0.0;
  double reconstruction_error = 0.0;
  double worst_h1_slack = 0.0; // min over terms/lambdas of (bound - norm); >= 0 when ok
  bool pass = false;
};

inline double max_coefficient_difference(const TaylorSeries& a, const TaylorSeries& b) {
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  double worst = 0.0;
  const std::size_t m = std::max(ca.size(), cb.size());
  for (std::size_t i = 0; i < m; ++i) {
    const Complex va = i < ca.size() ? ca[i] : Complex(0.0, 0.0);
    const Complex vb = i < cb.size() ? cb[i] : Complex(0.0, 0.0);
    worst = std::max(worst, std::abs(va - vb));
  }
  return worst;
}

inline BasisCheckResult run_basis_check(const Spectrum& sigma, std::size_t degree,
                                        std::size_t quad_samples, std::ostream& log) {
  const auto basis = std::make_shared<const MalmquistBasis>(build_basis(sigma, degree));
  BasisCheckResult res;
  res.gram_deviation = gram_deviation(*basis);
  log << "n = " << sigma.n() << ", degree = " << degree
      << ", modulus cap = " << sigma.modulus_cap() << "\n";
  log << "gram deviation: " << res.gram_deviation << "\n";

  std::vector<Complex> lambdas;
  for (int t = 0; t < 16; ++t)
    lambdas.push_back(std::polar(1.0, 2.0 * kPi * static_cast<double>(t) / 16.0));
  for (double radius : {1.25, 2.0, 4.0}) lambdas.push_back(Complex(radius, 0.0));

  for (Complex lambda : lambdas) {
    const ProjectionResult proj = project_kernel(basis, lambda);
    res.interpolation_residual =
        std::max(res.interpolation_residual, interpolation_residual(proj));
  }
  log << "interpolation residual over " << lambdas.size()
      << " lambda samples: " << res.interpolation_residual << "\n";

  const std::vector<Complex> deep_lambdas = {
      Complex(1.0, 0.0), std::polar(1.0, 2.0 * kPi * 3.0 / 16.0), Complex(2.0, 0.0)};
  double min_slack = 1e300;
  for (Complex lambda : deep_lambdas) {
    const ProjectionResult proj = project_kernel(basis, lambda);
    const DerivativeTerms terms = derivative_terms(proj);
    const TaylorSeries sum = add(add(terms.first_element_term, terms.log_derivative_term),
                                 terms.kernel_sum_term);
    // function = (1/lambda) P_B k, so the term sum must match lambda * function'
    const TaylorSeries reference = scale(differentiate(proj.function), lambda);
    res.reconstruction_error =
        std::max(res.reconstruction_error, max_coefficient_difference(sum, reference));

    const double h1_first = hardy_norm(terms.first_element_term, 1, quad_samples);
    const double h1_log = hardy_norm(terms.log_derivative_term, 1, quad_samples);
    const double h1_kernel = hardy_norm(terms.kernel_sum_term, 1, quad_samples);
    min_slack = std::min({min_slack, terms.first_element_bound - h1_first,
                          terms.log_derivative_bound - h1_log,
                          terms.kernel_sum_bound - h1_kernel});
    log << "H1 terms at lambda=(" << lambda.real() << "," << lambda.imag() << "): "
        << h1_first << " <= " << terms.first_element_bound << ", " << h1_log
        << " <= " << terms.log_derivative_bound << ", " << h1_kernel << " <= "
        << terms.kernel_sum_bound << "\n";
  }
  res.worst_h1_slack = min_slack;
  log << "derivative reconstruction error: " << res.reconstruction_error << "\n";

  res.pass = res.gram_deviation <= 1e-10 && res.interpolation_residual <= 1e-8 &&
             res.reconstruction_error <= 1e-10 && res.worst_h1_slack >= -1e-8;
  log << "result: " << (res.pass ? "PASS" : "FAIL") << "\n";
  return res;
}

// ---------------------------------------------------------------------------
// search / oracle-compare serialization

inline std::string search_record_json(const SearchRecord& rec) {
  using detail::fmt_bool;
  using detail::fmt_complex;
  using detail::fmt_double;
  const SearchConfig& cfg = rec.config;
  std::string out = "{\"config\":{";
  out += "\"n\":" + std::to_string(cfg.n);
  out += ",\"family\":\"" + std::string(structure_name(cfg.family)) + "\"";
  out += ",\"norm\":\"" + std::string(norm_name(cfg.norm_kind)) + "\"";
  out += ",\"restarts\":" + std::to_string(cfg.restarts);
  out += ",\"local_steps\":" + std::to_string(cfg.local_steps);
  out += ",\"seed\":\"" + std::to_string(cfg.seed) + "\"";
  out += ",\"lambda_grid\":" + std::to_string(cfg.lambda_grid);
  out += ",\"modulus_cap\":" + fmt_double(cfg.modulus_cap);
  out += ",\"contraction\":" + fmt_bool(cfg.contraction);
  out += ",\"full_plane\":" + fmt_bool(cfg.full_plane);
  out += "},\"best_ratio\":" + fmt_double(rec.best_ratio);
  out += ",\"certified_C\":" + fmt_bool(rec.certified_C);
  out += ",\"witness\":{";
  out += "\"structure\":" + detail::fmt_structure(rec.witness.structure);
  out += ",\"spectrum\":" + detail::fmt_spectrum(rec.witness.spectrum);
  out += ",\"rescale\":" + fmt_double(rec.witness.rescale);
  out += ",\"lambda\":" + fmt_complex(rec.witness.lambda);
  out += ",\"ratio\":" + fmt_double(rec.witness.ratio);
  out += ",\"power_bound\":" + fmt_double(rec.witness.power_bound_value);
  out += ",\"certified\":" + fmt_bool(rec.witness.certified);
  out += ",\"resolvent_norm\":" + fmt_double(rec.witness.resolvent);
  out += ",\"dist\":" + fmt_double(rec.witness.dist);
  out += "},\"per_restart_bests\":[";
  for (std::size_t i = 0; i < rec.per_restart_bests.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(rec.per_restart_bests[i]);
  }
  out += "]}\n";
  return out;
}

struct OracleCompareReport {
  Complex lambda;
  std::vector<Complex> spectrum;
  std::size_t degree = 0;
  ComparisonRecord comparison{0, 0, 0, 0, 0};
  double conditioning = 1.0;
};

inline OracleCompareReport run_oracle_compare(const Spectrum& sigma, Complex lambda,
                                              std::size_t degree, int max_iters = 20000,
                                              double tol = 1e-8) {
  const std::size_t basis_degree = std::max<std::size_t>(degree, 256);
  const auto basis = std::make_shared<const MalmquistBasis>(build_basis(sigma, basis_degree));
  const ProjectionResult proj = project_kernel(basis, lambda);
  const QuotientProblem problem = make_quotient_problem(lambda, sigma, degree);
  OracleCompareReport rep;
  rep.lambda = lambda;
  rep.spectrum = sigma.points();
  rep.degree = degree;
  rep.comparison = compare_with_construction(problem, proj, max_iters, tol);
  rep.conditioning = solve_quotient(problem, 1, tol).conditioning;
  return rep;
}

inline std::string oracle_compare_json(const OracleCompareReport& rep) {
  using detail::fmt_complex;
  using detail::fmt_double;
  std::string out = "{\"lambda\":" + fmt_complex(rep.lambda);
  out += ",\"spectrum\":" + detail::fmt_spectrum(rep.spectrum);
  out += ",\"degree\":" + std::to_string(rep.degree);
  out += ",\"oracle\":" + fmt_double(rep.comparison.oracle);
  out += ",\"construction\":" + fmt_double(rep.comparison.construction);
  out += ",\"gap\":" + fmt_double(rep.comparison.gap);
  out += ",\"residual\":" + fmt_double(rep.comparison.residual);
  out += ",\"iterations\":" + std::to_string(rep.comparison.iterations);
  out += ",\"conditioning\":" + fmt_double(rep.conditioning);
  out += "}\n";
  return out;
}

} // namespace resolvent
