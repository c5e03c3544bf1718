#pragma once

// Seeded randomized search for instances maximizing the normalized ratio
// ||R(lambda,T)|| dist(lambda,sigma) / C(T). Restarts draw independent
// streams derived from (seed, restart index), so results are reproducible
// and adding restarts never changes earlier ones. The lambda maximization
// runs on the unit circle (grid scan plus golden-section refinement of the
// angle); the scaling lemma makes that sufficient, and an optional
// full-plane sample double-checks that boundary values dominate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "resolvent/bounds.hpp"
#include "resolvent/matrix_ops.hpp"
#include "resolvent/spectrum.hpp"

namespace resolvent {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

} // namespace detail

struct SearchConfig {
  int n = 2;
  Structure::Kind family = Structure::Kind::jordan;
  NormKind norm_kind = NormKind::p2;
  int restarts = 16;
  int local_steps = 20;
  std::uint64_t seed = 0;
  int lambda_grid = 256;
  double modulus_cap = kDefaultModulusCap;
  bool contraction = false;  // rescale to ||T||_2 <= 1, forcing C = 1
  bool full_plane = false;   // also sample |lambda| in (1,4]
};

struct SearchWitness {
  Structure structure;
  std::vector<Complex> spectrum;
  double rescale = 1.0;  // contraction normalization divisor applied
  Complex lambda = Complex(1.0, 0.0);
  double ratio = 0.0;
  double power_bound_value = 1.0;
  bool certified = true;
  double resolvent = 0.0;
  double dist = 0.0;
};

struct SearchRecord {
  double best_ratio = 0.0;
  SearchWitness witness;
  std::vector<double> per_restart_bests;
  SearchConfig config;
  bool certified_C = false;
};

namespace detail {

struct Candidate {
  std::vector<double> moduli;
  std::vector<double> angles;
  double coupling = 1.0;
  double conditioning = 1.0;
  std::uint64_t matrix_seed = 0;
};

inline bool candidate_spectrum(const Candidate& c, double cap, std::vector<Complex>& out) {
  out.clear();
  for (std::size_t i = 0; i < c.moduli.size(); ++i) {
    if (c.moduli[i] > cap * 0.999 || c.moduli[i] < 0.0) return false;
    out.push_back(std::polar(c.moduli[i], c.angles[i]));
  }
  return true;
}

// Builds the operator, normalizes it when contraction mode is on, and
// maximizes the ratio over lambda. Returns false when the candidate is
// unusable (cap violations, clustered jordan eigenvalues, numerics).
inline bool evaluate_candidate(const SearchConfig& cfg, const Candidate& cand,
                               SearchWitness& out) {
  std::vector<Complex> pts;
  if (!candidate_spectrum(cand, cfg.modulus_cap, pts)) return false;

  try {
    Spectrum sigma(pts, cfg.modulus_cap);
    Structure structure;
    switch (cfg.family) {
      case Structure::Kind::diagonal: structure = Structure::diagonal(); break;
      case Structure::Kind::jordan: structure = Structure::jordan(cand.coupling); break;
      default: structure = Structure::similarity(cand.conditioning, cand.matrix_seed); break;
    }
    MatrixOperator op = from_spectrum(sigma, structure, cfg.norm_kind);

    double rescale = 1.0;
    PowerBoundEstimate bound;
    if (cfg.contraction) {
      const double s = operator_norm(op.entries, NormKind::p2);
      if (s > 1.0) {
        rescale = s;
        op = scaled(op, s);
      }
      bound = PowerBoundEstimate{1.0, 0, true}; // ||T^k||_2 <= ||T||_2^k <= 1, hit at k=0
    } else {
      bound = power_bound(op);
    }

    const double two_pi = 2.0 * kPi;
    const auto ratio_at_angle = [&](double theta) {
      return resolvent_ratio(op, std::polar(1.0, theta), bound);
    };

    int best_t = 0;
    double best_ratio = -1.0;
    for (int t = 0; t < cfg.lambda_grid; ++t) {
      const double theta = two_pi * static_cast<double>(t) / static_cast<double>(cfg.lambda_grid);
      const double r = ratio_at_angle(theta);
      if (r > best_ratio) {
        best_ratio = r;
        best_t = t;
      }
    }

    const double step = two_pi / static_cast<double>(cfg.lambda_grid);
    double lo = step * (static_cast<double>(best_t) - 1.0);
    double hi = step * (static_cast<double>(best_t) + 1.0);
    const double inv_phi = 0.6180339887498948482;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = ratio_at_angle(x1);
    double f2 = ratio_at_angle(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = ratio_at_angle(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = ratio_at_angle(x1);
      }
    }
    double best_theta = step * static_cast<double>(best_t);
    for (double theta : {x1, x2}) {
      if (ratio_at_angle(theta) > best_ratio) {
        best_ratio = ratio_at_angle(theta);
        best_theta = theta;
      }
    }
    Complex best_lambda = std::polar(1.0, best_theta);

    if (cfg.full_plane) {
      std::mt19937_64 rng(derive_seed(cand.matrix_seed, 0xF0F0));
      std::uniform_real_distribution<double> uradius(1.0, 4.0);
      std::uniform_real_distribution<double> uangle(0.0, two_pi);
      for (int s = 0; s < 8; ++s) {
        const double radius = std::max(1.0 + 1e-9, uradius(rng));
        const Complex lambda = std::polar(radius, uangle(rng));
        const double r = resolvent_ratio(op, lambda, bound);
        if (r > best_ratio) {
          best_ratio = r;
          best_lambda = lambda;
        }
      }
    }

    const double ceiling = zarouf_bound(cfg.n, 1.0) + 1e-6;
    if (best_ratio > ceiling && bound.certified) {
      std::ostringstream oss;
      oss << "search: certified ratio " << best_ratio << " exceeds the proven bound "
          << ceiling << " (n=" << cfg.n << ", family=" << structure_name(cfg.family)
          << ", norm=" << norm_name(cfg.norm_kind) << ", lambda=(" << best_lambda.real()
          << "," << best_lambda.imag() << "), C=" << bound.value
          << ")";
      throw violation_error(oss.str());
    }

    out.structure = op.structure;
    out.spectrum = op.spectrum.points();
    out.rescale = rescale;
    out.lambda = best_lambda;
    out.ratio = best_ratio;
    out.power_bound_value = bound.value;
    out.certified = bound.certified;
    out.resolvent = resolvent_norm(op, best_lambda);
    out.dist = spectral_distance(best_lambda, op.spectrum);
    return true;
  } catch (const violation_error&) {
    throw;
  } catch (const std::exception&) {
    return false; // skip numerically failed candidates
  }
}

inline Candidate draw_candidate(const SearchConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Candidate cand;
  const double rmax = cfg.modulus_cap * 0.98;
  for (int attempt = 0; attempt < 200; ++attempt) {
    cand.moduli.clear();
    cand.angles.clear();
    for (int i = 0; i < cfg.n; ++i) {
      cand.moduli.push_back(rmax * std::sqrt(unit(rng)));
      cand.angles.push_back(2.0 * kPi * unit(rng));
    }
    if (cfg.family != Structure::Kind::jordan) break;
    // keep jordan eigenvalues separated so the power bound certifies
    double min_gap = 2.0;
    for (int i = 0; i < cfg.n; ++i)
      for (int j = i + 1; j < cfg.n; ++j)
        min_gap = std::min(min_gap, std::abs(std::polar(cand.moduli[i], cand.angles[i]) -
                                             std::polar(cand.moduli[j], cand.angles[j])));
    if (cfg.n == 1 || min_gap > 0.05) break;
  }
  cand.coupling = std::exp(std::uniform_real_distribution<double>(std::log(0.25), std::log(4.0))(rng));
  cand.conditioning = std::exp(std::uniform_real_distribution<double>(0.0, std::log(50.0))(rng));
  cand.matrix_seed = rng();
  return cand;
}

} // namespace detail

inline SearchRecord search(const SearchConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("search: restarts must be >= 1");
  if (cfg.lambda_grid < 64) throw std::invalid_argument("search: lambda_grid must be >= 64");
  if (cfg.n < 1) throw std::invalid_argument("search: n must be >= 1");
  if (cfg.contraction && cfg.norm_kind != NormKind::p2)
    throw std::invalid_argument("search: contraction mode requires the 2-norm");

  SearchRecord record;
  record.config = cfg;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::mt19937_64 rng(detail::derive_seed(cfg.seed, static_cast<std::uint64_t>(restart)));

    std::vector<detail::Candidate> starts;
    if (restart == 0 && cfg.family == Structure::Kind::jordan) {
      // canonical extremal start: the nilpotent block with unit coupling
      detail::Candidate canonical;
      canonical.moduli.assign(static_cast<std::size_t>(cfg.n), 0.0);
      canonical.angles.assign(static_cast<std::size_t>(cfg.n), 0.0);
      canonical.coupling = 1.0;
      canonical.matrix_seed = detail::derive_seed(cfg.seed, 0xC0DE);
      starts.push_back(canonical);
    }
    starts.push_back(detail::draw_candidate(cfg, rng));

    double restart_best = -1.0;
    for (const detail::Candidate& start : starts) {
      detail::Candidate current = start;
      SearchWitness witness;
      if (!detail::evaluate_candidate(cfg, current, witness)) continue;

      // accept-on-improvement coordinate walk; multiplicative steps
      const std::size_t coords = 2 * static_cast<std::size_t>(cfg.n) + 1;
      for (int step = 0; step < cfg.local_steps; ++step) {
        const std::size_t c = static_cast<std::size_t>(step) % coords;
        for (double factor : {1.1, 1.0 / 1.1}) {
          detail::Candidate trial = current;
          if (c < static_cast<std::size_t>(cfg.n)) {
            trial.moduli[c] = std::min(trial.moduli[c] * factor, cfg.modulus_cap * 0.999);
          } else if (c < 2 * static_cast<std::size_t>(cfg.n)) {
            trial.angles[c - static_cast<std::size_t>(cfg.n)] *= factor;
          } else if (cfg.family == Structure::Kind::jordan) {
            trial.coupling *= factor;
          } else if (cfg.family == Structure::Kind::similarity) {
            trial.conditioning = std::max(1.0, trial.conditioning * factor);
          } else {
            continue;
          }
          SearchWitness trial_witness;
          if (detail::evaluate_candidate(cfg, trial, trial_witness) &&
              trial_witness.ratio > witness.ratio) {
            current = trial;
            witness = trial_witness;
          }
        }
      }

      if (witness.ratio > restart_best) restart_best = witness.ratio;
      if (witness.ratio > record.best_ratio) {
        record.best_ratio = witness.ratio;
        record.witness = witness;
        record.certified_C = witness.certified;
      }
    }
    record.per_restart_bests.push_back(restart_best);
  }
  return record;
}

// Restriction to Hilbert-space contractions: every instance is rescaled to
// ||T||_2 <= 1 so C = 1 exactly, and the ratio is checked against the
// cot(pi/4n) ceiling known for that class.
inline SearchRecord contraction_search(SearchConfig cfg) {
  cfg.contraction = true;
  if (cfg.norm_kind != NormKind::p2)
    throw std::invalid_argument("contraction_search: norm_kind must be the 2-norm");
  SearchRecord record = search(cfg);
  const double ceiling = hilbert_reference(cfg.n) + 1e-6;
  if (record.best_ratio > ceiling) {
    std::ostringstream oss;
    oss << "contraction_search: ratio " << record.best_ratio
        << " exceeds the contraction ceiling " << ceiling << " at n=" << cfg.n
        << ", restarts=" << cfg.restarts;
    throw violation_error(oss.str());
  }
  return record;
}

} // namespace resolvent
