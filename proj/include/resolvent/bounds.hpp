#pragma once

// Closed forms for every named constant the verification compares against.
// All values are computed from scratch on each call so tests always compare
// two independent evaluations rather than a cached literal.

#include <cmath>
#include <stdexcept>

#include "resolvent/taylor.hpp"

namespace resolvent {

// C (5 pi/3 + 2 sqrt 2) n^{3/2}: the proven ceiling for the normalized
// resolvent ratio over all power-bounded n x n operators.
inline double zarouf_bound(int n, double c) {
  if (n < 1) throw std::domain_error("zarouf_bound: n must be >= 1");
  if (!(c >= 1.0)) throw std::domain_error("zarouf_bound: C must be >= 1");
  return c * (5.0 * kPi / 3.0 + 2.0 * std::sqrt(2.0)) * std::pow(static_cast<double>(n), 1.5);
}

// Leading asymptotic coefficient: limsup n^{-3/2} of the ratio is <= 5 C pi/3.
inline double asymptotic_bound(int n, double c) {
  if (n < 1) throw std::domain_error("asymptotic_bound: n must be >= 1");
  return 5.0 * c * kPi / 3.0 * std::pow(static_cast<double>(n), 1.5);
}

// C (3n/dist)^{3/2}: the earlier bound this toolkit's main inequality sharpens.
inline double davies_simon_bound(int n, double c, double dist) {
  if (n < 1) throw std::domain_error("davies_simon_bound: n must be >= 1");
  if (!(dist > 0.0)) throw std::domain_error("davies_simon_bound: dist must be > 0");
  return c * std::pow(3.0 * static_cast<double>(n) / dist, 1.5);
}

// cot(pi/(4n)): the exact ratio supremum when the operator is a Hilbert-space
// contraction; grows linearly, ~ 4n/pi.
inline double hilbert_reference(int n) {
  if (n < 1) throw std::domain_error("hilbert_reference: n must be >= 1");
  const double x = kPi / (4.0 * static_cast<double>(n));
  return std::cos(x) / std::sin(x);
}

// Per-n slope 1 + r obtained for contractions with spectral radius r; beats
// the 4/pi slope of cot(pi/4n) exactly when 1 + r < 4/pi.
inline double contraction_linear_bound(double r) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::domain_error("contraction_linear_bound: r must lie in [0,1)");
  return 1.0 + r;
}

inline bool contraction_linear_regime(double r) {
  return contraction_linear_bound(r) < 4.0 / kPi;
}

// n (2 + sqrt 3)/3: the known linear lower reference for the ratio growth.
inline double lower_reference(int n) {
  if (n < 1) throw std::domain_error("lower_reference: n must be >= 1");
  return static_cast<double>(n) * (2.0 + std::sqrt(3.0)) / 3.0;
}

// Distance at which C (3n/d)^{3/2} and zarouf_bound(n,C)/d cross, independent
// of n and C: d = (3^{3/2} / (5 pi/3 + 2 sqrt 2))^2.
inline double crossover_distance() {
  const double ratio = std::pow(3.0, 1.5) / (5.0 * kPi / 3.0 + 2.0 * std::sqrt(2.0));
  return ratio * ratio;
}

} // namespace resolvent
