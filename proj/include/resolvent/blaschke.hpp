#pragma once

// Blaschke factors b_mu(z) = (mu - z)/(1 - conj(mu) z), finite products of
// them, and the logarithmic derivative b'/b. Pointwise values are computed
// from the rational expressions directly; series forms go through the
// Taylor-series multiply so their truncation tails stay certified.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "resolvent/errors.hpp"
#include "resolvent/taylor.hpp"

namespace resolvent {

struct BlaschkeFactor {
  Complex zero;

  explicit BlaschkeFactor(Complex mu) : zero(mu) {
    if (!(std::abs(mu) < 1.0))
      throw std::domain_error("BlaschkeFactor: zero must lie strictly inside the unit disk");
  }
};

struct BlaschkeProduct {
  std::vector<BlaschkeFactor> factors;

  BlaschkeProduct() = default;
  explicit BlaschkeProduct(const std::vector<Complex>& zeros) {
    factors.reserve(zeros.size());
    for (Complex mu : zeros) factors.emplace_back(mu);
  }
};

inline Complex factor_eval(const BlaschkeFactor& b, Complex z) {
  const Complex denom = Complex(1.0, 0.0) - std::conj(b.zero) * z;
  if (std::abs(denom) < 1e-14)
    throw singular_error("factor_eval: z is at the pole 1/conj(mu)");
  return (b.zero - z) / denom;
}

inline Complex product_eval(const BlaschkeProduct& B, Complex z) {
  Complex acc(1.0, 0.0);
  for (const BlaschkeFactor& b : B.factors) acc *= factor_eval(b, z);
  return acc;
}

// b'/b = 1/(z - mu) + conj(mu)/(1 - conj(mu) z).
// (b' = (|mu|^2 - 1)/(1 - conj(mu) z)^2, so the quotient has a simple pole
// with residue +1 at the zero; the finite-difference oracle in the tests
// pins the sign.)
inline Complex log_derivative_eval(const BlaschkeFactor& b, Complex z) {
  const Complex at_zero = z - b.zero;
  const Complex denom = Complex(1.0, 0.0) - std::conj(b.zero) * z;
  if (std::abs(at_zero) < 1e-14)
    throw singular_error("log_derivative_eval: z is at the zero mu");
  if (std::abs(denom) < 1e-14)
    throw singular_error("log_derivative_eval: z is at the pole 1/conj(mu)");
  return Complex(1.0, 0.0) / at_zero + std::conj(b.zero) / denom;
}

// L2(torus) norm of b'/b by periodic trapezoid quadrature.
inline double log_derivative_l2(const BlaschkeFactor& b, std::size_t samples) {
  if (samples < 1024)
    throw std::invalid_argument("log_derivative_l2: need at least 1024 samples");
  const double two_pi = 6.283185307179586476925286766559;
  double acc = 0.0;
  for (std::size_t t = 0; t < samples; ++t) {
    const double theta = two_pi * static_cast<double>(t) / static_cast<double>(samples);
    acc += std::norm(log_derivative_eval(b, std::polar(1.0, theta)));
  }
  return std::sqrt(acc / static_cast<double>(samples));
}

// Truncated series of one factor: (mu - z) * k_mu(z).
inline TaylorSeries factor_series(const BlaschkeFactor& b, std::size_t degree) {
  const TaylorSeries numerator = TaylorSeries::polynomial({b.zero, Complex(-1.0, 0.0)});
  return multiply(numerator, cauchy_kernel(b.zero, degree));
}

// Truncated series of b' = (|mu|^2 - 1) k_mu^2.
inline TaylorSeries factor_derivative_series(const BlaschkeFactor& b, std::size_t degree) {
  const TaylorSeries k = cauchy_kernel(b.zero, degree);
  return scale(multiply(k, k), Complex(std::norm(b.zero) - 1.0, 0.0));
}

} // namespace resolvent
