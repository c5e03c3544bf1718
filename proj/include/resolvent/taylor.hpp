#pragma once

// Truncated Taylor series on the unit disk with certified geometric tails.
// A series stores coefficients c_0..c_N together with an envelope
// |c_m| <= tail_constant * decay_rate^m, so coefficient-sum norms carry an
// explicit error bar instead of a silent truncation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "resolvent/errors.hpp"
#include "resolvent/fft.hpp"

namespace resolvent {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338328;

namespace detail {

// sup_{m>=0} (m+1) t^m for 0 <= t < 1; the price of absorbing one linear
// factor into a geometric envelope after a rate bump.
inline double linear_factor_peak(double t) {
  if (t <= 0.0) return 1.0;
  const double m_star = -1.0 / std::log(t) - 1.0;
  double best = 1.0;
  for (double m : {std::floor(m_star), std::ceil(m_star)}) {
    if (m < 0.0) m = 0.0;
    best = std::max(best, (m + 1.0) * std::pow(t, m));
  }
  return best;
}

} // namespace detail

class TaylorSeries {
public:
  // coeffs holds c_0..c_N. The pair (tail_constant, decay_rate) certifies
  // |c_m| <= tail_constant * decay_rate^m; library constructors establish
  // this for every index m, and the arithmetic below preserves that.
  TaylorSeries(std::vector<Complex> coeffs, double decay_rate, double tail_constant)
      : coeffs_(std::move(coeffs)), decay_rate_(decay_rate), tail_constant_(tail_constant) {
    if (coeffs_.empty()) coeffs_.push_back(Complex(0.0, 0.0));
    if (!(decay_rate_ >= 0.0 && decay_rate_ < 1.0))
      throw std::domain_error("TaylorSeries: decay_rate must lie in [0,1)");
    if (!(tail_constant_ >= 0.0) || !std::isfinite(tail_constant_))
      throw precision_error("TaylorSeries: tail_constant must be finite and nonnegative");
  }

  static TaylorSeries polynomial(std::vector<Complex> coeffs) {
    return TaylorSeries(std::move(coeffs), 0.0, 0.0);
  }

  static TaylorSeries zero() { return polynomial({Complex(0.0, 0.0)}); }

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  double decay_rate() const { return decay_rate_; }
  double tail_constant() const { return tail_constant_; }

  // True beyond-degree coefficients are identically zero.
  bool exact() const { return tail_constant_ == 0.0 || decay_rate_ == 0.0; }

  // Bound on sum_{m>N} |c_m|, the Wiener-norm truncation error.
  double wiener_tail() const {
    if (exact()) return 0.0;
    return tail_constant_ * std::pow(decay_rate_, static_cast<double>(coeffs_.size())) /
           (1.0 - decay_rate_);
  }

private:
  std::vector<Complex> coeffs_;
  double decay_rate_;
  double tail_constant_;
};

// Reproducing kernel k_w(z) = 1/(1 - conj(w) z), truncated.
inline TaylorSeries cauchy_kernel(Complex w, std::size_t degree) {
  if (!(std::abs(w) < 1.0))
    throw std::domain_error("cauchy_kernel: point must lie strictly inside the unit disk");
  std::vector<Complex> c(degree + 1);
  Complex p(1.0, 0.0);
  const Complex wb = std::conj(w);
  for (std::size_t m = 0; m <= degree; ++m) {
    c[m] = p;
    p *= wb;
  }
  return TaylorSeries(std::move(c), std::abs(w), 1.0);
}

inline Complex evaluate(const TaylorSeries& f, Complex z) {
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::domain_error("evaluate: |z| > 1 is outside the certified domain");
  const auto& c = f.coeffs();
  Complex acc(0.0, 0.0);
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

inline TaylorSeries differentiate(const TaylorSeries& f) {
  const auto& c = f.coeffs();
  if (c.size() == 1) return TaylorSeries::zero();
  std::vector<Complex> d(c.size() - 1);
  for (std::size_t m = 0; m + 1 < c.size(); ++m)
    d[m] = static_cast<double>(m + 1) * c[m + 1];
  if (f.exact()) return TaylorSeries(std::move(d), 0.0, 0.0);
  // |(m+1) c_{m+1}| <= (m+1) A rho^{m+1}: one rate bump absorbs the factor.
  const double rho = f.decay_rate();
  const double bumped = 0.5 * (1.0 + rho);
  const double a = f.tail_constant() * rho * detail::linear_factor_peak(rho / bumped);
  return TaylorSeries(std::move(d), bumped, a);
}

struct WienerNorm {
  double value = 0.0;
  double tail = 0.0; // certified bound on the discarded coefficient mass
};

inline WienerNorm wiener_norm(const TaylorSeries& f) {
  double s = 0.0;
  for (const Complex& c : f.coeffs()) s += std::abs(c);
  return WienerNorm{s, f.wiener_tail()};
}

// Values of the truncated series at the samples-th roots of unity,
// ordered by angle 2*pi*t/samples.
inline std::vector<Complex> circle_values(const TaylorSeries& f, std::size_t samples) {
  if (!detail::is_power_of_two(samples) || samples < 256)
    throw std::invalid_argument("circle_values: samples must be a power of two, >= 256");
  std::vector<Complex> a(samples, Complex(0.0, 0.0));
  const auto& c = f.coeffs();
  for (std::size_t m = 0; m < c.size(); ++m) a[m % samples] += c[m];
  detail::fft_synthesis(a);
  return a;
}

// p = 2: coefficient l2 sum. p = 1: mean of |f| over a uniform circle grid
// (periodic trapezoid, spectrally accurate for these analytic integrands).
inline double hardy_norm(const TaylorSeries& f, int p, std::size_t samples) {
  if (!detail::is_power_of_two(samples) || samples < 256)
    throw std::invalid_argument("hardy_norm: samples must be a power of two, >= 256");
  if (p == 2) {
    double s = 0.0;
    for (const Complex& c : f.coeffs()) s += std::norm(c);
    return std::sqrt(s);
  }
  if (p != 1) throw std::invalid_argument("hardy_norm: p must be 1 or 2");
  const auto vals = circle_values(f, samples);
  double s = 0.0;
  for (const Complex& v : vals) s += std::abs(v);
  return s / static_cast<double>(samples);
}

inline TaylorSeries truncate(const TaylorSeries& f, std::size_t degree) {
  if (degree >= f.degree()) return f;
  std::vector<Complex> c(f.coeffs().begin(), f.coeffs().begin() + degree + 1);
  return TaylorSeries(std::move(c), f.decay_rate(), f.tail_constant());
}

inline TaylorSeries add(const TaylorSeries& f, const TaylorSeries& g) {
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  std::vector<Complex> c(std::max(a.size(), b.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  const double rho = std::max(f.exact() ? 0.0 : f.decay_rate(), g.exact() ? 0.0 : g.decay_rate());
  const double cst = (f.exact() ? 0.0 : f.tail_constant()) + (g.exact() ? 0.0 : g.tail_constant());
  return TaylorSeries(std::move(c), rho, rho == 0.0 ? 0.0 : cst);
}

inline TaylorSeries scale(const TaylorSeries& f, Complex s) {
  std::vector<Complex> c = f.coeffs();
  for (Complex& v : c) v *= s;
  return TaylorSeries(std::move(c), f.decay_rate(), f.tail_constant() * std::abs(s));
}

// Cauchy product. The stored degree is chosen so every kept coefficient is a
// complete convolution of stored inputs: exact factors do not limit it,
// truncated factors cap it at their own degree. Tail metadata distinguishes
// three regimes so certified bars stay usable through long factor chains:
// exact x series (weighted sum), distinct rates (max rate, geometric ratio
// constant), equal rates (single rate bump absorbing the linear factor).
inline TaylorSeries multiply(const TaylorSeries& f, const TaylorSeries& g) {
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();

  std::size_t degree;
  if (f.exact() && g.exact()) degree = f.degree() + g.degree();
  else if (f.exact()) degree = g.degree();
  else if (g.exact()) degree = f.degree();
  else degree = std::min(f.degree(), g.degree());

  std::vector<Complex> c(degree + 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > degree) break;
    const Complex ai = a[i];
    if (ai == Complex(0.0, 0.0)) continue;
    const std::size_t jmax = std::min(b.size() - 1, degree - i);
    for (std::size_t j = 0; j <= jmax; ++j) c[i + j] += ai * b[j];
  }

  if (f.exact() && g.exact()) return TaylorSeries(std::move(c), 0.0, 0.0);

  if (f.exact() || g.exact()) {
    const TaylorSeries& poly = f.exact() ? f : g;
    const TaylorSeries& ser = f.exact() ? g : f;
    const double rho = ser.decay_rate();
    double w = 0.0;
    double rinv = 1.0;
    for (const Complex& pc : poly.coeffs()) {
      if (!std::isfinite(rinv) && std::abs(pc) > 0.0) w = rinv;
      if (!std::isfinite(w)) break;
      w += std::abs(pc) * rinv;
      rinv /= rho;
    }
    if (!std::isfinite(w))
      throw precision_error("multiply: tail envelope not representable");
    return TaylorSeries(std::move(c), rho, ser.tail_constant() * w);
  }

  const double rf = f.decay_rate();
  const double rg = g.decay_rate();
  const double af = f.tail_constant();
  const double ag = g.tail_constant();
  if (rf == rg) {
    const double bumped = 0.5 * (1.0 + rf);
    const double cst = af * ag * detail::linear_factor_peak(rf / bumped);
    return TaylorSeries(std::move(c), bumped, cst);
  }
  const double rho = std::max(rf, rg);
  const double cst = af * ag / (1.0 - std::min(rf, rg) / rho);
  return TaylorSeries(std::move(c), rho, cst);
}

inline TaylorSeries multiply(const TaylorSeries& f, const TaylorSeries& g, std::size_t max_degree) {
  return truncate(multiply(f, g), max_degree);
}

// Newton quotient (f - f(mu)) / (z - mu), computed by the backward
// recurrence h_{m-1} = c_m + mu h_m (stable for |mu| < 1). When f(mu) is
// known to vanish this is exact synthetic deflation of the zero at mu.
inline TaylorSeries deflate(const TaylorSeries& f, Complex mu) {
  if (!(std::abs(mu) < 1.0)) throw std::domain_error("deflate: |mu| must be < 1");
  const auto& c = f.coeffs();
  if (c.size() == 1) return TaylorSeries::zero();
  std::vector<Complex> h(c.size() - 1);
  Complex run = c.back();
  for (std::size_t m = c.size() - 1; m-- > 0;) {
    h[m] = run;
    run = c[m] + mu * run;
  }
  if (f.exact()) return TaylorSeries(std::move(h), 0.0, 0.0);
  const double rho = f.decay_rate();
  const double cst = f.tail_constant() * rho / (1.0 - rho * std::abs(mu));
  return TaylorSeries(std::move(h), rho, cst);
}

} // namespace resolvent
