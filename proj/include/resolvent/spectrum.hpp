#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "resolvent/errors.hpp"
#include "resolvent/taylor.hpp"

namespace resolvent {

inline constexpr double kDefaultModulusCap = 0.95;

// Eigenvalue multiset inside the open unit disk, counted with multiplicity
// and kept sorted by nondecreasing modulus (ties broken lexicographically so
// construction is deterministic). Points with modulus above the cap are
// rejected: truncation tails would no longer certify anything useful there.
class Spectrum {
public:
  explicit Spectrum(std::vector<Complex> points, double modulus_cap = kDefaultModulusCap)
      : points_(std::move(points)), cap_(modulus_cap) {
    if (points_.empty()) throw std::invalid_argument("Spectrum: needs at least one eigenvalue");
    if (!(cap_ > 0.0 && cap_ < 1.0))
      throw std::invalid_argument("Spectrum: modulus cap must lie in (0,1)");
    for (Complex p : points_) {
      if (std::abs(p) > cap_) {
        std::ostringstream oss;
        oss << "Spectrum: eigenvalue (" << p.real() << ", " << p.imag()
            << ") has modulus " << std::abs(p) << " above the cap " << cap_;
        throw precision_error(oss.str());
      }
    }
    std::sort(points_.begin(), points_.end(), [](Complex a, Complex b) {
      const double ma = std::abs(a), mb = std::abs(b);
      if (ma != mb) return ma < mb;
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
  }

  const std::vector<Complex>& points() const { return points_; }
  std::size_t n() const { return points_.size(); }
  double modulus_cap() const { return cap_; }
  double max_modulus() const { return std::abs(points_.back()); }

  double distance_to(Complex lambda) const {
    double d = std::abs(lambda - points_[0]);
    for (std::size_t j = 1; j < points_.size(); ++j)
      d = std::min(d, std::abs(lambda - points_[j]));
    if (d < 1e-15) throw singular_error("Spectrum: lambda coincides with an eigenvalue");
    return d;
  }

private:
  std::vector<Complex> points_;
  double cap_;
};

inline double spectral_distance(Complex lambda, const Spectrum& sigma) {
  return sigma.distance_to(lambda);
}

} // namespace resolvent
