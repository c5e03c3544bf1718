#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <memory>
#include <random>

#include "resolvent/blaschke.hpp"
#include "resolvent/malmquist.hpp"

using namespace resolvent;
using Catch::Approx;

namespace {

double max_coeff_diff(const TaylorSeries& a, const TaylorSeries& b) {
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  double worst = 0.0;
  for (std::size_t i = 0; i < std::max(ca.size(), cb.size()); ++i) {
    const Complex va = i < ca.size() ? ca[i] : Complex(0, 0);
    const Complex vb = i < cb.size() ? cb[i] : Complex(0, 0);
    worst = std::max(worst, std::abs(va - vb));
  }
  return worst;
}

Spectrum random_spectrum(std::mt19937_64& rng, int n, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> pts;
  for (int i = 0; i < n; ++i) pts.push_back(std::polar(rmax * std::sqrt(u(rng)), 2 * kPi * u(rng)));
  return Spectrum(pts);
}

} // namespace

TEST_CASE("build_basis") {
  SECTION("all-zero spectrum gives the monomial basis up to sign") {
    const Spectrum sigma({Complex(0, 0), Complex(0, 0), Complex(0, 0)});
    const MalmquistBasis basis = build_basis(sigma, 256);
    REQUIRE(basis.elements.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& c = basis.elements[k].coeffs();
      for (std::size_t m = 0; m < c.size(); ++m) {
        const Complex expected =
            (m == k) ? Complex((k % 2 == 0) ? 1.0 : -1.0, 0.0) : Complex(0, 0);
        REQUIRE(std::abs(c[m] - expected) == 0.0);
      }
    }
  }
  SECTION("single point 0.6") {
    const MalmquistBasis basis = build_basis(Spectrum({Complex(0.6, 0)}), 256);
    for (std::size_t m = 0; m < 10; ++m)
      REQUIRE(basis.elements[0].coeffs()[m].real() ==
              Approx(0.8 * std::pow(0.6, double(m))).margin(1e-15));
    REQUIRE(basis.normalizers[0] == Approx(0.8));
  }
  SECTION("gram matrix is the identity") {
    const MalmquistBasis basis =
        build_basis(Spectrum({Complex(0.3, 0), Complex(0, 0.5), Complex(-0.2, 0)}), 1024);
    REQUIRE(gram_deviation(basis) < 1e-10);
  }
  SECTION("degree floor") {
    REQUIRE_THROWS_AS(build_basis(Spectrum({Complex(0, 0)}), 128), std::invalid_argument);
  }
  SECTION("modulus cap enforced with the offending eigenvalue named") {
    REQUIRE_THROWS_AS(Spectrum({Complex(0.99, 0)}), precision_error);
    try {
      Spectrum sigma({Complex(0.99, 0)});
    } catch (const precision_error& e) {
      REQUIRE(std::string(e.what()).find("0.99") != std::string::npos);
      REQUIRE(std::string(e.what()).find("cap") != std::string::npos);
    }
  }
}

TEST_CASE("orthonormality for random spectra") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + static_cast<int>(u(rng) * 7.999);
    const MalmquistBasis basis = build_basis(random_spectrum(rng, n, 0.9), 1024);
    REQUIRE(gram_deviation(basis) < 1e-10);
  }
}

TEST_CASE("project_kernel") {
  SECTION("all-zero spectrum truncates the geometric kernel") {
    for (int n : {1, 4, 8}) {
      const Spectrum sigma(std::vector<Complex>(n, Complex(0, 0)));
      const auto basis = std::make_shared<const MalmquistBasis>(build_basis(sigma, 256));
      const Complex lambda = std::polar(1.0, 0.7);
      const ProjectionResult proj = project_kernel(basis, lambda);
      const WienerNorm w = wiener_norm(proj.function);
      REQUIRE(w.value == Approx(double(n)).margin(1e-12));
      REQUIRE(w.tail == 0.0);
      // coefficients are lambda^{-m-1}
      for (int m = 0; m < n; ++m)
        REQUIRE(std::abs(proj.function.coeffs()[m] -
                         Complex(1, 0) / std::pow(lambda, double(m + 1))) < 1e-13);
    }
  }
  SECTION("single point, lambda off the circle") {
    const auto basis =
        std::make_shared<const MalmquistBasis>(build_basis(Spectrum({Complex(0, 0)}), 256));
    const ProjectionResult proj = project_kernel(basis, Complex(2, 0));
    REQUIRE(std::abs(evaluate(proj.function, Complex(0, 0)) - Complex(0.5, 0)) < 1e-14);
    REQUIRE(wiener_norm(proj.function).value == Approx(0.5).margin(1e-14));
  }
  SECTION("interpolation value at the eigenvalue") {
    const auto basis =
        std::make_shared<const MalmquistBasis>(build_basis(Spectrum({Complex(0.5, 0)}), 1024));
    const ProjectionResult proj = project_kernel(basis, Complex(1, 0));
    REQUIRE(std::abs(evaluate(proj.function, Complex(0.5, 0)) - Complex(2, 0)) < 1e-10);
  }
  SECTION("closed-form oracle through the model-space reproducing kernel") {
    // f(z) = (1 - conj(B(w)) B(z)) / (lambda - z), w = 1/conj(lambda): an
    // entirely rational route independent of the basis construction
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
      const int n = 1 + static_cast<int>(u(rng) * 5.999);
      const Spectrum sigma = random_spectrum(rng, n, 0.88);
      const auto basis = std::make_shared<const MalmquistBasis>(build_basis(sigma, 1024));
      const Complex lambda = std::polar(1.0 + 2.0 * u(rng), 2 * kPi * u(rng));
      const ProjectionResult proj = project_kernel(basis, lambda);
      const BlaschkeProduct B(sigma.points());
      const Complex w = Complex(1, 0) / std::conj(lambda);
      const Complex bw = std::conj(product_eval(B, w));
      for (int t = 0; t < 6; ++t) {
        const Complex z = std::polar(0.8 * u(rng), 2 * kPi * u(rng));
        const Complex expected = (Complex(1, 0) - bw * product_eval(B, z)) / (lambda - z);
        REQUIRE(std::abs(evaluate(proj.function, z) - expected) < 1e-9);
      }
    }
  }
  SECTION("rejects interior lambda") {
    const auto basis =
        std::make_shared<const MalmquistBasis>(build_basis(Spectrum({Complex(0, 0)}), 256));
    REQUIRE_THROWS_AS(project_kernel(basis, Complex(0.5, 0)), std::domain_error);
  }
}

TEST_CASE("interpolation_residual") {
  SECTION("single zero, lambda = 2") {
    const auto basis =
        std::make_shared<const MalmquistBasis>(build_basis(Spectrum({Complex(0, 0)}), 256));
    REQUIRE(interpolation_residual(project_kernel(basis, Complex(2, 0))) < 1e-14);
  }
  SECTION("two points on the circle query") {
    const auto basis = std::make_shared<const MalmquistBasis>(
        build_basis(Spectrum({Complex(0.3, 0), Complex(0, 0.5)}), 1024));
    REQUIRE(interpolation_residual(project_kernel(basis, Complex(1, 0))) < 1e-10);
  }
  SECTION("repeated eigenvalue adds the derivative condition") {
    const auto basis = std::make_shared<const MalmquistBasis>(
        build_basis(Spectrum({Complex(0.4, 0), Complex(0.4, 0)}), 1024));
    const ProjectionResult proj = project_kernel(basis, Complex(1, 0));
    REQUIRE(interpolation_residual(proj) < 1e-8);
    // first derivative of 1/(lambda - z) at 0.4 is 1/(lambda - 0.4)^2
    const Complex d = evaluate(differentiate(proj.function), Complex(0.4, 0));
    REQUIRE(std::abs(d - Complex(1.0 / 0.36, 0)) < 1e-9);
  }
  SECTION("residual stays small over |lambda| in [1,3]") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + static_cast<int>(u(rng) * 5.999);
      const auto basis = std::make_shared<const MalmquistBasis>(
          build_basis(random_spectrum(rng, n, 0.9), 1024));
      const Complex lambda = std::polar(1.0 + 2.0 * u(rng), 2 * kPi * u(rng));
      REQUIRE(interpolation_residual(project_kernel(basis, lambda)) < 1e-8);
    }
  }
}

TEST_CASE("derivative_terms") {
  SECTION("single eigenvalue collapses the sums") {
    const auto basis =
        std::make_shared<const MalmquistBasis>(build_basis(Spectrum({Complex(0.5, 0)}), 1024));
    const ProjectionResult proj = project_kernel(basis, Complex(1, 0));
    const DerivativeTerms terms = derivative_terms(proj);
    REQUIRE(wiener_norm(terms.log_derivative_term).value == 0.0);
    REQUIRE(wiener_norm(terms.kernel_sum_term).value == 0.0);
    REQUIRE(terms.first_element_bound == Approx(2.0)); // |lambda|/dist = 1/0.5
    REQUIRE(hardy_norm(terms.first_element_term, 1, 8192) <= terms.first_element_bound + 1e-8);
  }
  SECTION("double zero reconstruction against direct differentiation") {
    const auto basis = std::make_shared<const MalmquistBasis>(
        build_basis(Spectrum({Complex(0, 0), Complex(0, 0)}), 256));
    const ProjectionResult proj = project_kernel(basis, Complex(1, 0));
    const DerivativeTerms terms = derivative_terms(proj);
    const TaylorSeries sum =
        add(add(terms.first_element_term, terms.log_derivative_term), terms.kernel_sum_term);
    const TaylorSeries reference = scale(differentiate(proj.function), proj.query);
    REQUIRE(max_coeff_diff(sum, reference) < 1e-12);
  }
  SECTION("three-point spectrum satisfies each bound") {
    const auto basis = std::make_shared<const MalmquistBasis>(
        build_basis(Spectrum({Complex(0.3, 0), Complex(0, 0.5), Complex(-0.2, 0)}), 1024));
    const ProjectionResult proj = project_kernel(basis, std::polar(1.0, kPi / 7));
    const DerivativeTerms terms = derivative_terms(proj);
    REQUIRE(hardy_norm(terms.first_element_term, 1, 8192) <= terms.first_element_bound + 1e-8);
    REQUIRE(hardy_norm(terms.log_derivative_term, 1, 8192) <= terms.log_derivative_bound + 1e-8);
    REQUIRE(hardy_norm(terms.kernel_sum_term, 1, 8192) <= terms.kernel_sum_bound + 1e-8);
  }
  SECTION("decomposition identity and bounds over random spectra") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 2 + static_cast<int>(u(rng) * 4.999);
      const auto basis = std::make_shared<const MalmquistBasis>(
          build_basis(random_spectrum(rng, n, 0.9), 1024));
      const ProjectionResult proj = project_kernel(basis, std::polar(1.0, 2 * kPi * u(rng)));
      const DerivativeTerms terms = derivative_terms(proj);
      const TaylorSeries sum =
          add(add(terms.first_element_term, terms.log_derivative_term), terms.kernel_sum_term);
      const TaylorSeries reference = scale(differentiate(proj.function), proj.query);
      REQUIRE(max_coeff_diff(sum, reference) < 1e-10);
      REQUIRE(hardy_norm(terms.first_element_term, 1, 8192) <= terms.first_element_bound + 1e-8);
      REQUIRE(hardy_norm(terms.log_derivative_term, 1, 8192) <=
              terms.log_derivative_bound + 1e-8);
      REQUIRE(hardy_norm(terms.kernel_sum_term, 1, 8192) <= terms.kernel_sum_bound + 1e-8);
    }
  }
}

TEST_CASE("wiener_upper_bound") {
  SECTION("all-zero spectrum") {
    for (int n : {1, 3, 8}) {
      const auto basis = std::make_shared<const MalmquistBasis>(
          build_basis(Spectrum(std::vector<Complex>(n, Complex(0, 0))), 256));
      const WienerBoundRecord rec = wiener_upper_bound(project_kernel(basis, Complex(1, 0)));
      REQUIRE(rec.computed_wiener == Approx(double(n)).margin(1e-12));
      REQUIRE(rec.analytic_bound ==
              Approx(5.0 * kPi / 3.0 * std::pow(n, 1.5) + 2.0 * n).margin(1e-12));
      REQUIRE(rec.computed_wiener <= rec.analytic_bound);
      REQUIRE(rec.constant_term_within_2n);
    }
  }
  SECTION("single zero, lambda = 2") {
    const auto basis =
        std::make_shared<const MalmquistBasis>(build_basis(Spectrum({Complex(0, 0)}), 256));
    const WienerBoundRecord rec = wiener_upper_bound(project_kernel(basis, Complex(2, 0)));
    REQUIRE(rec.computed_wiener == Approx(0.5).margin(1e-14));
    REQUIRE(rec.analytic_bound == Approx(5.0 * kPi / 3.0 / 2.0 + 2.0).margin(1e-12));
  }
  SECTION("inequality chain on a two-point spectrum") {
    const auto basis = std::make_shared<const MalmquistBasis>(
        build_basis(Spectrum({Complex(0.3, 0), Complex(0, 0.5)}), 1024));
    const WienerBoundRecord rec = wiener_upper_bound(project_kernel(basis, Complex(1, 0)));
    REQUIRE(rec.computed_wiener <= rec.hardy_route + 1e-8);
    REQUIRE(rec.computed_wiener <= rec.analytic_bound + 1e-8);
    REQUIRE(rec.constant_term_within_2n);
  }
}

TEST_CASE("scalar facts used by the bound chain") {
  SECTION("sqrt-sum vs integral") {
    double partial = 0.0;
    int next_check = 2;
    for (int n = 2; n <= 10000; ++n) {
      partial += std::sqrt(double(n - 1));
      if (n == next_check) {
        REQUIRE(partial <= (2.0 / 3.0) * (std::pow(double(n), 1.5) - 1.0));
        next_check = next_check < 16 ? next_check + 1 : next_check * 2;
      }
    }
    REQUIRE(partial <= (2.0 / 3.0) * (std::pow(10000.0, 1.5) - 1.0));
  }
  SECTION("x^{3/2}/3 - x + 4/3 is nonnegative") {
    for (int i = 0; i <= 100000; ++i) {
      const double x = 100.0 * double(i) / 100000.0;
      REQUIRE(std::pow(x, 1.5) / 3.0 - x + 4.0 / 3.0 >= 0.0);
    }
  }
}
