#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "resolvent/blaschke.hpp"

using namespace resolvent;
using Catch::Approx;

TEST_CASE("factor_eval") {
  SECTION("factor at the origin is -z") {
    REQUIRE(factor_eval(BlaschkeFactor(Complex(0, 0)), Complex(0.5, 0)) == Complex(-0.5, 0));
  }
  SECTION("vanishes at its zero") {
    REQUIRE(std::abs(factor_eval(BlaschkeFactor(Complex(0.5, 0)), Complex(0.5, 0))) == 0.0);
  }
  SECTION("unimodular on the circle") {
    REQUIRE(std::abs(factor_eval(BlaschkeFactor(Complex(0.5, 0)), Complex(0, 1))) ==
            Approx(1.0).margin(1e-14));
  }
  SECTION("pole is rejected") {
    REQUIRE_THROWS_AS(factor_eval(BlaschkeFactor(Complex(0.5, 0)), Complex(2.0, 0)),
                      singular_error);
  }
  SECTION("zeros outside the disk are rejected") {
    REQUIRE_THROWS_AS(BlaschkeFactor(Complex(1.0, 0)), std::domain_error);
  }
}

TEST_CASE("product_eval") {
  SECTION("empty product is 1") {
    REQUIRE(product_eval(BlaschkeProduct(std::vector<Complex>{}), Complex(0.3, 0.3)) ==
            Complex(1, 0));
  }
  SECTION("triple zero at the origin") {
    const BlaschkeProduct B({Complex(0, 0), Complex(0, 0), Complex(0, 0)});
    REQUIRE(product_eval(B, Complex(0.5, 0)) == Complex(-0.125, 0));
  }
  SECTION("modulus one on the torus") {
    const BlaschkeProduct B({Complex(0.3, 0), Complex(0, 0.5)});
    for (double theta : {0.0, 1.0, 2.0})
      REQUIRE(std::abs(product_eval(B, std::polar(1.0, theta))) == Approx(1.0).margin(1e-13));
  }
  SECTION("vanishes at every stored zero") {
    const std::vector<Complex> zeros = {Complex(0.3, 0.1), Complex(-0.2, 0.6), Complex(0.3, 0.1)};
    const BlaschkeProduct B(zeros);
    for (Complex mu : zeros) REQUIRE(std::abs(product_eval(B, mu)) < 1e-12);
  }
  SECTION("unimodularity for random zero sets") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Complex> zeros;
      const int n = 1 + static_cast<int>(u(rng) * 6);
      for (int i = 0; i < n; ++i)
        zeros.push_back(std::polar(0.95 * std::sqrt(u(rng)), 2 * kPi * u(rng)));
      const BlaschkeProduct B(zeros);
      for (int t = 0; t < 1024; t += 37)
        REQUIRE(std::abs(product_eval(B, std::polar(1.0, 2 * kPi * t / 1024.0))) ==
                Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("log_derivative_eval") {
  // b_0 = -z has logarithmic derivative 1/z
  SECTION("origin factor") {
    REQUIRE(log_derivative_eval(BlaschkeFactor(Complex(0, 0)), Complex(0.5, 0)) ==
            Complex(2, 0));
  }
  SECTION("direct substitution") {
    // 1/(0 - 0.5) + 0.5/(1 - 0) = -1.5
    const Complex v = log_derivative_eval(BlaschkeFactor(Complex(0.5, 0)), Complex(0, 0));
    REQUIRE(v.real() == Approx(-1.5));
    REQUIRE(v.imag() == Approx(0.0).margin(1e-15));
  }
  SECTION("finite-difference oracle") {
    const BlaschkeFactor b(Complex(0.5, 0));
    const Complex z(0.2, 0.1);
    const double h = 1e-6;
    const Complex num =
        (factor_eval(b, z + Complex(h, 0)) - factor_eval(b, z - Complex(h, 0))) / Complex(2 * h, 0);
    const Complex fd = num / factor_eval(b, z);
    const Complex v = log_derivative_eval(b, z);
    REQUIRE(std::abs(v - fd) / std::abs(v) < 1e-6);
  }
  SECTION("finite-difference oracle over random factors") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      const BlaschkeFactor b(std::polar(0.9 * u(rng), 2 * kPi * u(rng)));
      const Complex z = std::polar(0.5 + 0.3 * u(rng), 2 * kPi * u(rng));
      if (std::abs(z - b.zero) < 0.1) continue;
      const double h = 1e-6;
      const Complex num = (factor_eval(b, z + Complex(h, 0)) - factor_eval(b, z - Complex(h, 0))) /
                          Complex(2 * h, 0);
      const Complex fd = num / factor_eval(b, z);
      REQUIRE(std::abs(log_derivative_eval(b, z) - fd) < 1e-5 * std::abs(fd) + 1e-9);
    }
  }
  SECTION("singularities rejected") {
    const BlaschkeFactor b(Complex(0.5, 0));
    REQUIRE_THROWS_AS(log_derivative_eval(b, Complex(0.5, 0)), singular_error);
    REQUIRE_THROWS_AS(log_derivative_eval(b, Complex(2.0, 0)), singular_error);
  }
}

TEST_CASE("log_derivative_l2") {
  SECTION("origin factor has unit L2 norm") {
    const double v = log_derivative_l2(BlaschkeFactor(Complex(0, 0)), 1024);
    REQUIRE(v == Approx(1.0).margin(1e-10));
    REQUIRE(v <= 2.0);
  }
  SECTION("half-point factor") {
    const double v = log_derivative_l2(BlaschkeFactor(Complex(0.5, 0)), 2048);
    REQUIRE(v <= 2.0 / std::sqrt(0.75) + 1e-8);
    // both pieces live on disjoint frequency sets, so the norm has a closed form
    REQUIRE(v == Approx(std::sqrt(1.25 / 0.75)).margin(1e-10));
  }
  SECTION("near-boundary factor") {
    const double v = log_derivative_l2(BlaschkeFactor(Complex(0.9, 0)), 8192);
    REQUIRE(v <= 2.0 / std::sqrt(0.19) + 1e-8);
    REQUIRE(v == Approx(std::sqrt(1.81 / 0.19)).margin(1e-8));
  }
  SECTION("the 2/sqrt(1-|mu|^2) bound holds for 100 random factors") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const Complex mu = std::polar(0.95 * u(rng), 2 * kPi * u(rng));
      REQUIRE(log_derivative_l2(BlaschkeFactor(mu), 2048) <=
              2.0 / std::sqrt(1.0 - std::norm(mu)) + 1e-8);
    }
  }
  SECTION("needs at least 1024 samples") {
    REQUIRE_THROWS_AS(log_derivative_l2(BlaschkeFactor(Complex(0, 0)), 512),
                      std::invalid_argument);
  }
}

TEST_CASE("factor series agree with rational evaluation") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const BlaschkeFactor b(std::polar(0.9 * u(rng), 2 * kPi * u(rng)));
    const TaylorSeries s = factor_series(b, 1024);
    const TaylorSeries ds = factor_derivative_series(b, 1024);
    for (int t = 0; t < 5; ++t) {
      const Complex z = std::polar(0.85 * u(rng), 2 * kPi * u(rng));
      REQUIRE(std::abs(evaluate(s, z) - factor_eval(b, z)) < 1e-10);
      const Complex expected =
          (std::norm(b.zero) - 1.0) /
          ((Complex(1, 0) - std::conj(b.zero) * z) * (Complex(1, 0) - std::conj(b.zero) * z));
      REQUIRE(std::abs(evaluate(ds, z) - expected) < 1e-10);
    }
  }
}
