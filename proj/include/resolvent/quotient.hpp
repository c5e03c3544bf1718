#pragma once

// Independent upper bound on the quotient norm || 1/(lambda - z) ||_{W/BW}:
// minimize the coefficient l1 sum over truncated series that interpolate
// 1/(lambda - z) at the spectrum (with derivative conditions on repeated
// points). Any feasible iterate is an upper bound, so the solver tracks the
// best feasible-after-projection value it has seen.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "resolvent/errors.hpp"
#include "resolvent/malmquist.hpp"
#include "resolvent/spectrum.hpp"
#include "resolvent/taylor.hpp"

namespace resolvent {

struct InterpolationConstraint {
  Complex point;
  int order;       // derivative order, 0 for plain evaluation
  Complex target;  // order! / (lambda - point)^{order+1}
};

struct QuotientProblem {
  Complex lambda;
  Spectrum sigma;
  std::size_t degree;
  std::vector<InterpolationConstraint> constraints;
};

namespace detail {

inline Complex cpow_int(Complex base, int e) {
  Complex acc(1.0, 0.0);
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

} // namespace detail

inline QuotientProblem make_quotient_problem(Complex lambda, const Spectrum& sigma,
                                             std::size_t degree) {
  if (std::abs(lambda) < 1.0 - 1e-9)
    throw std::domain_error("make_quotient_problem: |lambda| must be >= 1");
  if (degree < sigma.n())
    throw std::invalid_argument("make_quotient_problem: degree must be >= n");
  std::vector<InterpolationConstraint> constraints;
  const auto& pts = sigma.points();
  std::size_t j = 0;
  while (j < pts.size()) {
    std::size_t mult = 1;
    while (j + mult < pts.size() && pts[j + mult] == pts[j]) ++mult;
    double factorial = 1.0;
    for (std::size_t r = 0; r < mult; ++r) {
      if (r > 0) factorial *= static_cast<double>(r);
      const Complex target =
          factorial / detail::cpow_int(lambda - pts[j], static_cast<int>(r) + 1);
      constraints.push_back({pts[j], static_cast<int>(r), target});
    }
    j += mult;
  }
  return QuotientProblem{lambda, sigma, degree, std::move(constraints)};
}

struct OracleSolution {
  double value = 0.0;                  // achieved coefficient l1 sum
  std::vector<Complex> coefficients;   // the best feasible iterate
  double residual = 0.0;               // max constraint violation
  int iterations = 0;
  double conditioning = 1.0;           // of the constraint normal matrix
};

// Alternating projection onto the interpolation constraints (least-norm
// correction through the precomputed pseudo-inverse) and complex soft
// thresholding, in ADMM form with unit step in the normalized metric.
inline OracleSolution solve_quotient(const QuotientProblem& problem, int max_iters = 20000,
                                     double tol = 1e-8) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_quotient: tol must be > 0");
  const std::size_t m = problem.degree + 1;
  const std::size_t rows = problem.constraints.size();

  Eigen::MatrixXcd a(rows, m);
  Eigen::VectorXcd b(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& con = problem.constraints[r];
    b(static_cast<Eigen::Index>(r)) = con.target;
    for (std::size_t k = 0; k < m; ++k) {
      if (static_cast<int>(k) < con.order) {
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = Complex(0.0, 0.0);
        continue;
      }
      double falling = 1.0;
      for (int t = 0; t < con.order; ++t) falling *= static_cast<double>(k - static_cast<std::size_t>(t));
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          falling * detail::cpow_int(con.point, static_cast<int>(k) - con.order);
    }
  }

  const Eigen::MatrixXcd gram = a * a.adjoint();
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e12) {
      double min_gap = 4.0;
      Complex ca(0.0, 0.0), cb(0.0, 0.0);
      const auto& pts = problem.sigma.points();
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
          if (pts[i] != pts[j] && std::abs(pts[i] - pts[j]) < min_gap) {
            min_gap = std::abs(pts[i] - pts[j]);
            ca = pts[i];
            cb = pts[j];
          }
      std::ostringstream oss;
      oss << "solve_quotient: constraint matrix numerically rank-deficient"
          << " (normal-matrix condition above 1e12); closest cluster ("
          << ca.real() << "," << ca.imag() << ") vs (" << cb.real() << "," << cb.imag()
          << ") at distance " << min_gap;
      throw conditioning_error(oss.str());
    }
  }
  const Eigen::LDLT<Eigen::MatrixXcd> gram_solver(gram);
  const double conditioning = [&] {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    return svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  }();

  const double b_scale = b.cwiseAbs().maxCoeff();
  const Eigen::VectorXcd b_unit = b / b_scale;

  const auto project = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return v + a.adjoint() * gram_solver.solve(b_unit - a * v);
  };
  const auto soft = [](Eigen::VectorXcd v, double kappa) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double mag = std::abs(v(i));
      v(i) = (mag <= kappa) ? Complex(0.0, 0.0) : v(i) * ((mag - kappa) / mag);
    }
    return v;
  };

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
  Eigen::VectorXcd z = x, u = x;
  Eigen::VectorXcd best = project(x);
  double best_value = best.cwiseAbs().sum();
  int iters = 0;

  for (int it = 1; it <= max_iters; ++it) {
    iters = it;
    x = project(z - u);
    const double value = x.cwiseAbs().sum();
    if (value < best_value) {
      best_value = value;
      best = x;
    }
    const Eigen::VectorXcd z_prev = z;
    z = soft(x + u, 1.0);
    u += x - z;

    const double r_primal = (x - z).norm();
    const double r_dual = (z - z_prev).norm();
    const double eps = 1e-10 * std::sqrt(static_cast<double>(m)) +
                       tol * std::max({x.norm(), z.norm(), 1.0});
    if (r_primal < eps && r_dual < eps) break;
  }

  OracleSolution sol;
  sol.value = best_value * b_scale;
  sol.coefficients.assign(best.data(), best.data() + best.size());
  for (Complex& c : sol.coefficients) c *= b_scale;
  sol.residual = (a * best - b_unit).cwiseAbs().maxCoeff() * b_scale;
  sol.iterations = iters;
  sol.conditioning = conditioning;
  return sol;
}

struct ComparisonRecord {
  double oracle;        // best feasible l1 value found
  double construction;  // Wiener norm of the projected kernel
  double gap;           // construction - oracle, >= 0 up to solver slack
  double residual;
  int iterations;
};

inline ComparisonRecord compare_with_construction(const QuotientProblem& problem,
                                                  const ProjectionResult& projection,
                                                  int max_iters = 20000, double tol = 1e-8) {
  if (problem.lambda != projection.query ||
      problem.sigma.points() != projection.spectrum().points())
    throw std::invalid_argument("compare_with_construction: mismatched (lambda, spectrum)");
  const OracleSolution sol = solve_quotient(problem, max_iters, tol);
  const double construction = wiener_norm(projection.function).value;
  return ComparisonRecord{sol.value, construction, construction - sol.value, sol.residual,
                          sol.iterations};
}

} // namespace resolvent
