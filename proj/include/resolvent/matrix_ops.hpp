#pragma once

// Matrix-side quantities: instance construction from a prescribed spectrum,
// the power-bound constant sup_k ||T^k||, resolvent norms, and the scaling
// reduction that moves any |lambda| > 1 question onto the unit circle.
// Eigenvalues are always inputs here, never the output of an eigensolver;
// construction is validated through characteristic-polynomial residuals.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "resolvent/errors.hpp"
#include "resolvent/spectrum.hpp"
#include "resolvent/taylor.hpp"

namespace resolvent {

using Matrix = Eigen::MatrixXcd;

enum class NormKind { p1, p2, pinf };

inline const char* norm_name(NormKind k) {
  switch (k) {
    case NormKind::p1: return "1";
    case NormKind::p2: return "2";
    default: return "inf";
  }
}

inline double operator_norm(const Matrix& m, NormKind kind) {
  switch (kind) {
    case NormKind::p1: {
      double best = 0.0;
      for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).cwiseAbs().sum());
      return best;
    }
    case NormKind::pinf: {
      double best = 0.0;
      for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
      return best;
    }
    default:
      return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  }
}

struct Structure {
  enum class Kind { diagonal, jordan, similarity } kind = Kind::diagonal;
  double coupling = 0.0;       // jordan superdiagonal entry
  double conditioning = 1.0;   // target condition number of the similarity
  std::uint64_t seed = 0;      // stream that generated the similarity

  static Structure diagonal() { return Structure{Kind::diagonal, 0.0, 1.0, 0}; }
  static Structure jordan(double coupling) { return Structure{Kind::jordan, coupling, 1.0, 0}; }
  static Structure similarity(double conditioning, std::uint64_t seed) {
    return Structure{Kind::similarity, 0.0, conditioning, seed};
  }
};

inline const char* structure_name(Structure::Kind k) {
  switch (k) {
    case Structure::Kind::diagonal: return "diagonal";
    case Structure::Kind::jordan: return "jordan";
    default: return "similarity";
  }
}

struct MatrixOperator {
  Matrix entries;
  NormKind norm_kind = NormKind::p2;
  Structure structure;
  Spectrum spectrum;
  // Diagonalizing similarity when the construction provides one; powers the
  // certified stopping envelope in power_bound.
  std::shared_ptr<const Matrix> similarity;
  std::shared_ptr<const Matrix> similarity_inv;

  std::size_t n() const { return static_cast<std::size_t>(entries.rows()); }
};

namespace detail {

inline Matrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re, im);
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
}

inline void validate_spectrum_residuals(const MatrixOperator& op) {
  const auto& pts = op.spectrum.points();
  const double scale = std::max(1.0, operator_norm(op.entries, op.norm_kind));
  const double budget = 1e-8 * std::pow(scale, static_cast<double>(pts.size()));
  for (Complex lambda : pts) {
    const Matrix shifted = lambda * Matrix::Identity(op.entries.rows(), op.entries.cols()) - op.entries;
    const double residual = std::abs(Eigen::PartialPivLU<Matrix>(shifted).determinant());
    if (residual > budget) {
      std::ostringstream oss;
      oss << "from_spectrum: characteristic polynomial residual " << residual
          << " at eigenvalue (" << lambda.real() << ", " << lambda.imag()
          << ") exceeds " << budget;
      throw precision_error(oss.str());
    }
  }
}

} // namespace detail

inline MatrixOperator from_spectrum(const Spectrum& sigma, const Structure& structure,
                                    NormKind norm_kind) {
  const auto& pts = sigma.points();
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  MatrixOperator op{Matrix::Zero(n, n), norm_kind, structure, sigma, nullptr, nullptr};

  switch (structure.kind) {
    case Structure::Kind::diagonal: {
      for (Eigen::Index i = 0; i < n; ++i) op.entries(i, i) = pts[static_cast<std::size_t>(i)];
      auto id = std::make_shared<Matrix>(Matrix::Identity(n, n));
      op.similarity = id;
      op.similarity_inv = id;
      break;
    }
    case Structure::Kind::jordan: {
      for (Eigen::Index i = 0; i < n; ++i) op.entries(i, i) = pts[static_cast<std::size_t>(i)];
      for (Eigen::Index i = 0; i + 1 < n; ++i) op.entries(i, i + 1) = structure.coupling;
      break;
    }
    case Structure::Kind::similarity: {
      if (structure.conditioning < 1.0)
        throw std::invalid_argument("from_spectrum: conditioning must be >= 1");
      std::mt19937_64 rng(structure.seed);
      const Matrix u = detail::random_unitary(pts.size(), rng);
      const Matrix v = detail::random_unitary(pts.size(), rng);
      Eigen::VectorXd sv(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double t = (n == 1) ? 0.0
                                  : static_cast<double>(i) / static_cast<double>(n - 1);
        sv(i) = std::pow(structure.conditioning, t);
      }
      const Matrix s = u * sv.asDiagonal() * v.adjoint();
      const Matrix s_inv = v * sv.cwiseInverse().asDiagonal() * u.adjoint();
      Matrix d = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) d(i, i) = pts[static_cast<std::size_t>(i)];
      op.entries = s * d * s_inv;
      op.similarity = std::make_shared<Matrix>(s);
      op.similarity_inv = std::make_shared<Matrix>(s_inv);
      break;
    }
  }

  detail::validate_spectrum_residuals(op);
  return op;
}

// T / factor with the provenance kept consistent (spectrum, jordan coupling
// scale along; a similarity factor is unchanged by diagonal scaling).
inline MatrixOperator scaled(const MatrixOperator& op, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scaled: factor must be > 0");
  std::vector<Complex> pts = op.spectrum.points();
  for (Complex& p : pts) p /= factor;
  Structure structure = op.structure;
  if (structure.kind == Structure::Kind::jordan) structure.coupling /= factor;
  MatrixOperator out{op.entries / factor, op.norm_kind, structure,
                     Spectrum(std::move(pts), op.spectrum.modulus_cap()),
                     op.similarity, op.similarity_inv};
  return out;
}

struct PowerBoundEstimate {
  double value = 1.0;   // sup_k ||T^k|| as far as computed
  int k_max = 0;        // last power evaluated
  bool certified = false;
};

namespace detail {

// Upper-triangular eigenvector matrix for a bidiagonal Jordan-structured
// matrix with pairwise distinct eigenvalues, by back substitution.
inline bool jordan_eigenbasis(const MatrixOperator& op, Matrix& s, Matrix& s_inv) {
  const auto& pts = op.spectrum.points();
  const Eigen::Index n = op.entries.rows();
  double min_gap = 2.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      min_gap = std::min(min_gap, std::abs(pts[i] - pts[j]));
  if (n > 1 && min_gap < 1e-8) return false;

  s = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    s(c, c) = 1.0;
    for (Eigen::Index r = c - 1; r >= 0; --r)
      s(r, c) = -op.entries(r, r + 1) * s(r + 1, c) / (op.entries(r, r) - op.entries(c, c));
  }
  s_inv = s.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));

  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = op.entries(i, i);
  const double residual = (op.entries * s - s * d).cwiseAbs().maxCoeff();
  return residual <= 1e-10 * std::max(1.0, s.cwiseAbs().maxCoeff());
}

} // namespace detail

// sup_k ||T^k||. With a diagonalizing similarity in hand the loop stops once
// kappa(S) rho^k drops under the running maximum, which certifies that no
// later power can exceed it. Without one, a long plateau below
// tolerance * max is taken as convergence and the result is flagged
// uncertified.
inline PowerBoundEstimate power_bound(const MatrixOperator& op, double tolerance = 1e-3) {
  const double rho = op.spectrum.max_modulus();
  if (rho >= 1.0) throw divergence_error("power_bound: spectral radius must be < 1");

  double kappa = -1.0;
  std::shared_ptr<const Matrix> s = op.similarity;
  std::shared_ptr<const Matrix> s_inv = op.similarity_inv;
  if (!s && op.structure.kind == Structure::Kind::jordan) {
    Matrix sj, sj_inv;
    if (detail::jordan_eigenbasis(op, sj, sj_inv)) {
      s = std::make_shared<Matrix>(std::move(sj));
      s_inv = std::make_shared<Matrix>(std::move(sj_inv));
    }
  }
  if (s && s_inv) kappa = operator_norm(*s, op.norm_kind) * operator_norm(*s_inv, op.norm_kind);

  PowerBoundEstimate est{1.0, 0, false};
  Matrix power = Matrix::Identity(op.entries.rows(), op.entries.cols());
  int plateau = 0;
  const int k_limit = 200000;
  for (int k = 1; k <= k_limit; ++k) {
    power = power * op.entries;
    est.k_max = k;
    const double nk = operator_norm(power, op.norm_kind);
    if (nk > est.value) {
      est.value = nk;
      plateau = 0;
    }
    if (power.cwiseAbs().maxCoeff() == 0.0) {
      est.certified = true; // exactly nilpotent: every later power is zero
      break;
    }
    if (kappa > 0.0 && kappa * std::pow(rho, static_cast<double>(k + 1)) < est.value) {
      est.certified = true;
      break;
    }
    if (kappa <= 0.0) {
      if (nk < tolerance * est.value) {
        if (++plateau >= 20) break;
      } else {
        plateau = 0;
      }
    }
  }
  return est;
}

// Operator norm of (lambda I - T)^{-1}, by partial-pivot solves against the
// identity columns.
inline double resolvent_norm(const MatrixOperator& op, Complex lambda) {
  const Eigen::Index n = op.entries.rows();
  const Matrix shifted = lambda * Matrix::Identity(n, n) - op.entries;
  Eigen::PartialPivLU<Matrix> lu(shifted);
  const double scale = shifted.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < 1e-14 * scale)
    throw singular_error("resolvent_norm: lambda is numerically at the spectrum");
  const Matrix inv = lu.solve(Matrix::Identity(n, n));
  return operator_norm(inv, op.norm_kind);
}

struct BoundaryReduction {
  Complex lambda_star; // lambda / |lambda|, on the unit circle
  double rho;          // |lambda|
  MatrixOperator t_star;
};

inline BoundaryReduction boundary_reduce(Complex lambda, const MatrixOperator& op) {
  const double rho = std::abs(lambda);
  if (!(rho > 1.0)) throw std::domain_error("boundary_reduce: requires |lambda| > 1");
  return BoundaryReduction{lambda / rho, rho, scaled(op, rho)};
}

inline double resolvent_ratio(const MatrixOperator& op, Complex lambda,
                              const PowerBoundEstimate& bound) {
  if (std::abs(lambda) < 1.0 - 1e-12)
    throw std::domain_error("resolvent_ratio: requires |lambda| >= 1");
  return resolvent_norm(op, lambda) * spectral_distance(lambda, op.spectrum) / bound.value;
}

inline double resolvent_ratio(const MatrixOperator& op, Complex lambda) {
  return resolvent_ratio(op, lambda, power_bound(op));
}

} // namespace resolvent
