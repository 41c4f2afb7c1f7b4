#pragma once

// Reference routines for tests. Nothing here calls the library's linear
// algebra; eigenvalues come from a plain cyclic Jacobi sweep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "csikit/stats.hpp"

namespace csikit::testing {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-15, int max_sweeps = 100) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j) off += a(i, j) * a(i, j);
        scale += a(i, j) * a(i, j);
      }
    if (off <= tol * tol * std::max(scale, 1e-300)) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(out.begin(), out.end());
  return out;
}

/// Lower Cholesky factor of an SPD matrix, textbook loop.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (diag <= 0.0) throw std::runtime_error("cholesky_lower: matrix not positive definite");
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

/// Fréchet distance via tr((Σ_X Σ_Y)^{1/2}) = Σ √eig(Lᵀ Σ_X L), Σ_Y = L Lᵀ.
/// Σ_Y must be positive definite.
inline double frechet_reference(const stats::DatasetSummary& x, const stats::DatasetSummary& y) {
  const Eigen::MatrixXd l = cholesky_lower(y.cov);
  const Eigen::MatrixXd congruent = l.transpose() * x.cov * l;
  double trace_sqrt = 0.0;
  for (double lambda : jacobi_eigenvalues(0.5 * (congruent + congruent.transpose())))
    trace_sqrt += std::sqrt(std::max(lambda, 0.0));
  return (x.mean - y.mean).squaredNorm() + x.cov.trace() + y.cov.trace() - 2.0 * trace_sqrt;
}

/// Closed form for diagonal covariances: ‖Δμ‖² + Σ (√λ_i − √γ_i)².
inline double frechet_diagonal(const stats::DatasetSummary& x, const stats::DatasetSummary& y) {
  double v = (x.mean - y.mean).squaredNorm();
  for (Eigen::Index i = 0; i < x.cov.rows(); ++i) {
    const double d = std::sqrt(x.cov(i, i)) - std::sqrt(y.cov(i, i));
    v += d * d;
  }
  return v;
}

/// Mean, then covariance of deviations, (n − 1) denominator.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> two_pass_covariance(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows(), d = rows.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) mean += rows.row(i).transpose();
  mean /= static_cast<double>(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd dev = rows.row(i).transpose() - mean;
    cov += dev * dev.transpose();
  }
  cov /= static_cast<double>(n - 1);
  return {mean, cov};
}

/// exp(−Σ p ln p) evaluated the direct way.
inline double erank_direct(const std::vector<double>& spectrum) {
  double total = 0.0;
  for (double l : spectrum) total += std::max(l, 0.0);
  double h = 0.0;
  for (double l : spectrum) {
    const double p = std::max(l, 0.0) / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::exp(h);
}

inline Eigen::MatrixXd random_gaussian(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (auto& v : m.reshaped()) v = n(gen);
  return m;
}

/// BᵀB/d + jitter·I with B square Gaussian: positive definite, generic eigenvectors.
inline Eigen::MatrixXd random_spd(std::mt19937_64& gen, Eigen::Index d, double jitter = 1e-3) {
  const Eigen::MatrixXd b = random_gaussian(gen, d, d);
  Eigen::MatrixXd m = b.transpose() * b / static_cast<double>(d);
  m.diagonal().array() += jitter;
  return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& gen, Eigen::Index d) {
  // Gram–Schmidt on Gaussian columns.
  Eigen::MatrixXd q = random_gaussian(gen, d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return q;
}

inline stats::DatasetSummary make_summary(std::string name, Eigen::VectorXd mean, Eigen::MatrixXd cov,
                                          std::uint64_t count = 1000) {
  stats::DatasetSummary s;
  s.name = std::move(name);
  s.count = count;
  s.mean = std::move(mean);
  s.cov = std::move(cov);
  return s;
}

inline stats::DatasetSummary random_summary(std::mt19937_64& gen, Eigen::Index d, const std::string& name = "s") {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd mean(d);
  for (auto& v : mean) v = n(gen);
  return make_summary(name, mean, random_spd(gen, d));
}

inline double rel_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace csikit::testing
