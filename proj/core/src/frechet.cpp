#include "csikit/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "csikit/error.hpp"

namespace csikit::frechet {
namespace {

void require_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionMismatch(std::string(what) + ": matrix is not square");
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": matrix contains NaN/Inf");
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, m.norm()))
    throw ValidationError(std::string(what) + ": matrix is not symmetric (‖M − Mᵀ‖ = " + std::to_string(asym) + ")");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double symmetry_tolerance(const Matrix& m) { return 1e-10 * std::max(1.0, m.trace()); }

ClampedSpectrum clamped_spectrum(const Matrix& m, bool with_vectors) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, with_vectors ? Eigen::ComputeEigenvectors
                                                                 : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ValidationError("symmetric eigendecomposition did not converge");

  ClampedSpectrum out;
  out.eigenvalues = solver.eigenvalues();
  if (with_vectors) out.eigenvectors = solver.eigenvectors();
  if (out.eigenvalues.size() == 0) return out;

  const double lambda_max = out.eigenvalues.maxCoeff();
  const double tol = symmetry_tolerance(sym) * std::max(1.0, lambda_max);
  for (auto& lambda : out.eigenvalues) {
    if (lambda >= 0.0) continue;
    if (lambda < -tol)
      throw NotPsdError("matrix is not positive semidefinite: eigenvalue " + std::to_string(lambda) +
                        " below tolerance -" + std::to_string(tol));
    lambda = 0.0;
    ++out.clamped;
  }
  return out;
}

Matrix sqrt_psd(const Matrix& m) {
  require_symmetric(m, "sqrt_psd");
  const auto spectrum = clamped_spectrum(m, true);
  const auto& v = spectrum.eigenvectors;
  Matrix root = v * spectrum.eigenvalues.cwiseSqrt().asDiagonal() * v.transpose();
  return 0.5 * (root + root.transpose());
}

CsiValue csi(const stats::DatasetSummary& x, const stats::DatasetSummary& y, const CsiOptions& options) {
  if (x.dim() != y.dim())
    throw DimensionMismatch("csi: '" + x.name + "' has dim " + std::to_string(x.dim()) + ", '" + y.name +
                            "' has dim " + std::to_string(y.dim()));
  if (!(options.ridge >= 0.0) || !std::isfinite(options.ridge))
    throw ValidationError("csi: ridge must be a finite non-negative number");
  require_symmetric(x.cov, "csi (first covariance)");
  require_symmetric(y.cov, "csi (second covariance)");

  const auto d = static_cast<Eigen::Index>(x.dim());
  Matrix cov_x = x.cov;
  Matrix cov_y = y.cov;
  if (options.ridge > 0.0) {
    cov_x.diagonal().array() += options.ridge;
    cov_y.diagonal().array() += options.ridge;
  }

  CsiValue out;
  out.mean_term = (x.mean - y.mean).squaredNorm();

  // tr((Σ_X Σ_Y)^{1/2}) equals Σ √λ over the spectrum of S Σ_Y S with S = Σ_X^{1/2},
  // a symmetric matrix similar to Σ_X Σ_Y.
  const auto root_x = clamped_spectrum(cov_x, true);
  const Matrix s = root_x.eigenvectors * root_x.eigenvalues.cwiseSqrt().asDiagonal() *
                   root_x.eigenvectors.transpose();
  // Σ_Y must be PSD too; its eigenvalues are not otherwise needed.
  const auto check_y = clamped_spectrum(cov_y, false);
  const Matrix product = s * cov_y * s;
  const auto inner = clamped_spectrum(product, false);
  out.clamped_eigenvalues = root_x.clamped + check_y.clamped + inner.clamped;

  const double trace_sqrt = d == 0 ? 0.0 : inner.eigenvalues.cwiseSqrt().sum();
  out.trace_term = cov_x.trace() + cov_y.trace() - 2.0 * trace_sqrt;

  const double raw = out.mean_term + out.trace_term;
  const double eps = 1e-8 * std::max(1.0, out.mean_term + cov_x.trace() + cov_y.trace());
  if (raw < -eps)
    throw NotPsdError("csi: distance " + std::to_string(raw) + " is negative beyond tolerance " +
                      std::to_string(eps));
  out.value = std::max(0.0, raw);
  return out;
}

CsiMatrix csi_matrix(std::span<const stats::DatasetSummary> upstream,
                     std::span<const stats::DatasetSummary> downstream, const CsiOptions& options) {
  CsiMatrix m;
  for (const auto& u : upstream) m.upstream_names.push_back(u.name);
  for (const auto& dn : downstream) m.downstream_names.push_back(dn.name);
  m.entries.reserve(upstream.size());
  for (const auto& u : upstream) {
    auto& row = m.entries.emplace_back();
    row.reserve(downstream.size());
    for (const auto& dn : downstream) row.push_back(csi(u, dn, options));
  }
  return m;
}

std::string to_csv(const CsiMatrix& matrix) {
  std::string out = "upstream";
  for (const auto& name : matrix.downstream_names) out += "," + csv_field(name);
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < matrix.entries.size(); ++i) {
    out += csv_field(matrix.upstream_names[i]);
    for (const auto& v : matrix.entries[i]) {
      std::snprintf(buf, sizeof buf, ",%.6g", v.value);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace csikit::frechet
