#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "csikit/linalg.hpp"
#include "csikit/stats.hpp"

namespace csikit::frechet {

/// Chemical Similarity Index of one dataset pair, with its decomposition.
struct CsiValue {
  /// max(0, mean_term + trace_term).
  double value = 0.0;
  /// ‖μ_X − μ_Y‖².
  double mean_term = 0.0;
  /// tr(Σ_X) + tr(Σ_Y) − 2 tr((Σ_X Σ_Y)^{1/2}).
  double trace_term = 0.0;
  /// Negative eigenvalues within tolerance that were clamped to zero.
  std::size_t clamped_eigenvalues = 0;
};

struct CsiOptions {
  /// Added to both covariance diagonals before the distance is taken.
  /// Zero leaves the covariances untouched.
  double ridge = 0.0;
};

/// 1e-10 · max(1, tr(m)).
double symmetry_tolerance(const Matrix& m);

/// Eigenvalues of a symmetric matrix after clamping small negatives.
///
/// Eigenvalues in [−tol, 0) with tol = symmetry_tolerance(m) · max(1, λ_max)
/// are set to zero and counted; anything lower throws NotPsdError.
struct ClampedSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
  std::size_t clamped = 0;
};
ClampedSpectrum clamped_spectrum(const Matrix& m, bool with_vectors);

/// Principal square root V·diag(√λ)·Vᵀ of a symmetric PSD matrix.
Matrix sqrt_psd(const Matrix& m);

CsiValue csi(const stats::DatasetSummary& x, const stats::DatasetSummary& y, const CsiOptions& options = {});

/// Entry (i, j) is csi(upstream[i], downstream[j]).
struct CsiMatrix {
  std::vector<std::string> upstream_names;
  std::vector<std::string> downstream_names;
  std::vector<std::vector<CsiValue>> entries;
};

CsiMatrix csi_matrix(std::span<const stats::DatasetSummary> upstream,
                     std::span<const stats::DatasetSummary> downstream, const CsiOptions& options = {});

/// Heatmap CSV: header "upstream,<downstream names…>", one row per upstream,
/// values printed with 6 significant digits.
std::string to_csv(const CsiMatrix& matrix);

}  // namespace csikit::frechet
