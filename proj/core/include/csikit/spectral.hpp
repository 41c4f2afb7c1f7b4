#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csikit/linalg.hpp"
#include "csikit/shardio.hpp"

namespace csikit::spectral {

/// exp of the Shannon entropy (natural log) of the normalized eigenvalue
/// distribution p_j = λ_j / Σ λ. Negative eigenvalues are clamped to zero and
/// zero-probability terms contribute nothing. Result lies in [1, d].
/// Throws DegenerateSpectrum if the trace is not positive.
double effective_rank(const Matrix& cov);

/// Same quantity evaluated directly from a spectrum.
double effective_rank_of_spectrum(const Vector& eigenvalues);

/// Column-wise mean of a graph's node rows.
Vector pool_graph(const Eigen::Ref<const RowMatrixF>& features);

enum class Level { kNode, kGraph };
std::string to_string(Level level);

struct ErankReport {
  Level level = Level::kNode;
  std::size_t k = 0;
  std::size_t repeats = 0;
  std::vector<double> per_repeat;
  double mean = 0.0;
  /// Sample standard deviation (n − 1); zero for a single repeat.
  double std = 0.0;
  std::uint64_t seed = 0;
};

/// Graph indices drawn (uniformly, without replacement) for one repeat.
/// Depends only on (graph_count, k, repeat, seed), so node- and graph-level
/// runs with the same seed see the same graphs.
std::vector<std::size_t> sample_graphs(std::size_t graph_count, std::size_t k, std::size_t repeat,
                                       std::uint64_t seed);

/// The k × d matrix for one repeat before standardization.
RowMatrix level_matrix(const shardio::EmbeddingShard& shard, Level level, std::span<const std::size_t> graphs,
                       std::size_t repeat, std::uint64_t seed);

/// Repeats: sample k graphs, build the level matrix, z-score each column,
/// take the (n − 1) covariance and its effective rank.
ErankReport bootstrap_erank(const shardio::EmbeddingShard& shard, Level level, std::size_t k, std::size_t repeats,
                            std::uint64_t seed);

struct PairedErank {
  std::size_t k = 0;
  ErankReport node;
  ErankReport graph;
};

inline const std::vector<std::size_t> kDefaultStudyKs = {5000, 10000, 15000};
inline constexpr std::size_t kDefaultRepeats = 10;

std::vector<PairedErank> paired_erank_study(const shardio::EmbeddingShard& shard,
                                            const std::vector<std::size_t>& ks = kDefaultStudyKs,
                                            std::size_t repeats = kDefaultRepeats, std::uint64_t seed = 0);

/// Columns k,level,repeat,erank,seed.
std::string study_to_csv(const std::vector<PairedErank>& study);
/// Columns k,level,mean,std,seed.
std::string study_summary_to_csv(const std::vector<PairedErank>& study);

}  // namespace csikit::spectral
