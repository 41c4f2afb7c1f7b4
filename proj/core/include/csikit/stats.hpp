#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "csikit/linalg.hpp"
#include "csikit/shardio.hpp"

namespace csikit::stats {

/// Streaming first and second moments of d-dimensional rows.
///
/// `scatter` holds Σ (x − mean)(x − mean)ᵀ over the rows seen so far. Blocks
/// of rows are folded in with the pairwise (Chan et al.) update, so the
/// accumulator can be filled shard by shard and merged afterwards.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  std::uint64_t count() const noexcept { return count_; }
  const Vector& mean() const noexcept { return mean_; }
  const Matrix& scatter() const noexcept { return scatter_; }

  /// Folds a block of rows (n × dim) into the accumulator.
  MomentAccumulator& accumulate(const Eigen::Ref<const RowMatrix>& rows);
  MomentAccumulator& accumulate(const Eigen::Ref<const RowMatrixF>& rows);
  MomentAccumulator& accumulate_row(const Eigen::Ref<const Vector>& row);

  MomentAccumulator& merge(const MomentAccumulator& other);

 private:
  void fold(std::uint64_t n, const Vector& block_mean, const Matrix& block_scatter);

  std::uint64_t count_ = 0;
  Vector mean_;
  Matrix scatter_;
};

/// Value-returning forms of the accumulator updates.
MomentAccumulator accumulate(MomentAccumulator acc, const Eigen::Ref<const RowMatrix>& rows);
MomentAccumulator merge(MomentAccumulator a, const MomentAccumulator& b);

enum class Denominator { kSample, kPopulation };

struct DatasetSummary {
  std::string name;
  std::uint64_t count = 0;
  Vector mean;
  Matrix cov;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// cov = sym(scatter / (count − 1)), or / count in population mode.
/// Throws InsufficientData when count < 2.
DatasetSummary finalize(const MomentAccumulator& acc, std::string name,
                        Denominator denominator = Denominator::kSample);

/// Which node rows of each graph feed the summary.
struct NodePolicy {
  enum class Kind { kAllNodes, kOneNodePerGraph };
  Kind kind = Kind::kAllNodes;
  std::uint64_t seed = 0;

  static NodePolicy all_nodes() { return {}; }
  static NodePolicy one_per_graph(std::uint64_t seed) { return {Kind::kOneNodePerGraph, seed}; }
};

DatasetSummary summarize_shard(const shardio::EmbeddingShard& shard, NodePolicy policy = {},
                               Denominator denominator = Denominator::kSample);

/// Index of the node drawn from each graph under the one-node-per-graph
/// policy, in graph order.
std::vector<std::uint32_t> pick_one_node_per_graph(const shardio::EmbeddingShard& shard, std::uint64_t seed);

enum class StdConvention { kSample, kPopulation };

inline constexpr double kStdFloor = 1e-12;

/// Per-column z-score. Columns whose standard deviation is below kStdFloor
/// become all-zero. Requires at least two rows.
RowMatrix standardize(const Eigen::Ref<const RowMatrix>& rows,
                      StdConvention convention = StdConvention::kSample);

/// Binary summary codec ("CSM1") and its JSON mirror.
std::vector<std::byte> encode_summary(const DatasetSummary& summary);
DatasetSummary decode_summary(std::span<const std::byte> bytes);
std::string summary_to_json(const DatasetSummary& summary, const std::map<std::string, std::string>& provenance = {});

void write_summary(const DatasetSummary& summary, const std::filesystem::path& path,
                   const std::map<std::string, std::string>& provenance = {});
DatasetSummary read_summary(const std::filesystem::path& path);

}  // namespace csikit::stats
