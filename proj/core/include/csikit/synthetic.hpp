#pragma once

#include <cstdint>
#include <vector>

#include "csikit/shardio.hpp"

namespace csikit::synthetic {

enum class ClassSizes { kEven, kZipf };

/// Gaussian-mixture shard generator used for fixtures and desk-scale runs.
///
/// Each class has a center; each graph draws its mean around its class
/// center; each node draws its row around the graph mean. With
/// `pooled_subspace` = r > 0, class centers and graph means are confined to a
/// random r-dimensional subspace and node offsets are emitted in ± pairs, so
/// the mean-pooled graph vectors lie in that subspace while node rows span
/// all `dim` directions.
struct SyntheticSpec {
  std::uint32_t dim = 8;
  std::size_t graphs = 100;
  std::uint32_t nodes = 5;
  /// Node counts are drawn uniformly from [nodes, nodes_max] when larger
  /// than `nodes`.
  std::uint32_t nodes_max = 0;
  std::size_t classes = 4;
  ClassSizes class_sizes = ClassSizes::kEven;
  double zipf_exponent = 1.0;
  double class_spread = 3.0;
  double graph_spread = 1.0;
  double node_spread = 1.0;
  /// Added to every coordinate of every node row.
  double shift = 0.0;
  std::uint32_t pooled_subspace = 0;
  std::uint64_t seed = 0;
  std::string name = "synthetic";
};

/// Validates the spec; throws ValidationError on non-positive sizes,
/// classes > graphs or pooled_subspace > dim.
void validate(const SyntheticSpec& spec);

/// Class sizes summing to `graphs`, each at least 1. Zipf sizes follow
/// 1 / (rank + 1)^exponent with largest-remainder rounding.
std::vector<std::size_t> class_sizes(std::size_t graphs, std::size_t classes, ClassSizes kind,
                                     double zipf_exponent = 1.0);

shardio::EmbeddingShard generate(const SyntheticSpec& spec);

}  // namespace csikit::synthetic
