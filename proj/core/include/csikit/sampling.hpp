#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "csikit/shardio.hpp"

namespace csikit::sampling {

/// Graph indices grouped by class id, ascending by class id; shard order is
/// kept inside each bin.
struct ClassIndex {
  std::map<std::uint64_t, std::vector<std::size_t>> bins;
  std::size_t graph_count = 0;

  std::size_t class_count() const noexcept { return bins.size(); }
};

inline constexpr std::size_t kDefaultSampleTotal = 10000;

ClassIndex build_class_index(const shardio::EmbeddingShard& shard);

/// Per-bin sample sizes for a balanced draw of `total` graphs.
///
/// Every bin gets q = ⌊total / classes⌋ or all of its members if it has
/// fewer. What is left (the remainder plus any shortfall from small bins) is
/// handed out one graph at a time, cycling over bins in ascending class id
/// and skipping bins that are already exhausted.
std::map<std::uint64_t, std::size_t> balanced_quotas(const ClassIndex& index, std::size_t total);

/// Indices (ascending) of a class-balanced sample. Each bin draws its quota
/// uniformly without replacement from its own stream, seeded with
/// rng::stream_seed(seed, {tag("sample/balanced"), class_id}).
std::vector<std::size_t> balanced_indices(const ClassIndex& index, std::size_t total, std::uint64_t seed);

/// Indices (ascending) of a uniform sample without replacement, stream
/// rng::stream_seed(seed, {tag("sample/uniform")}).
std::vector<std::size_t> uniform_indices(std::size_t graph_count, std::size_t total, std::uint64_t seed);

/// Shard made of the selected graphs in original order. Metadata (name,
/// labels, dim) is carried over.
shardio::EmbeddingShard subset(const shardio::EmbeddingShard& shard, const std::vector<std::size_t>& indices);

shardio::EmbeddingShard sample_balanced(const shardio::EmbeddingShard& shard, const ClassIndex& index,
                                        std::size_t total, std::uint64_t seed);
shardio::EmbeddingShard sample_uniform(const shardio::EmbeddingShard& shard, std::size_t total,
                                       std::uint64_t seed);

struct ClassCoverage {
  std::size_t sampled = 0;
  std::size_t original = 0;
};

/// Per-class (sampled, original) counts; classes missing from the sample
/// report zero. Sample classes unknown to the index are counted with
/// original = 0.
std::map<std::uint64_t, ClassCoverage> coverage_report(const ClassIndex& original,
                                                       const shardio::EmbeddingShard& sample);

/// Columns class_id,label,sampled,original.
std::string coverage_to_csv(const std::map<std::uint64_t, ClassCoverage>& coverage,
                            const std::map<std::uint64_t, std::string>& labels);

/// Number of classes with at least one sampled graph.
std::size_t covered_classes(const std::map<std::uint64_t, ClassCoverage>& coverage);

}  // namespace csikit::sampling
