#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "csikit/linalg.hpp"

namespace csikit::shardio {

/// One molecular graph: node_count rows of `dim` float32 features, row-major.
struct GraphRecord {
  std::uint32_t node_count = 0;
  std::uint64_t class_id = 0;
  std::vector<float> features;

  bool operator==(const GraphRecord&) const = default;
};

/// A named collection of graphs sharing one feature dimension.
///
/// Node rows are stored as float32 exactly as they appear on disk; every
/// statistic computed from them is accumulated in double precision.
struct EmbeddingShard {
  std::string name;
  std::uint32_t dim = 0;
  std::vector<GraphRecord> graphs;
  /// Optional human-readable names for class ids. Persisted only in the
  /// JSON manifest.
  std::map<std::uint64_t, std::string> class_labels;
  /// Free-form key/value pairs recorded in the manifest (seed, command, …).
  std::map<std::string, std::string> provenance;

  std::size_t graph_count() const noexcept { return graphs.size(); }
  std::uint64_t total_nodes() const noexcept;

  /// Read-only row-major view of graph `i`'s node features.
  Eigen::Map<const RowMatrixF> rows(std::size_t i) const;

  /// Graph-wise structural equality (dim, graphs, class ids, payload bytes).
  /// Name, labels and provenance are metadata and are ignored.
  bool same_payload(const EmbeddingShard& other) const;
};

struct ShardManifest {
  std::string dataset;
  std::uint32_t dim = 0;
  std::uint64_t graph_count = 0;
  std::uint64_t total_nodes = 0;
  std::map<std::uint64_t, std::string> class_labels;
  std::map<std::string, std::string> provenance;
};

inline constexpr char kShardMagic[4] = {'C', 'S', 'I', '1'};
inline constexpr std::size_t kShardHeaderBytes = 16;
inline constexpr std::size_t kGraphHeaderBytes = 12;

/// Exact size in bytes of the binary encoding of `shard`.
std::uint64_t encoded_size(const EmbeddingShard& shard);

/// Checks dim ≥ 1, node_count ≥ 1, payload length and finiteness.
/// Throws ValidationError naming the first offending graph.
void validate(const EmbeddingShard& shard);

/// Binary encoding; little-endian regardless of host byte order.
std::vector<std::byte> encode(const EmbeddingShard& shard);
/// Inverse of encode. `name` becomes the shard's name.
EmbeddingShard decode(std::span<const std::byte> bytes, std::string name = {});

std::filesystem::path manifest_path(const std::filesystem::path& shard_path);

ShardManifest make_manifest(const EmbeddingShard& shard);
std::string manifest_to_json(const ShardManifest& manifest);
ShardManifest manifest_from_json(const std::string& text);

/// Writes `path` and `<path>.manifest.json`. Non-finite features are rejected
/// before anything touches the filesystem.
void write_shard(const EmbeddingShard& shard, const std::filesystem::path& path);

/// Reads and validates a shard. When the companion manifest exists its name,
/// labels and provenance are loaded and its counts must agree with the
/// binary; otherwise the shard is named after the file stem.
EmbeddingShard read_shard(const std::filesystem::path& path);

/// Concatenates graphs in input order. Names are joined with '+'.
EmbeddingShard concat_shards(std::span<const EmbeddingShard> shards);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace csikit::shardio
