#include "csikit/shardio.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "bytes.hpp"
#include "csikit/error.hpp"

namespace csikit::shardio {
namespace {

using detail::ByteReader;
using detail::ByteWriter;

std::string graph_label(std::size_t i) { return "graph " + std::to_string(i); }

}  // namespace

std::uint64_t EmbeddingShard::total_nodes() const noexcept {
  return std::accumulate(graphs.begin(), graphs.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const GraphRecord& g) { return acc + g.node_count; });
}

Eigen::Map<const RowMatrixF> EmbeddingShard::rows(std::size_t i) const {
  const auto& g = graphs.at(i);
  return {g.features.data(), static_cast<Eigen::Index>(g.node_count), static_cast<Eigen::Index>(dim)};
}

bool EmbeddingShard::same_payload(const EmbeddingShard& other) const {
  if (dim != other.dim || graphs.size() != other.graphs.size()) return false;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& a = graphs[i];
    const auto& b = other.graphs[i];
    if (a.node_count != b.node_count || a.class_id != b.class_id ||
        a.features.size() != b.features.size())
      return false;
    if (!a.features.empty() &&
        std::memcmp(a.features.data(), b.features.data(), a.features.size() * sizeof(float)) != 0)
      return false;
  }
  return true;
}

std::uint64_t encoded_size(const EmbeddingShard& shard) {
  std::uint64_t size = kShardHeaderBytes;
  for (const auto& g : shard.graphs)
    size += kGraphHeaderBytes + std::uint64_t{4} * g.node_count * shard.dim;
  return size;
}

void validate(const EmbeddingShard& shard) {
  if (shard.dim == 0) throw ValidationError("shard '" + shard.name + "': dim must be >= 1");
  for (std::size_t i = 0; i < shard.graphs.size(); ++i) {
    const auto& g = shard.graphs[i];
    if (g.node_count == 0) throw ValidationError(graph_label(i) + ": node_count must be >= 1");
    if (g.features.size() != std::size_t{g.node_count} * shard.dim)
      throw ValidationError(graph_label(i) + ": expected " +
                            std::to_string(std::size_t{g.node_count} * shard.dim) +
                            " feature values, found " + std::to_string(g.features.size()));
    for (std::size_t k = 0; k < g.features.size(); ++k) {
      if (!std::isfinite(g.features[k]))
        throw ValidationError(graph_label(i) + ": non-finite feature at node " +
                              std::to_string(k / shard.dim) + ", column " +
                              std::to_string(k % shard.dim));
    }
  }
}

std::vector<std::byte> encode(const EmbeddingShard& shard) {
  validate(shard);
  ByteWriter w;
  w.reserve(encoded_size(shard));
  w.raw(kShardMagic, sizeof kShardMagic);
  w.put<std::uint32_t>(shard.dim);
  w.put<std::uint64_t>(shard.graphs.size());
  for (const auto& g : shard.graphs) {
    w.put<std::uint32_t>(g.node_count);
    w.put<std::uint64_t>(g.class_id);
    if constexpr (std::endian::native == std::endian::little) {
      w.raw(g.features.data(), g.features.size() * sizeof(float));
    } else {
      for (float f : g.features) w.put<float>(f);
    }
  }
  return w.take();
}

EmbeddingShard decode(std::span<const std::byte> bytes, std::string name) {
  ByteReader r(bytes);
  if (!r.has(kShardHeaderBytes))
    throw FormatError("truncated shard header: " + std::to_string(bytes.size()) + " bytes");
  auto magic = r.take(4);
  if (std::memcmp(magic.data(), kShardMagic, 4) != 0) throw FormatError("bad magic: not a CSI1 shard");

  EmbeddingShard shard;
  shard.name = std::move(name);
  shard.dim = r.get<std::uint32_t>();
  if (shard.dim == 0) throw FormatError("shard declares dim = 0");
  const auto graph_count = r.get<std::uint64_t>();

  // Every graph needs at least a header; reject absurd counts before allocating.
  if (graph_count > r.remaining() / kGraphHeaderBytes)
    throw FormatError("declared graph_count " + std::to_string(graph_count) +
                      " exceeds what the file length can hold");
  shard.graphs.reserve(graph_count);

  for (std::uint64_t i = 0; i < graph_count; ++i) {
    if (!r.has(kGraphHeaderBytes))
      throw FormatError("truncated file in header of graph " + std::to_string(i));
    GraphRecord g;
    g.node_count = r.get<std::uint32_t>();
    g.class_id = r.get<std::uint64_t>();
    if (g.node_count == 0) throw FormatError("graph " + std::to_string(i) + " has node_count = 0");
    const std::uint64_t values = std::uint64_t{g.node_count} * shard.dim;
    if (values > r.remaining() / sizeof(float))
      throw FormatError("truncated file in payload of graph " + std::to_string(i));
    g.features.resize(values);
    auto payload = r.take(values * sizeof(float));
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(g.features.data(), payload.data(), payload.size());
    } else {
      ByteReader pr(payload);
      for (auto& f : g.features) f = pr.get<float>();
    }
    for (std::size_t k = 0; k < g.features.size(); ++k) {
      if (!std::isfinite(g.features[k]))
        throw FormatError("graph " + std::to_string(i) + ": NaN/Inf feature at node " +
                          std::to_string(k / shard.dim));
    }
    shard.graphs.push_back(std::move(g));
  }
  if (r.remaining() != 0)
    throw FormatError(std::to_string(r.remaining()) + " trailing bytes after last graph");
  return shard;
}

std::filesystem::path manifest_path(const std::filesystem::path& shard_path) {
  auto p = shard_path;
  p += ".manifest.json";
  return p;
}

ShardManifest make_manifest(const EmbeddingShard& shard) {
  return ShardManifest{shard.name, shard.dim, shard.graphs.size(), shard.total_nodes(),
                       shard.class_labels, shard.provenance};
}

std::string manifest_to_json(const ShardManifest& m) {
  nlohmann::ordered_json j;
  j["dataset"] = m.dataset;
  j["dim"] = m.dim;
  j["graph_count"] = m.graph_count;
  j["total_nodes"] = m.total_nodes;
  // JSON object keys are strings; class ids are written in decimal.
  auto labels = nlohmann::ordered_json::object();
  for (const auto& [id, label] : m.class_labels) labels[std::to_string(id)] = label;
  j["class_labels"] = std::move(labels);
  if (!m.provenance.empty()) j["provenance"] = m.provenance;
  return j.dump(2) + "\n";
}

ShardManifest manifest_from_json(const std::string& text) {
  ShardManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.dataset = j.at("dataset").get<std::string>();
    m.dim = j.at("dim").get<std::uint32_t>();
    m.graph_count = j.at("graph_count").get<std::uint64_t>();
    m.total_nodes = j.at("total_nodes").get<std::uint64_t>();
    if (auto it = j.find("class_labels"); it != j.end()) {
      for (const auto& [key, value] : it->items())
        m.class_labels[std::stoull(key)] = value.get<std::string>();
    }
    if (auto it = j.find("provenance"); it != j.end())
      m.provenance = it->get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed shard manifest: ") + e.what());
  } catch (const std::logic_error& e) {
    throw FormatError(std::string("malformed class id in shard manifest: ") + e.what());
  }
  return m;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  std::vector<std::byte> bytes(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size)))
    throw IoError("failed reading '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::as_bytes(std::span(text.data(), text.size())));
}

void write_shard(const EmbeddingShard& shard, const std::filesystem::path& path) {
  const auto bytes = encode(shard);
  write_file(path, bytes);
  write_text(manifest_path(path), manifest_to_json(make_manifest(shard)));
}

EmbeddingShard read_shard(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  auto shard = decode(bytes, path.stem().string());
  const auto mpath = manifest_path(path);
  if (std::filesystem::exists(mpath)) {
    const auto mbytes = read_file(mpath);
    const auto m = manifest_from_json(std::string(reinterpret_cast<const char*>(mbytes.data()), mbytes.size()));
    if (m.dim != shard.dim || m.graph_count != shard.graphs.size() || m.total_nodes != shard.total_nodes())
      throw FormatError("manifest '" + mpath.string() + "' disagrees with shard counts");
    shard.name = m.dataset;
    shard.class_labels = m.class_labels;
    shard.provenance = m.provenance;
  }
  return shard;
}

EmbeddingShard concat_shards(std::span<const EmbeddingShard> shards) {
  if (shards.empty()) throw ValidationError("concat_shards: no shards given");
  if (shards.size() == 1) return shards.front();
  EmbeddingShard out;
  out.dim = shards.front().dim;
  std::size_t total = 0;
  for (const auto& s : shards) {
    if (s.dim != out.dim)
      throw DimensionMismatch("concat_shards: '" + s.name + "' has dim " + std::to_string(s.dim) +
                              ", expected " + std::to_string(out.dim));
    total += s.graphs.size();
  }
  out.graphs.reserve(total);
  for (const auto& s : shards) {
    if (!out.name.empty()) out.name += '+';
    out.name += s.name;
    out.graphs.insert(out.graphs.end(), s.graphs.begin(), s.graphs.end());
    for (const auto& [id, label] : s.class_labels) out.class_labels.emplace(id, label);
  }
  return out;
}

}  // namespace csikit::shardio
