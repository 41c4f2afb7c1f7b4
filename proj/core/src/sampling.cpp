#include "csikit/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "csikit/error.hpp"
#include "csikit/rng.hpp"

namespace csikit::sampling {
namespace {

void check_total(std::size_t total, std::size_t graph_count) {
  if (graph_count == 0) throw ValidationError("sampling: shard is empty");
  if (total < 1) throw ValidationError("sampling: total must be >= 1");
  if (total > graph_count)
    throw ValidationError("sampling: total " + std::to_string(total) + " exceeds graph count " +
                          std::to_string(graph_count));
}

// First `take` entries of a partial Fisher–Yates shuffle of `pool`.
std::vector<std::size_t> draw(std::vector<std::size_t> pool, std::size_t take, rng::Stream& stream) {
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(stream.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  return pool;
}

}  // namespace

ClassIndex build_class_index(const shardio::EmbeddingShard& shard) {
  if (shard.graphs.empty()) throw ValidationError("build_class_index: shard '" + shard.name + "' is empty");
  ClassIndex index;
  index.graph_count = shard.graphs.size();
  for (std::size_t i = 0; i < shard.graphs.size(); ++i) index.bins[shard.graphs[i].class_id].push_back(i);
  return index;
}

std::map<std::uint64_t, std::size_t> balanced_quotas(const ClassIndex& index, std::size_t total) {
  check_total(total, index.graph_count);
  const std::size_t q = total / index.class_count();
  std::map<std::uint64_t, std::size_t> quotas;
  std::size_t assigned = 0;
  for (const auto& [id, members] : index.bins) {
    quotas[id] = std::min(q, members.size());
    assigned += quotas[id];
  }
  std::size_t left = total - assigned;
  while (left > 0) {
    for (const auto& [id, members] : index.bins) {
      if (left == 0) break;
      if (quotas[id] < members.size()) {
        ++quotas[id];
        --left;
      }
    }
  }
  return quotas;
}

std::vector<std::size_t> balanced_indices(const ClassIndex& index, std::size_t total, std::uint64_t seed) {
  const auto quotas = balanced_quotas(index, total);
  std::vector<std::size_t> out;
  out.reserve(total);
  for (const auto& [id, members] : index.bins) {
    rng::Stream stream(seed, {rng::tag("sample/balanced"), id});
    auto picked = draw(members, quotas.at(id), stream);
    out.insert(out.end(), picked.begin(), picked.end());
  }
  std::ranges::sort(out);
  return out;
}

std::vector<std::size_t> uniform_indices(std::size_t graph_count, std::size_t total, std::uint64_t seed) {
  check_total(total, graph_count);
  std::vector<std::size_t> pool(graph_count);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  rng::Stream stream(seed, {rng::tag("sample/uniform")});
  auto out = draw(std::move(pool), total, stream);
  std::ranges::sort(out);
  return out;
}

shardio::EmbeddingShard subset(const shardio::EmbeddingShard& shard, const std::vector<std::size_t>& indices) {
  shardio::EmbeddingShard out;
  out.name = shard.name;
  out.dim = shard.dim;
  out.class_labels = shard.class_labels;
  out.graphs.reserve(indices.size());
  for (auto i : indices) out.graphs.push_back(shard.graphs.at(i));
  return out;
}

shardio::EmbeddingShard sample_balanced(const shardio::EmbeddingShard& shard, const ClassIndex& index,
                                        std::size_t total, std::uint64_t seed) {
  if (index.graph_count != shard.graphs.size())
    throw ValidationError("sample_balanced: class index was built for a different shard");
  return subset(shard, balanced_indices(index, total, seed));
}

shardio::EmbeddingShard sample_uniform(const shardio::EmbeddingShard& shard, std::size_t total,
                                       std::uint64_t seed) {
  return subset(shard, uniform_indices(shard.graphs.size(), total, seed));
}

std::map<std::uint64_t, ClassCoverage> coverage_report(const ClassIndex& original,
                                                       const shardio::EmbeddingShard& sample) {
  std::map<std::uint64_t, ClassCoverage> out;
  for (const auto& [id, members] : original.bins) out[id].original = members.size();
  for (const auto& g : sample.graphs) ++out[g.class_id].sampled;
  return out;
}

std::string coverage_to_csv(const std::map<std::uint64_t, ClassCoverage>& coverage,
                            const std::map<std::uint64_t, std::string>& labels) {
  std::string out = "class_id,label,sampled,original\n";
  for (const auto& [id, c] : coverage) {
    std::string label;
    if (auto it = labels.find(id); it != labels.end()) label = it->second;
    if (label.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : label) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      label = quoted + "\"";
    }
    out += std::to_string(id) + "," + label + "," + std::to_string(c.sampled) + "," + std::to_string(c.original) + "\n";
  }
  return out;
}

std::size_t covered_classes(const std::map<std::uint64_t, ClassCoverage>& coverage) {
  return static_cast<std::size_t>(
      std::ranges::count_if(coverage, [](const auto& entry) { return entry.second.sampled > 0; }));
}

}  // namespace csikit::sampling
