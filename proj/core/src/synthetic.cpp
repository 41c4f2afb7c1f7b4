#include "csikit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "csikit/error.hpp"
#include "csikit/linalg.hpp"
#include "csikit/rng.hpp"

namespace csikit::synthetic {
namespace {

Vector normal_vector(rng::Stream& stream, Eigen::Index n, double scale) {
  Vector v(n);
  for (auto& x : v) x = scale * stream.normal();
  return v;
}

}  // namespace

void validate(const SyntheticSpec& spec) {
  if (spec.dim == 0 || spec.graphs == 0 || spec.nodes == 0 || spec.classes == 0)
    throw ValidationError("synthetic: dim, graphs, nodes and classes must be positive");
  if (spec.classes > spec.graphs) throw ValidationError("synthetic: more classes than graphs");
  if (spec.nodes_max != 0 && spec.nodes_max < spec.nodes)
    throw ValidationError("synthetic: nodes_max must be >= nodes");
  if (spec.pooled_subspace > spec.dim) throw ValidationError("synthetic: pooled subspace larger than dim");
  for (double v : {spec.class_spread, spec.graph_spread, spec.node_spread, spec.zipf_exponent}) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("synthetic: spreads and exponent must be finite and >= 0");
  }
  if (!std::isfinite(spec.shift)) throw ValidationError("synthetic: shift must be finite");
}

std::vector<std::size_t> class_sizes(std::size_t graphs, std::size_t classes, ClassSizes kind, double zipf_exponent) {
  if (classes == 0 || classes > graphs) throw ValidationError("class_sizes: need 1 <= classes <= graphs");
  std::vector<std::size_t> sizes(classes, 1);
  const std::size_t spare = graphs - classes;
  if (kind == ClassSizes::kEven) {
    for (std::size_t c = 0; c < classes; ++c) sizes[c] += spare / classes + (c < spare % classes ? 1 : 0);
    return sizes;
  }
  std::vector<double> weights(classes);
  for (std::size_t c = 0; c < classes; ++c) weights[c] = std::pow(static_cast<double>(c + 1), -zipf_exponent);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t given = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    const double exact = static_cast<double>(spare) * weights[c] / total;
    const auto whole = static_cast<std::size_t>(std::floor(exact));
    sizes[c] += whole;
    given += whole;
    remainders.emplace_back(exact - static_cast<double>(whole), c);
  }
  // Largest remainder first; lower rank wins ties.
  std::ranges::sort(remainders, [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t i = 0; given < spare; ++i, ++given) ++sizes[remainders[i % classes].second];
  return sizes;
}

shardio::EmbeddingShard generate(const SyntheticSpec& spec) {
  validate(spec);
  const auto d = static_cast<Eigen::Index>(spec.dim);
  const auto r = static_cast<Eigen::Index>(spec.pooled_subspace);

  rng::Stream layout(spec.seed, {rng::tag("synthetic/layout")});
  rng::Stream features(spec.seed, {rng::tag("synthetic/features")});

  // Basis of the pooled subspace: orthonormalized Gaussian columns.
  Matrix basis;
  if (r > 0) {
    Matrix g(d, r);
    for (auto& x : g.reshaped()) x = layout.normal();
    basis = Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(d, r);
  }

  std::vector<Vector> centers;
  centers.reserve(spec.classes);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    centers.push_back(r > 0 ? Vector(basis * normal_vector(layout, r, spec.class_spread))
                            : normal_vector(layout, d, spec.class_spread));
  }

  const auto sizes = class_sizes(spec.graphs, spec.classes, spec.class_sizes, spec.zipf_exponent);
  std::vector<std::uint64_t> assignment;
  assignment.reserve(spec.graphs);
  for (std::size_t c = 0; c < sizes.size(); ++c) assignment.insert(assignment.end(), sizes[c], c);
  for (std::size_t i = assignment.size(); i > 1; --i) std::swap(assignment[i - 1], assignment[layout.below(i)]);

  shardio::EmbeddingShard shard;
  shard.name = spec.name;
  shard.dim = spec.dim;
  for (std::size_t c = 0; c < spec.classes; ++c) shard.class_labels[c] = "class-" + std::to_string(c);
  shard.graphs.reserve(spec.graphs);

  const std::uint32_t span = spec.nodes_max > spec.nodes ? spec.nodes_max - spec.nodes + 1 : 1;
  for (std::size_t gi = 0; gi < spec.graphs; ++gi) {
    shardio::GraphRecord g;
    g.class_id = assignment[gi];
    g.node_count = spec.nodes + static_cast<std::uint32_t>(span > 1 ? layout.below(span) : 0);
    Vector mean = centers[g.class_id];
    mean += r > 0 ? Vector(basis * normal_vector(features, r, spec.graph_spread))
                  : normal_vector(features, d, spec.graph_spread);
    mean.array() += spec.shift;

    g.features.resize(std::size_t{g.node_count} * spec.dim);
    RowMatrix rows(g.node_count, d);
    if (r > 0) {
      for (std::uint32_t n = 0; n + 1 < g.node_count; n += 2) {
        const Vector v = normal_vector(features, d, spec.node_spread);
        rows.row(n) = (mean + v).transpose();
        rows.row(n + 1) = (mean - v).transpose();
      }
      if (g.node_count % 2 == 1) rows.row(g.node_count - 1) = mean.transpose();
    } else {
      for (std::uint32_t n = 0; n < g.node_count; ++n)
        rows.row(n) = (mean + normal_vector(features, d, spec.node_spread)).transpose();
    }
    Eigen::Map<RowMatrixF>(g.features.data(), g.node_count, d) = rows.cast<float>();
    shard.graphs.push_back(std::move(g));
  }

  shard.provenance = {{"generator", "gen-synthetic"}, {"seed", std::to_string(spec.seed)}};
  return shard;
}

}  // namespace csikit::synthetic
