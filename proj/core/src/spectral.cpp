#include "csikit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "csikit/error.hpp"
#include "csikit/rng.hpp"
#include "csikit/stats.hpp"

namespace csikit::spectral {

double effective_rank_of_spectrum(const Vector& eigenvalues) {
  const Vector lambda = eigenvalues.cwiseMax(0.0);
  const double total = lambda.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateSpectrum("effective_rank: spectrum has non-positive trace");
  // exp(H) with H = −Σ p ln p rewritten as total · exp(−Σ λ ln λ / total);
  // a uniform spectrum of ones then yields d exactly.
  double weighted_log = 0.0;
  for (double l : lambda)
    if (l > 0.0) weighted_log += l * std::log(l);
  const double erank = total * std::exp(-weighted_log / total);
  return std::clamp(erank, 1.0, static_cast<double>(lambda.size()));
}

double effective_rank(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) throw ValidationError("effective_rank: matrix must be square and non-empty");
  if (!cov.allFinite()) throw ValidationError("effective_rank: matrix contains NaN/Inf");
  if ((cov - cov.transpose()).norm() > 1e-10 * std::max(1.0, cov.norm()))
    throw ValidationError("effective_rank: matrix is not symmetric");
  if (!(cov.trace() > 0.0)) throw DegenerateSpectrum("effective_rank: trace must be positive");
  const Matrix sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ValidationError("effective_rank: eigendecomposition failed");
  return effective_rank_of_spectrum(solver.eigenvalues());
}

Vector pool_graph(const Eigen::Ref<const RowMatrixF>& features) {
  if (features.rows() == 0) throw ValidationError("pool_graph: graph has no nodes");
  return features.cast<double>().colwise().mean().transpose();
}

std::string to_string(Level level) { return level == Level::kNode ? "node" : "graph"; }

std::vector<std::size_t> sample_graphs(std::size_t graph_count, std::size_t k, std::size_t repeat,
                                       std::uint64_t seed) {
  if (k > graph_count)
    throw ValidationError("bootstrap: k = " + std::to_string(k) + " exceeds graph count " +
                          std::to_string(graph_count));
  rng::Stream stream(seed, {rng::tag("erank/graphs"), k, repeat});
  std::vector<std::size_t> pool(graph_count);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher–Yates: the first k slots end up a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(stream.below(graph_count - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

RowMatrix level_matrix(const shardio::EmbeddingShard& shard, Level level, std::span<const std::size_t> graphs,
                       std::size_t repeat, std::uint64_t seed) {
  RowMatrix m(static_cast<Eigen::Index>(graphs.size()), shard.dim);
  rng::Stream nodes(seed, {rng::tag("erank/nodes"), graphs.size(), repeat});
  for (std::size_t r = 0; r < graphs.size(); ++r) {
    const auto features = shard.rows(graphs[r]);
    const auto row = static_cast<Eigen::Index>(r);
    if (level == Level::kGraph) {
      m.row(row) = pool_graph(features).transpose();
    } else {
      const auto pick = static_cast<Eigen::Index>(nodes.below(static_cast<std::uint64_t>(features.rows())));
      m.row(row) = features.row(pick).cast<double>();
    }
  }
  return m;
}

ErankReport bootstrap_erank(const shardio::EmbeddingShard& shard, Level level, std::size_t k, std::size_t repeats,
                            std::uint64_t seed) {
  if (k < 2) throw ValidationError("bootstrap_erank: k must be >= 2");
  if (repeats < 1) throw ValidationError("bootstrap_erank: repeats must be >= 1");
  if (k > shard.graphs.size())
    throw ValidationError("bootstrap_erank: k = " + std::to_string(k) + " exceeds graph count " +
                          std::to_string(shard.graphs.size()));

  ErankReport report;
  report.level = level;
  report.k = k;
  report.repeats = repeats;
  report.seed = seed;
  report.per_repeat.reserve(repeats);
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    const auto graphs = sample_graphs(shard.graphs.size(), k, rep, seed);
    const RowMatrix z = stats::standardize(level_matrix(shard, level, graphs, rep, seed));
    stats::MomentAccumulator acc(shard.dim);
    acc.accumulate(z);
    const auto summary = stats::finalize(acc, shard.name);
    report.per_repeat.push_back(effective_rank(summary.cov));
  }

  const double n = static_cast<double>(repeats);
  report.mean = std::accumulate(report.per_repeat.begin(), report.per_repeat.end(), 0.0) / n;
  if (repeats > 1) {
    double ss = 0.0;
    for (double v : report.per_repeat) ss += (v - report.mean) * (v - report.mean);
    report.std = std::sqrt(ss / (n - 1.0));
  }
  return report;
}

std::vector<PairedErank> paired_erank_study(const shardio::EmbeddingShard& shard, const std::vector<std::size_t>& ks,
                                            std::size_t repeats, std::uint64_t seed) {
  for (auto k : ks) {
    if (k > shard.graphs.size())
      throw ValidationError("paired_erank_study: k = " + std::to_string(k) + " exceeds graph count " +
                            std::to_string(shard.graphs.size()));
  }
  std::vector<PairedErank> out;
  out.reserve(ks.size());
  for (auto k : ks) {
    out.push_back({k, bootstrap_erank(shard, Level::kNode, k, repeats, seed),
                   bootstrap_erank(shard, Level::kGraph, k, repeats, seed)});
  }
  return out;
}

std::string study_to_csv(const std::vector<PairedErank>& study) {
  std::string out = "k,level,repeat,erank,seed\n";
  char buf[128];
  for (const auto& p : study) {
    for (const auto* rep : {&p.node, &p.graph}) {
      for (std::size_t i = 0; i < rep->per_repeat.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%s,%zu,%.10g,%llu\n", p.k, to_string(rep->level).c_str(), i,
                      rep->per_repeat[i], static_cast<unsigned long long>(rep->seed));
        out += buf;
      }
    }
  }
  return out;
}

std::string study_summary_to_csv(const std::vector<PairedErank>& study) {
  std::string out = "k,level,mean,std,seed\n";
  char buf[128];
  for (const auto& p : study) {
    for (const auto* rep : {&p.node, &p.graph}) {
      std::snprintf(buf, sizeof buf, "%zu,%s,%.10g,%.10g,%llu\n", p.k, to_string(rep->level).c_str(), rep->mean,
                    rep->std, static_cast<unsigned long long>(rep->seed));
      out += buf;
    }
  }
  return out;
}

}  // namespace csikit::spectral
