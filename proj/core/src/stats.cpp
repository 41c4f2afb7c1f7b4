#include "csikit/stats.hpp"

#include <cmath>
#include <cstring>

#include <json.hpp>

#include "bytes.hpp"
#include "csikit/error.hpp"
#include "csikit/rng.hpp"

namespace csikit::stats {
namespace {

constexpr char kSummaryMagic[4] = {'C', 'S', 'M', '1'};

void require_dim(std::size_t expected, Eigen::Index got, const char* what) {
  if (static_cast<std::size_t>(got) != expected)
    throw DimensionMismatch(std::string(what) + ": row width " + std::to_string(got) +
                            " does not match accumulator dim " + std::to_string(expected));
}

}  // namespace

MomentAccumulator::MomentAccumulator(std::size_t dim)
    : mean_(Vector::Zero(static_cast<Eigen::Index>(dim))),
      scatter_(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))) {}

void MomentAccumulator::fold(std::uint64_t n, const Vector& block_mean, const Matrix& block_scatter) {
  if (n == 0) return;
  if (count_ == 0) {
    count_ = n;
    mean_ = block_mean;
    scatter_ = block_scatter;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(n);
  const double total = na + nb;
  const Vector delta = block_mean - mean_;
  mean_ += delta * (nb / total);
  scatter_ += block_scatter;
  scatter_.noalias() += (na * nb / total) * delta * delta.transpose();
  count_ += n;
}

MomentAccumulator& MomentAccumulator::accumulate(const Eigen::Ref<const RowMatrix>& rows) {
  require_dim(dim(), rows.cols(), "accumulate");
  if (rows.rows() == 0) return *this;
  if (!rows.allFinite()) throw ValidationError("accumulate: non-finite value in input rows");
  const Vector block_mean = rows.colwise().mean().transpose();
  const RowMatrix centered = rows.rowwise() - block_mean.transpose();
  Matrix block_scatter(rows.cols(), rows.cols());
  block_scatter.noalias() = centered.transpose() * centered;
  fold(static_cast<std::uint64_t>(rows.rows()), block_mean, block_scatter);
  return *this;
}

MomentAccumulator& MomentAccumulator::accumulate(const Eigen::Ref<const RowMatrixF>& rows) {
  const RowMatrix promoted = rows.cast<double>();
  return accumulate(promoted);
}

MomentAccumulator& MomentAccumulator::accumulate_row(const Eigen::Ref<const Vector>& row) {
  require_dim(dim(), row.size(), "accumulate_row");
  if (!row.allFinite()) throw ValidationError("accumulate_row: non-finite value");
  ++count_;
  const Vector delta = row - mean_;
  mean_ += delta / static_cast<double>(count_);
  scatter_.noalias() += delta * (row - mean_).transpose();
  return *this;
}

MomentAccumulator& MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.dim() != dim())
    throw DimensionMismatch("merge: dims " + std::to_string(dim()) + " and " + std::to_string(other.dim()));
  fold(other.count_, other.mean_, other.scatter_);
  return *this;
}

MomentAccumulator accumulate(MomentAccumulator acc, const Eigen::Ref<const RowMatrix>& rows) {
  acc.accumulate(rows);
  return acc;
}

MomentAccumulator merge(MomentAccumulator a, const MomentAccumulator& b) {
  a.merge(b);
  return a;
}

DatasetSummary finalize(const MomentAccumulator& acc, std::string name, Denominator denominator) {
  if (acc.count() < 2)
    throw InsufficientData("finalize: need at least 2 rows, have " + std::to_string(acc.count()));
  const double denom = denominator == Denominator::kSample ? static_cast<double>(acc.count() - 1)
                                                           : static_cast<double>(acc.count());
  DatasetSummary s;
  s.name = std::move(name);
  s.count = acc.count();
  s.mean = acc.mean();
  const Matrix cov = acc.scatter() / denom;
  s.cov = 0.5 * (cov + cov.transpose());
  return s;
}

std::vector<std::uint32_t> pick_one_node_per_graph(const shardio::EmbeddingShard& shard, std::uint64_t seed) {
  rng::Stream stream(seed, {rng::tag("summarize/one-node-per-graph")});
  std::vector<std::uint32_t> picks;
  picks.reserve(shard.graphs.size());
  for (const auto& g : shard.graphs) picks.push_back(static_cast<std::uint32_t>(stream.below(g.node_count)));
  return picks;
}

DatasetSummary summarize_shard(const shardio::EmbeddingShard& shard, NodePolicy policy, Denominator denominator) {
  if (shard.graphs.empty()) throw ValidationError("summarize_shard: shard '" + shard.name + "' is empty");
  MomentAccumulator acc(shard.dim);
  if (policy.kind == NodePolicy::Kind::kAllNodes) {
    for (std::size_t i = 0; i < shard.graphs.size(); ++i) acc.accumulate(shard.rows(i));
  } else {
    const auto picks = pick_one_node_per_graph(shard, policy.seed);
    RowMatrixF selected(static_cast<Eigen::Index>(shard.graphs.size()), shard.dim);
    for (std::size_t i = 0; i < shard.graphs.size(); ++i)
      selected.row(static_cast<Eigen::Index>(i)) = shard.rows(i).row(picks[i]);
    acc.accumulate(selected);
  }
  return finalize(acc, shard.name, denominator);
}

RowMatrix standardize(const Eigen::Ref<const RowMatrix>& rows, StdConvention convention) {
  if (rows.rows() < 2)
    throw InsufficientData("standardize: need at least 2 rows, have " + std::to_string(rows.rows()));
  const double n = static_cast<double>(rows.rows());
  const double denom = convention == StdConvention::kSample ? n - 1.0 : n;
  RowMatrix out = rows;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    auto col = out.col(c);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / denom);
    if (sd < kStdFloor) {
      col.setZero();
    } else {
      col /= sd;
    }
  }
  return out;
}

std::vector<std::byte> encode_summary(const DatasetSummary& s) {
  const auto d = static_cast<Eigen::Index>(s.dim());
  if (s.cov.rows() != d || s.cov.cols() != d)
    throw DimensionMismatch("encode_summary: covariance shape does not match mean length");
  detail::ByteWriter w;
  w.raw(kSummaryMagic, 4);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(d));
  w.put<std::uint64_t>(s.count);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(s.name.size()));
  w.raw(s.name.data(), s.name.size());
  for (Eigen::Index i = 0; i < d; ++i) w.put<double>(s.mean(i));
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) w.put<double>(s.cov(r, c));
  return w.take();
}

DatasetSummary decode_summary(std::span<const std::byte> bytes) {
  detail::ByteReader r(bytes);
  if (!r.has(20)) throw FormatError("truncated summary header");
  auto magic = r.take(4);
  if (std::memcmp(magic.data(), kSummaryMagic, 4) != 0) throw FormatError("bad magic: not a CSM1 summary");
  const auto d = r.get<std::uint32_t>();
  DatasetSummary s;
  s.count = r.get<std::uint64_t>();
  const auto name_len = r.get<std::uint32_t>();
  if (!r.has(name_len)) throw FormatError("truncated summary name");
  auto name = r.take(name_len);
  s.name.assign(reinterpret_cast<const char*>(name.data()), name.size());
  const std::uint64_t values = std::uint64_t{d} + std::uint64_t{d} * d;
  if (r.remaining() != values * sizeof(double))
    throw FormatError("summary payload is " + std::to_string(r.remaining()) + " bytes, expected " +
                      std::to_string(values * sizeof(double)));
  s.mean.resize(d);
  s.cov.resize(d, d);
  for (Eigen::Index i = 0; i < s.mean.size(); ++i) s.mean(i) = r.get<double>();
  for (Eigen::Index row = 0; row < s.cov.rows(); ++row)
    for (Eigen::Index c = 0; c < s.cov.cols(); ++c) s.cov(row, c) = r.get<double>();
  if (!s.mean.allFinite() || !s.cov.allFinite()) throw FormatError("summary contains NaN/Inf");
  return s;
}

std::string summary_to_json(const DatasetSummary& s, const std::map<std::string, std::string>& provenance) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["dim"] = s.dim();
  j["count"] = s.count;
  j["mean"] = std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size());
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < s.cov.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(s.cov.cols()));
    for (Eigen::Index c = 0; c < s.cov.cols(); ++c) row[static_cast<std::size_t>(c)] = s.cov(r, c);
    rows.push_back(std::move(row));
  }
  j["cov"] = std::move(rows);
  j["trace"] = s.cov.trace();
  if (!provenance.empty()) j["provenance"] = provenance;
  return j.dump(2) + "\n";
}

void write_summary(const DatasetSummary& s, const std::filesystem::path& path,
                   const std::map<std::string, std::string>& provenance) {
  shardio::write_file(path, encode_summary(s));
  auto mirror = path;
  mirror += ".json";
  shardio::write_text(mirror, summary_to_json(s, provenance));
}

DatasetSummary read_summary(const std::filesystem::path& path) {
  return decode_summary(shardio::read_file(path));
}

}  // namespace csikit::stats
