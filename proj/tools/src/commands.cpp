#include "commands.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "csikit/error.hpp"
#include "csikit/frechet.hpp"
#include "csikit/sampling.hpp"
#include "csikit/select.hpp"
#include "csikit/shardio.hpp"
#include "csikit/spectral.hpp"
#include "csikit/stats.hpp"

namespace csikit::cli {
namespace {

namespace fs = std::filesystem;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

/// Accepts either a CSM1 summary or a CSI1 shard (summarized over all nodes).
stats::DatasetSummary load_summary(const std::string& path) {
  const auto bytes = shardio::read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), shardio::kShardMagic, 4) == 0)
    return stats::summarize_shard(shardio::read_shard(path));
  return stats::decode_summary(bytes);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    shardio::write_text(path, text);
  }
}

}  // namespace

int cmd_summarize(const SummarizeOptions& o, std::ostream& out) {
  auto shard = shardio::read_shard(o.shard);
  if (!o.name.empty()) shard.name = o.name;
  const auto policy = o.nodes == "all" ? stats::NodePolicy::all_nodes() : stats::NodePolicy::one_per_graph(o.seed);
  const auto denominator = o.population ? stats::Denominator::kPopulation : stats::Denominator::kSample;
  const auto summary = stats::summarize_shard(shard, policy, denominator);
  stats::write_summary(summary, o.output,
                       {{"source", fs::path(o.shard).filename().string()},
                        {"nodes", o.nodes},
                        {"seed", std::to_string(o.seed)},
                        {"denominator", o.population ? "population" : "sample"}});
  out << "summary " << summary.name << ": rows=" << summary.count << " dim=" << summary.dim()
      << " trace=" << fmt("%.6g", summary.cov.trace()) << "\n";
  return 0;
}

int cmd_distance(const DistanceOptions& o, std::ostream& out) {
  const auto x = load_summary(o.first);
  const auto y = load_summary(o.second);
  const auto v = frechet::csi(x, y, {o.ridge});
  out << "csi(" << x.name << ", " << y.name << ") = " << fmt("%.10g", v.value) << "\n"
      << "  mean_term  = " << fmt("%.10g", v.mean_term) << "\n"
      << "  trace_term = " << fmt("%.10g", v.trace_term) << "\n";
  if (v.clamped_eigenvalues > 0) out << "  clamped eigenvalues: " << v.clamped_eigenvalues << "\n";
  if (!o.output.empty()) {
    nlohmann::ordered_json j;
    j["first"] = x.name;
    j["second"] = y.name;
    j["value"] = v.value;
    j["mean_term"] = v.mean_term;
    j["trace_term"] = v.trace_term;
    j["clamped_eigenvalues"] = v.clamped_eigenvalues;
    j["ridge"] = o.ridge;
    shardio::write_text(o.output, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_rank(const RankOptions& o, std::ostream& out) {
  if (o.epochs.has_value() != o.samples.has_value())
    throw ValidationError("rank: --epochs and --samples must be given together");
  std::optional<select::BudgetSpec> budget;
  if (o.epochs) budget = select::make_budget(*o.epochs, *o.samples);

  std::vector<stats::DatasetSummary> upstream;
  for (const auto& p : o.upstream) upstream.push_back(load_summary(p));
  std::vector<stats::DatasetSummary> downstream;
  for (const auto& p : o.downstream) downstream.push_back(load_summary(p));

  const frechet::CsiOptions options{o.ridge};
  std::vector<select::AlignmentReport> reports;
  for (const auto& d : downstream) {
    auto report = select::rank_upstreams(upstream, d, options);
    report.budget = budget;
    out << select::report_to_table(report);
    reports.push_back(std::move(report));
  }

  if (!o.output.empty()) {
    shardio::write_text(o.output, reports.size() == 1 ? select::report_to_json(reports.front())
                                                      : select::reports_to_json(reports));
  }
  if (downstream.size() > 1 || !o.matrix.empty()) {
    std::string matrix_path = o.matrix;
    if (matrix_path.empty() && !o.output.empty()) matrix_path = o.output + ".matrix.csv";
    const auto csv = frechet::to_csv(frechet::csi_matrix(upstream, downstream, options));
    if (matrix_path.empty()) {
      out << csv;
    } else {
      shardio::write_text(matrix_path, csv);
    }
  }
  return 0;
}

int cmd_erank(const ErankOptions& o, std::ostream& out) {
  const auto shard = shardio::read_shard(o.shard);
  const auto study = spectral::paired_erank_study(shard, o.ks, o.repeats, o.seed);
  emit(o.output, spectral::study_to_csv(study), out);
  if (!o.summary.empty()) shardio::write_text(o.summary, spectral::study_summary_to_csv(study));
  if (!o.output.empty() && o.output != "-") {
    for (const auto& p : study) {
      for (const auto* r : {&p.node, &p.graph}) {
        out << "k=" << p.k << " " << spectral::to_string(r->level) << ": mean=" << fmt("%.6g", r->mean)
            << " std=" << fmt("%.6g", r->std) << "\n";
      }
    }
  }
  return 0;
}

int cmd_sample(const SampleOptions& o, std::ostream& out) {
  const auto shard = shardio::read_shard(o.shard);
  const auto index = sampling::build_class_index(shard);
  auto sample = o.strategy == "balanced" ? sampling::sample_balanced(shard, index, o.total, o.seed)
                                         : sampling::sample_uniform(shard, o.total, o.seed);
  sample.provenance = {{"source", fs::path(o.shard).filename().string()},
                       {"strategy", o.strategy},
                       {"total", std::to_string(o.total)},
                       {"seed", std::to_string(o.seed)}};
  shardio::write_shard(sample, o.output);
  const auto coverage = sampling::coverage_report(index, sample);
  if (!o.coverage.empty()) shardio::write_text(o.coverage, sampling::coverage_to_csv(coverage, shard.class_labels));
  out << "sampled " << sample.graphs.size() << " of " << shard.graphs.size() << " graphs (" << o.strategy
      << ", seed " << o.seed << "); classes covered " << sampling::covered_classes(coverage) << "/"
      << index.class_count() << "\n";
  return 0;
}

int cmd_budget(const BudgetOptions& o, std::ostream& out) {
  if (o.samples.has_value() == o.budget.has_value())
    throw ValidationError("budget: give exactly one of --samples or --budget");
  if (o.reference_epochs.has_value() != o.reference_samples.has_value())
    throw ValidationError("budget: --reference-epochs and --reference-samples must be given together");

  const std::uint64_t samples = o.samples ? *o.samples : select::plan_samples(*o.budget, o.epochs);
  const auto spec = select::make_budget(o.epochs, samples);
  nlohmann::ordered_json j;
  j["epochs"] = spec.epochs;
  j["samples"] = spec.samples;
  j["budget"] = spec.budget;
  out << "C = E x N = " << spec.epochs << " x " << spec.samples << " = " << spec.budget << "\n";
  if (o.reference_epochs) {
    const auto ref = select::make_budget(*o.reference_epochs, *o.reference_samples);
    const double ratio = select::budget_ratio(spec, ref);
    j["reference"] = {{"epochs", ref.epochs}, {"samples", ref.samples}, {"budget", ref.budget}};
    j["ratio"] = ratio;
    out << "ratio to reference C = " << ref.budget << ": " << fmt("%.6g", ratio) << " (1/"
        << fmt("%.6g", 1.0 / ratio) << ")\n";
  }
  if (!o.output.empty()) shardio::write_text(o.output, j.dump(2) + "\n");
  return 0;
}

int cmd_gen_synthetic(const GenSyntheticOptions& o, std::ostream& out) {
  auto spec = o.spec;
  spec.class_sizes = o.class_sizes == "zipf" ? synthetic::ClassSizes::kZipf : synthetic::ClassSizes::kEven;
  auto shard = synthetic::generate(spec);
  shard.provenance["class_sizes"] = o.class_sizes;
  shard.provenance["pooled_subspace"] = std::to_string(spec.pooled_subspace);
  shardio::write_shard(shard, o.output);
  out << "wrote " << o.output << ": " << shard.graphs.size() << " graphs, " << shard.total_nodes() << " nodes, dim "
      << shard.dim << ", seed " << spec.seed << "\n";
  return 0;
}

}  // namespace csikit::cli
