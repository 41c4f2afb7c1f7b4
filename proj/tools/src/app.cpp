#include "csikit_cli/app.hpp"

#include <array>
#include <memory>
#include <string_view>
#include <variant>

#include <CLI11.hpp>

#include "commands.hpp"
#include "csikit/error.hpp"
#include "json_config.hpp"

namespace csikit::cli {
namespace {

using Command = std::variant<std::monostate, SummarizeOptions, DistanceOptions, RankOptions, ErankOptions,
                             SampleOptions, BudgetOptions, GenSyntheticOptions>;

constexpr std::array<const char*, 7> kCommands = {"summarize", "distance", "rank", "erank",
                                                  "sample", "budget", "gen-synthetic"};

// Name of the subcommand on the command line, used to scope config keys.
std::string find_command(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    for (const char* c : kCommands)
      if (std::string_view(argv[i]) == c) return c;
  }
  return {};
}

// Subcommands see `--config` through fallthrough to the parent app.
void add_config(CLI::App* sub) { sub->fallthrough(); }

int dispatch(const Command& cmd, std::ostream& out) {
  return std::visit(
      [&](const auto& o) -> int {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, SummarizeOptions>) return cmd_summarize(o, out);
        else if constexpr (std::is_same_v<T, DistanceOptions>) return cmd_distance(o, out);
        else if constexpr (std::is_same_v<T, RankOptions>) return cmd_rank(o, out);
        else if constexpr (std::is_same_v<T, ErankOptions>) return cmd_erank(o, out);
        else if constexpr (std::is_same_v<T, SampleOptions>) return cmd_sample(o, out);
        else if constexpr (std::is_same_v<T, BudgetOptions>) return cmd_budget(o, out);
        else if constexpr (std::is_same_v<T, GenSyntheticOptions>) return cmd_gen_synthetic(o, out);
        else return kExitUsage;
      },
      cmd);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"csikit: dataset alignment (CSI), effective rank, class-balanced sampling and budget planning"};
  app.name("csikit");
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file with option values for the subcommand (flags win)");
  app.config_formatter(std::make_shared<JsonConfig>(find_command(argc, argv)));
  app.allow_config_extras(CLI::config_extras_mode::error);

  SummarizeOptions summarize;
  DistanceOptions distance;
  RankOptions rank;
  ErankOptions erank;
  SampleOptions sample;
  BudgetOptions budget;
  GenSyntheticOptions gen;
  std::uint64_t ref_epochs = 0, ref_samples = 0, epochs = 0, samples = 0, total_budget = 0;

  auto* s = app.add_subcommand("summarize", "Mean and covariance of a shard's node features");
  s->add_option("shard", summarize.shard, "Input CSI1 shard")->required();
  s->add_option("-o,--output", summarize.output, "Output CSM1 summary (JSON mirror at <output>.json)")->required();
  s->add_option("--nodes", summarize.nodes, "Node policy")
      ->check(CLI::IsMember({"all", "one-per-graph"}))
      ->capture_default_str();
  s->add_option("--seed", summarize.seed, "Seed for --nodes one-per-graph")->capture_default_str();
  s->add_option("--name", summarize.name, "Dataset name (default: manifest name)");
  s->add_flag("--population", summarize.population, "Divide by n instead of n-1");
  add_config(s);

  auto* d = app.add_subcommand("distance", "CSI between two summaries (or shards)");
  d->add_option("first", distance.first, "First summary or shard")->required();
  d->add_option("second", distance.second, "Second summary or shard")->required();
  d->add_option("-o,--output", distance.output, "Write the decomposition as JSON");
  d->add_option("--ridge", distance.ridge, "Add ridge*I to both covariances")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_config(d);

  auto* r = app.add_subcommand("rank", "Rank upstream datasets by CSI against downstream datasets");
  r->add_option("upstream", rank.upstream, "Upstream summaries or shards")->required();
  r->add_option("-d,--downstream", rank.downstream, "Downstream summary or shard (repeatable)")
      ->required()
      ->allow_extra_args(false);
  r->add_option("-o,--output", rank.output, "AlignmentReport JSON output");
  r->add_option("--matrix", rank.matrix, "CSI matrix CSV output (upstream x downstream)");
  auto* r_epochs = r->add_option("--epochs", epochs, "Budget annotation: epochs E")->check(CLI::PositiveNumber);
  auto* r_samples = r->add_option("--samples", samples, "Budget annotation: unique samples N")->check(CLI::PositiveNumber);
  r_epochs->needs(r_samples);
  r_samples->needs(r_epochs);
  r->add_option("--ridge", rank.ridge, "Add ridge*I to every covariance")->check(CLI::NonNegativeNumber);
  add_config(r);

  auto* e = app.add_subcommand("erank", "Paired node/graph effective-rank bootstrap study");
  e->add_option("shard", erank.shard, "Input CSI1 shard")->required();
  e->add_option("--ks", erank.ks, "Graphs per repeat")->delimiter(',')->capture_default_str();
  e->add_option("--repeats", erank.repeats, "Repeats per (k, level)")->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--seed", erank.seed, "Master seed")->capture_default_str();
  e->add_option("-o,--output", erank.output, "Per-repeat CSV (default: stdout)");
  e->add_option("--summary", erank.summary, "Summary CSV (k, level, mean, std)");
  add_config(e);

  auto* sm = app.add_subcommand("sample", "Class-balanced or uniform graph subsample");
  sm->add_option("shard", sample.shard, "Input CSI1 shard")->required();
  sm->add_option("-o,--output", sample.output, "Output CSI1 shard")->required();
  sm->add_option("--total", sample.total, "Graphs to keep")->check(CLI::PositiveNumber)->capture_default_str();
  sm->add_option("--seed", sample.seed, "Master seed")->capture_default_str();
  sm->add_option("--strategy", sample.strategy, "Sampling strategy")
      ->check(CLI::IsMember({"balanced", "uniform"}))
      ->capture_default_str();
  sm->add_option("--coverage", sample.coverage, "Coverage CSV (class_id, label, sampled, original)");
  add_config(sm);

  auto* b = app.add_subcommand("budget", "Computational budget C = E x N");
  b->add_option("--epochs", budget.epochs, "Epochs E")->required()->check(CLI::PositiveNumber);
  auto* b_samples = b->add_option("--samples", samples, "Unique samples N")->check(CLI::PositiveNumber);
  auto* b_budget = b->add_option("--budget", total_budget, "Total budget C (solve for N)")->check(CLI::PositiveNumber);
  b_samples->excludes(b_budget);
  auto* b_re = b->add_option("--reference-epochs", ref_epochs, "Reference budget epochs")->check(CLI::PositiveNumber);
  auto* b_rs = b->add_option("--reference-samples", ref_samples, "Reference budget samples")->check(CLI::PositiveNumber);
  b_re->needs(b_rs);
  b_rs->needs(b_re);
  b->add_option("-o,--output", budget.output, "JSON output");
  add_config(b);

  auto* g = app.add_subcommand("gen-synthetic", "Write a synthetic Gaussian-mixture shard");
  auto& spec = gen.spec;
  g->add_option("-o,--output", gen.output, "Output CSI1 shard")->required();
  g->add_option("--dim", spec.dim, "Feature dimension")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--graphs", spec.graphs, "Number of graphs")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--nodes", spec.nodes, "Nodes per graph")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--nodes-max", spec.nodes_max, "Draw node counts uniformly from [nodes, nodes-max]");
  g->add_option("--classes", spec.classes, "Number of classes")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--class-sizes", gen.class_sizes, "Class size profile")
      ->check(CLI::IsMember({"even", "zipf"}))
      ->capture_default_str();
  g->add_option("--zipf-exponent", spec.zipf_exponent, "Exponent for --class-sizes zipf")->capture_default_str();
  g->add_option("--class-spread", spec.class_spread, "Std of class centers")->capture_default_str();
  g->add_option("--graph-spread", spec.graph_spread, "Std of graph means around class centers")->capture_default_str();
  g->add_option("--node-spread", spec.node_spread, "Std of node rows around graph means")->capture_default_str();
  g->add_option("--shift", spec.shift, "Constant added to every coordinate")->capture_default_str();
  g->add_option("--pooled-subspace", spec.pooled_subspace, "Confine graph means to an r-dim subspace (0 = off)");
  g->add_option("--seed", spec.seed, "Seed")->capture_default_str();
  g->add_option("--name", spec.name, "Dataset name")->capture_default_str();
  add_config(g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::FileError& e) {
    err << "csikit: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Command cmd;
  if (s->parsed()) cmd = summarize;
  if (d->parsed()) cmd = distance;
  if (r->parsed()) {
    if (r_epochs->count() > 0) {
      rank.epochs = epochs;
      rank.samples = samples;
    }
    cmd = rank;
  }
  if (e->parsed()) cmd = erank;
  if (sm->parsed()) cmd = sample;
  if (b->parsed()) {
    if (b_samples->count() > 0) budget.samples = samples;
    if (b_budget->count() > 0) budget.budget = total_budget;
    if (b_re->count() > 0) {
      budget.reference_epochs = ref_epochs;
      budget.reference_samples = ref_samples;
    }
    cmd = budget;
  }
  if (g->parsed()) cmd = gen;

  try {
    return dispatch(cmd, out);
  } catch (const IoError& ex) {
    err << "csikit: " << ex.what() << "\n";
    return kExitIo;
  } catch (const Error& ex) {
    err << "csikit: " << ex.what() << "\n";
    return kExitData;
  } catch (const std::exception& ex) {
    err << "csikit: " << ex.what() << "\n";
    return kExitData;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("csikit");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace csikit::cli
