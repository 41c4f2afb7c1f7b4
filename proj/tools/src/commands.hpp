#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csikit/synthetic.hpp"

namespace csikit::cli {

struct SummarizeOptions {
  std::string shard;
  std::string output;
  std::string nodes = "all";
  std::uint64_t seed = 0;
  std::string name;
  bool population = false;
};

struct DistanceOptions {
  std::string first;
  std::string second;
  std::string output;
  double ridge = 0.0;
};

struct RankOptions {
  std::vector<std::string> upstream;
  std::vector<std::string> downstream;
  std::string output;
  std::string matrix;
  std::optional<std::uint64_t> epochs;
  std::optional<std::uint64_t> samples;
  double ridge = 0.0;
};

struct ErankOptions {
  std::string shard;
  std::vector<std::size_t> ks = {5000, 10000, 15000};
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  std::string output;
  std::string summary;
};

struct SampleOptions {
  std::string shard;
  std::string output;
  std::size_t total = 10000;
  std::uint64_t seed = 0;
  std::string strategy = "balanced";
  std::string coverage;
};

struct BudgetOptions {
  std::uint64_t epochs = 0;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> reference_epochs;
  std::optional<std::uint64_t> reference_samples;
  std::string output;
};

struct GenSyntheticOptions {
  synthetic::SyntheticSpec spec;
  std::string class_sizes = "even";
  std::string output;
};

int cmd_summarize(const SummarizeOptions& o, std::ostream& out);
int cmd_distance(const DistanceOptions& o, std::ostream& out);
int cmd_rank(const RankOptions& o, std::ostream& out);
int cmd_erank(const ErankOptions& o, std::ostream& out);
int cmd_sample(const SampleOptions& o, std::ostream& out);
int cmd_budget(const BudgetOptions& o, std::ostream& out);
int cmd_gen_synthetic(const GenSyntheticOptions& o, std::ostream& out);

}  // namespace csikit::cli
