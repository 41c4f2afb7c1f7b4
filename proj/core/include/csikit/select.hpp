#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csikit/frechet.hpp"
#include "csikit/stats.hpp"

namespace csikit::select {

/// Pretraining budget: total samples processed, budget = epochs × samples.
struct BudgetSpec {
  std::uint64_t epochs = 0;
  std::uint64_t samples = 0;
  std::uint64_t budget = 0;

  bool operator==(const BudgetSpec&) const = default;
};

BudgetSpec make_budget(std::uint64_t epochs, std::uint64_t samples);

/// Unique samples N = budget / epochs. Throws if epochs does not divide budget.
std::uint64_t plan_samples(std::uint64_t budget, std::uint64_t epochs);

double budget_ratio(const BudgetSpec& a, const BudgetSpec& b);

struct RankedUpstream {
  std::string name;
  frechet::CsiValue csi;
};

struct AlignmentReport {
  std::string downstream;
  /// Ascending by csi.value; equal values keep input order.
  std::vector<RankedUpstream> ranked;
  std::string selected;
  std::optional<BudgetSpec> budget;
};

AlignmentReport rank_upstreams(std::span<const stats::DatasetSummary> upstream,
                               const stats::DatasetSummary& downstream, const frechet::CsiOptions& options = {});

std::string report_to_json(const AlignmentReport& report);
std::string reports_to_json(std::span<const AlignmentReport> reports);
/// Fixed-width table for terminal display.
std::string report_to_table(const AlignmentReport& report);

}  // namespace csikit::select
