#include "csikit/select.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "csikit/error.hpp"

namespace csikit::select {
namespace {

nlohmann::ordered_json report_json(const AlignmentReport& report) {
  nlohmann::ordered_json j;
  j["downstream"] = report.downstream;
  auto ranked = nlohmann::ordered_json::array();
  for (const auto& r : report.ranked) {
    ranked.push_back({{"name", r.name},
                      {"value", r.csi.value},
                      {"mean_term", r.csi.mean_term},
                      {"trace_term", r.csi.trace_term}});
  }
  j["ranked"] = std::move(ranked);
  j["selected"] = report.selected;
  if (report.budget) {
    j["budget"] = {{"epochs", report.budget->epochs},
                   {"samples", report.budget->samples},
                   {"budget", report.budget->budget}};
  } else {
    j["budget"] = nullptr;
  }
  return j;
}

}  // namespace

BudgetSpec make_budget(std::uint64_t epochs, std::uint64_t samples) {
  if (epochs < 1 || samples < 1) throw ValidationError("make_budget: epochs and samples must be >= 1");
  if (samples > std::numeric_limits<std::uint64_t>::max() / epochs)
    throw ValidationError("make_budget: epochs × samples overflows 64 bits");
  return {epochs, samples, epochs * samples};
}

std::uint64_t plan_samples(std::uint64_t budget, std::uint64_t epochs) {
  if (epochs < 1 || budget < 1) throw ValidationError("plan_samples: budget and epochs must be >= 1");
  if (budget % epochs != 0)
    throw ValidationError("plan_samples: " + std::to_string(epochs) + " epochs do not divide budget " +
                          std::to_string(budget));
  return budget / epochs;
}

double budget_ratio(const BudgetSpec& a, const BudgetSpec& b) {
  if (b.budget == 0) throw ValidationError("budget_ratio: reference budget is zero");
  return static_cast<double>(a.budget) / static_cast<double>(b.budget);
}

AlignmentReport rank_upstreams(std::span<const stats::DatasetSummary> upstream,
                               const stats::DatasetSummary& downstream, const frechet::CsiOptions& options) {
  if (upstream.empty()) throw ValidationError("rank_upstreams: no upstream datasets given");
  AlignmentReport report;
  report.downstream = downstream.name;
  report.ranked.reserve(upstream.size());
  for (const auto& u : upstream) report.ranked.push_back({u.name, frechet::csi(u, downstream, options)});
  std::ranges::stable_sort(report.ranked, {}, [](const RankedUpstream& r) { return r.csi.value; });
  report.selected = report.ranked.front().name;
  return report;
}

std::string report_to_json(const AlignmentReport& report) { return report_json(report).dump(2) + "\n"; }

std::string reports_to_json(std::span<const AlignmentReport> reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr.dump(2) + "\n";
}

std::string report_to_table(const AlignmentReport& report) {
  std::size_t width = 8;
  for (const auto& r : report.ranked) width = std::max(width, r.name.size());
  std::string out = "downstream: " + report.downstream + "\n";
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-4s  %-*s  %14s  %14s  %14s\n", "rank", static_cast<int>(width), "upstream",
                "csi", "mean_term", "trace_term");
  out += buf;
  for (std::size_t i = 0; i < report.ranked.size(); ++i) {
    const auto& r = report.ranked[i];
    std::snprintf(buf, sizeof buf, "%-4zu  %-*s  %14.6g  %14.6g  %14.6g\n", i + 1, static_cast<int>(width),
                  r.name.c_str(), r.csi.value, r.csi.mean_term, r.csi.trace_term);
    out += buf;
  }
  out += "selected: " + report.selected + "\n";
  if (report.budget) {
    out += "budget: C = " + std::to_string(report.budget->budget) + " (E = " + std::to_string(report.budget->epochs) +
           ", N = " + std::to_string(report.budget->samples) + ")\n";
  }
  return out;
}

}  // namespace csikit::select
