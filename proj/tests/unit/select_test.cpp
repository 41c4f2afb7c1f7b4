#include "csikit/select.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "csikit/error.hpp"
#include "oracles.hpp"

namespace csikit::select {
namespace {

using testing::make_summary;

stats::DatasetSummary gaussian(const std::string& name, double offset, Eigen::Index d = 3) {
  Vector var(d);
  for (Eigen::Index i = 0; i < d; ++i) var(i) = 1.0 + 0.5 * static_cast<double>(i);
  return make_summary(name, Vector::Constant(d, offset), var.asDiagonal());
}

TEST(Rank, AscendingMeanOffsets) {
  const auto down = gaussian("D", 0.0);
  const std::vector<stats::DatasetSummary> up{gaussian("C", 3.0), gaussian("A", 0.5), gaussian("B", 1.5)};
  const auto r = rank_upstreams(up, down);
  ASSERT_EQ(r.ranked.size(), 3u);
  EXPECT_EQ(r.ranked[0].name, "A");
  EXPECT_EQ(r.ranked[1].name, "B");
  EXPECT_EQ(r.ranked[2].name, "C");
  EXPECT_EQ(r.selected, "A");
  EXPECT_EQ(r.downstream, "D");
  // Same covariances: CSI is the closed form d·offset².
  EXPECT_NEAR(r.ranked[0].csi.value, 3 * 0.25, 1e-10);
  EXPECT_NEAR(r.ranked[2].csi.value, 3 * 9.0, 1e-10);
}

TEST(Rank, SingleUpstream) {
  const std::vector<stats::DatasetSummary> up{gaussian("only", 2.0)};
  EXPECT_EQ(rank_upstreams(up, gaussian("D", 0.0)).selected, "only");
}

TEST(Rank, TiesKeepInputOrder) {
  const std::vector<stats::DatasetSummary> up{gaussian("first", 1.0), gaussian("second", 1.0)};
  const auto r = rank_upstreams(up, gaussian("D", 0.0));
  EXPECT_EQ(r.ranked[0].name, "first");
  EXPECT_EQ(r.selected, "first");
}

TEST(Rank, Errors) {
  EXPECT_THROW(rank_upstreams({}, gaussian("D", 0.0)), ValidationError);
  const std::vector<stats::DatasetSummary> up{gaussian("x", 1.0, 2)};
  EXPECT_THROW(rank_upstreams(up, gaussian("D", 0.0, 3)), DimensionMismatch);
}

TEST(Rank, PermutationInvariantSelection) {
  std::mt19937_64 gen(12);
  std::vector<stats::DatasetSummary> up;
  for (int i = 0; i < 6; ++i) up.push_back(testing::random_summary(gen, 4, "u" + std::to_string(i)));
  const auto down = testing::random_summary(gen, 4, "d");
  const auto base = rank_upstreams(up, down);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(up.begin(), up.end(), gen);
    const auto r = rank_upstreams(up, down);
    EXPECT_EQ(r.selected, base.selected);
    for (std::size_t i = 0; i < r.ranked.size(); ++i) EXPECT_EQ(r.ranked[i].name, base.ranked[i].name);
  }
}

TEST(Rank, MovingAwayNeverImprovesRank) {
  std::mt19937_64 gen(13);
  std::vector<stats::DatasetSummary> up;
  for (int i = 0; i < 5; ++i) up.push_back(testing::random_summary(gen, 3, "u" + std::to_string(i)));
  const auto down = testing::random_summary(gen, 3, "d");
  auto position = [](const AlignmentReport& r, const std::string& name) {
    for (std::size_t i = 0; i < r.ranked.size(); ++i)
      if (r.ranked[i].name == name) return i;
    return r.ranked.size();
  };
  std::size_t previous = position(rank_upstreams(up, down), "u2");
  const Vector direction = (up[2].mean - down.mean).normalized();
  for (int step = 1; step <= 8; ++step) {
    up[2].mean += 0.5 * direction;
    const auto now = position(rank_upstreams(up, down), "u2");
    EXPECT_GE(now, previous);
    previous = now;
  }
}

TEST(Budget, ReferenceConfigurations) {
  EXPECT_EQ(make_budget(5, 2'000'000).budget, 10'000'000u);
  EXPECT_EQ(make_budget(2, 120'000'000).budget, 240'000'000u);
  EXPECT_EQ(make_budget(1, 1).budget, 1u);
  EXPECT_EQ(plan_samples(10'000'000, 5), 2'000'000u);
  EXPECT_EQ(plan_samples(10'000'000, 10), 1'000'000u);
  EXPECT_THROW(plan_samples(10'000'000, 3), ValidationError);
}

TEST(Budget, Ratios) {
  EXPECT_EQ(budget_ratio(make_budget(5, 2'000'000), make_budget(2, 120'000'000)), 1.0 / 24.0);
  EXPECT_NEAR(budget_ratio(make_budget(5, 2'000'000), make_budget(2, 120'000'000)), 0.041667, 1e-6);
  EXPECT_EQ(budget_ratio(make_budget(3, 7), make_budget(7, 3)), 1.0);
  EXPECT_EQ(budget_ratio(make_budget(5, 500'000), make_budget(5, 2'000'000)), 0.25);
  EXPECT_THROW(budget_ratio(make_budget(1, 1), BudgetSpec{}), ValidationError);
}

TEST(Budget, InvalidInputs) {
  EXPECT_THROW(make_budget(0, 5), ValidationError);
  EXPECT_THROW(make_budget(5, 0), ValidationError);
  EXPECT_THROW(make_budget(1ull << 40, 1ull << 40), ValidationError);
  EXPECT_THROW(plan_samples(10, 0), ValidationError);
}

TEST(Budget, PlanRoundTrip) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::uint64_t> e(1, 100), n(1, 10'000'000);
  for (int i = 0; i < 200; ++i) {
    const auto epochs = e(gen), samples = n(gen);
    ASSERT_EQ(plan_samples(make_budget(epochs, samples).budget, epochs), samples);
  }
}

TEST(Report, JsonSchema) {
  const std::vector<stats::DatasetSummary> up{gaussian("OC20", 2.0), gaussian("ANI-1x", 0.1)};
  auto r = rank_upstreams(up, gaussian("rMD17", 0.0));
  r.budget = make_budget(5, 2'000'000);
  const auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j.at("downstream"), "rMD17");
  EXPECT_EQ(j.at("selected"), "ANI-1x");
  ASSERT_EQ(j.at("ranked").size(), 2u);
  EXPECT_EQ(j.at("ranked")[0].at("name"), "ANI-1x");
  for (const char* key : {"value", "mean_term", "trace_term"}) EXPECT_TRUE(j.at("ranked")[1].contains(key));
  EXPECT_EQ(j.at("budget").at("budget"), 10'000'000);
  EXPECT_EQ(j.at("budget").at("epochs"), 5);
  EXPECT_EQ(j.at("budget").at("samples"), 2'000'000);
  const auto table = report_to_table(r);
  EXPECT_NE(table.find("selected: ANI-1x"), std::string::npos);
  EXPECT_NE(table.find("C = 10000000"), std::string::npos);
}

}  // namespace
}  // namespace csikit::select
