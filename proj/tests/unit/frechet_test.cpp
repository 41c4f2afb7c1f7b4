#include "csikit/frechet.hpp"

#include <gtest/gtest.h>

#include <random>

#include "csikit/error.hpp"
#include "oracles.hpp"

namespace csikit::frechet {
namespace {

using testing::make_summary;
using testing::random_orthogonal;
using testing::random_spd;
using testing::random_summary;

Matrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.asDiagonal();
}

TEST(SqrtPsd, Identity) { EXPECT_TRUE(sqrt_psd(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-15)); }

TEST(SqrtPsd, Diagonal) { EXPECT_TRUE(sqrt_psd(diag({4, 9})).isApprox(diag({2, 3}), 1e-15)); }

TEST(SqrtPsd, SquaresBackOnRandomGram) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix b = testing::random_gaussian(gen, 4, 4);
    const Matrix a = b.transpose() * b;
    const Matrix r = sqrt_psd(a);
    ASSERT_EQ(r, r.transpose());
    ASSERT_LT((r * r - a).norm() / a.norm(), 1e-7);
    for (double ev : testing::jacobi_eigenvalues(r)) ASSERT_GE(ev, -1e-12);
  }
}

TEST(SqrtPsd, ClampsRoundOffNegatives) {
  // Rank-1 matrix whose smallest eigenvalues come out as ±ulp-level noise.
  Vector v(3);
  v << 1.0, 2.0, 3.0;
  const Matrix m = v * v.transpose();
  const Matrix r = sqrt_psd(m);
  EXPECT_LT((r * r - m).norm() / m.norm(), 1e-7);
}

TEST(SqrtPsd, RejectsIndefiniteAndAsymmetric) {
  EXPECT_THROW(sqrt_psd(diag({1, -1})), NotPsdError);
  Matrix asym(2, 2);
  asym << 1, 0.5, 0, 1;
  EXPECT_THROW(sqrt_psd(asym), ValidationError);
}

TEST(Csi, SelfDistanceIsZero) {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_summary(gen, 1 + i % 8);
    EXPECT_LE(csi(x, x).value, 1e-6);
  }
}

TEST(Csi, OneDimensionalMeanShift) {
  const auto x = make_summary("x", Vector::Constant(1, 0.0), Matrix::Constant(1, 1, 1.0));
  const auto y = make_summary("y", Vector::Constant(1, 2.0), Matrix::Constant(1, 1, 1.0));
  const auto v = csi(x, y);
  EXPECT_NEAR(v.value, 4.0, 1e-12);
  EXPECT_NEAR(v.mean_term, 4.0, 1e-15);
  EXPECT_NEAR(v.trace_term, 0.0, 1e-12);
}

TEST(Csi, DiagonalCommutingClosedForm) {
  const auto x = make_summary("x", Eigen::Vector2d(0, 0), diag({1, 4}));
  const auto y = make_summary("y", Eigen::Vector2d(1, 1), diag({4, 1}));
  const auto v = csi(x, y);
  EXPECT_NEAR(v.value, 4.0, 1e-12);
  EXPECT_NEAR(v.mean_term, 2.0, 1e-15);
  EXPECT_NEAR(v.trace_term, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(v.value, v.mean_term + v.trace_term);
}

TEST(Csi, NonCommutingMatchesJacobiOracle) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = random_summary(gen, 4, "x");
    const auto y = random_summary(gen, 4, "y");
    const double want = testing::frechet_reference(x, y);
    ASSERT_LT(testing::rel_error(csi(x, y).value, want), 1e-6) << trial;
  }
}

TEST(Csi, SimultaneouslyDiagonalizablePairs) {
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 2 + trial % 6;
    const Matrix q = random_orthogonal(gen, d);
    Vector lx(d), ly(d), mx(d), my(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      lx(i) = u(gen);
      ly(i) = u(gen);
      mx(i) = u(gen);
      my(i) = u(gen);
    }
    const Matrix cx = q * lx.asDiagonal() * q.transpose();
    const Matrix cy = q * ly.asDiagonal() * q.transpose();
    const auto x = make_summary("x", mx, 0.5 * (cx + cx.transpose()));
    const auto y = make_summary("y", my, 0.5 * (cy + cy.transpose()));
    const double want = (mx - my).squaredNorm() + (lx.cwiseSqrt() - ly.cwiseSqrt()).squaredNorm();
    ASSERT_NEAR(csi(x, y).value, want, 1e-8 * std::max(1.0, want)) << trial;
  }
}

TEST(Csi, SymmetricInArguments) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_summary(gen, 1 + trial % 9);
    const auto y = random_summary(gen, 1 + trial % 9);
    const double a = csi(x, y).value, b = csi(y, x).value;
    ASSERT_LE(std::abs(a - b), 1e-6 * std::max(1.0, a));
  }
}

TEST(Csi, TranslationCovariance) {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_summary(gen, 5);
    auto y = random_summary(gen, 5);
    const auto base = csi(x, y);
    const Vector c = testing::random_gaussian(gen, 5, 1).col(0) * 10.0;
    auto xs = x, ys = y;
    xs.mean += c;
    ys.mean += c;
    ASSERT_NEAR(csi(xs, ys).value, base.value, 1e-9 * std::max(1.0, base.value));
    const auto shifted = csi(xs, y);
    const Vector delta = x.mean - y.mean;
    const double expected = (delta + c).squaredNorm() - delta.squaredNorm();
    ASSERT_NEAR(shifted.mean_term - base.mean_term, expected, 1e-9 * std::max(1.0, std::abs(expected)));
    ASSERT_NEAR(shifted.trace_term, base.trace_term, 1e-12 * std::max(1.0, base.trace_term));
  }
}

TEST(Csi, CoordinatePermutationInvariance) {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 6;
    const auto x = random_summary(gen, d);
    const auto y = random_summary(gen, d);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(d);
    p.setIdentity();
    std::shuffle(p.indices().data(), p.indices().data() + d, gen);
    auto px = x, py = y;
    px.mean = p * x.mean;
    py.mean = p * y.mean;
    px.cov = p * x.cov * p.transpose();
    py.cov = p * y.cov * p.transpose();
    ASSERT_NEAR(csi(px, py).value, csi(x, y).value, 1e-8 * std::max(1.0, csi(x, y).value));
  }
}

TEST(Csi, BoundedBelowByMeanTerm) {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = random_summary(gen, 4);
    const auto y = random_summary(gen, 4);
    const auto v = csi(x, y);
    const double eps = 1e-8 * std::max(1.0, v.mean_term + x.cov.trace() + y.cov.trace());
    ASSERT_GE(v.value, v.mean_term - eps);
    ASSERT_GE(v.trace_term, -eps);
  }
}

TEST(Csi, ErrorsOnDimensionMismatchAndIndefiniteInput) {
  std::mt19937_64 gen(59);
  const auto x = random_summary(gen, 3);
  const auto y = random_summary(gen, 4);
  EXPECT_THROW(csi(x, y), DimensionMismatch);
  auto bad = make_summary("bad", Vector::Zero(2), diag({1, -0.5}));
  auto good = make_summary("good", Vector::Zero(2), diag({1, 1}));
  EXPECT_THROW(csi(bad, good), NotPsdError);
  EXPECT_THROW(csi(good, bad), NotPsdError);
  EXPECT_THROW(csi(good, good, {-1.0}), ValidationError);
}

TEST(Csi, RankDeficientInputsAndRidge) {
  // Rank-1 covariances (count < d situations) still give a finite distance.
  Vector u(3), w(3);
  u << 1, 0, 0;
  w << 0, 1, 0;
  const auto x = make_summary("x", Vector::Zero(3), u * u.transpose());
  const auto y = make_summary("y", Vector::Zero(3), w * w.transpose());
  // Orthogonal supports: tr(Σ_X Σ_Y)^{1/2} = 0, distance = 1 + 1.
  EXPECT_NEAR(csi(x, y).value, 2.0, 1e-12);
  // Ridge λ on both: diagonal commuting case, eigenvalues (1+λ, λ, λ) vs (λ, 1+λ, λ).
  const double lambda = 0.25;
  const double expected = 2.0 * std::pow(std::sqrt(1.0 + lambda) - std::sqrt(lambda), 2);
  EXPECT_NEAR(csi(x, y, {lambda}).value, expected, 1e-12);
}

TEST(CsiMatrix, IdenticalOneByOne) {
  std::mt19937_64 gen(61);
  const std::vector<stats::DatasetSummary> s{random_summary(gen, 3)};
  const auto m = csi_matrix(s, s);
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_LE(m.entries[0][0].value, 1e-6);
}

TEST(CsiMatrix, EntriesMatchStandaloneCsi) {
  std::mt19937_64 gen(67);
  std::vector<stats::DatasetSummary> up, down;
  for (int i = 0; i < 4; ++i) up.push_back(random_summary(gen, 5, "u" + std::to_string(i)));
  for (int j = 0; j < 5; ++j) down.push_back(random_summary(gen, 5, "d" + std::to_string(j)));
  const auto m = csi_matrix(up, down);
  ASSERT_EQ(m.entries.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_EQ(m.entries[i].size(), 5u);
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_TRUE(std::isfinite(m.entries[i][j].value));
      EXPECT_GE(m.entries[i][j].value, 0.0);
      EXPECT_EQ(m.entries[i][j].value, csi(up[i], down[j]).value);
    }
  }
  EXPECT_EQ(m.upstream_names[2], "u2");
  EXPECT_EQ(m.downstream_names[4], "d4");
}

TEST(CsiMatrix, CsvLayout) {
  CsiMatrix m;
  m.upstream_names = {"ANI-1x", "OC20"};
  m.downstream_names = {"rMD17", "QM9, small"};
  m.entries = {{{1234.56789, 0, 0, 0}, {0.000123456789, 0, 0, 0}}, {{2.0, 0, 0, 0}, {1e-9, 0, 0, 0}}};
  EXPECT_EQ(to_csv(m),
            "upstream,rMD17,\"QM9, small\"\n"
            "ANI-1x,1234.57,0.000123457\n"
            "OC20,2,1e-09\n");
}

TEST(CsiMatrix, DimensionMismatchPropagates) {
  std::mt19937_64 gen(71);
  const std::vector<stats::DatasetSummary> up{random_summary(gen, 3)};
  const std::vector<stats::DatasetSummary> down{random_summary(gen, 2)};
  EXPECT_THROW(csi_matrix(up, down), DimensionMismatch);
}

}  // namespace
}  // namespace csikit::frechet
