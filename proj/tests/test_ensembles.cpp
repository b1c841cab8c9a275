#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rmt/eigen.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/rng.hpp"

namespace {

using namespace rmt;

TEST(Rng, SameSeedAndStreamReproduce) {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs_stream |= x != c.normal();
    differs_seed |= x != d.normal();
  }
  EXPECT_TRUE(differs_stream);
  EXPECT_TRUE(differs_seed);
}

TEST(Rng, SweepStreamsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 20; ++i)
    for (std::uint64_t t = 0; t < 20; ++t) seen.insert(RngStream::sweep_stream(i, t));
  EXPECT_EQ(seen.size(), 400u);
}

TEST(Rng, DistributionsHaveTheirMoments) {
  RngStream rng(1, 0);
  const int n = 200000;
  double s1 = 0, s2 = 0, u1 = 0, r1 = 0, r2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    u1 += u;
    const double r = rng.rademacher();
    ASSERT_TRUE(r == 1.0 || r == -1.0);
    r1 += r;
    r2 += r * r;
  }
  // Five standard errors.
  EXPECT_NEAR(s1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(u1 / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(r1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_EQ(r2, n);
}

// Entry variances: sigma^2/P off the diagonal and 2 sigma^2/P on it.
TEST(Goe, EntryScaling) {
  const std::size_t p = 400;
  const double sigma = 1.7;
  RngStream rng(9, 0);
  const auto a = sample_goe(p, sigma, rng);
  double off = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    diag += a(i, i) * a(i, i);
    for (std::size_t j = i + 1; j < p; ++j) off += a(i, j) * a(i, j);
  }
  const double n_off = p * (p - 1) / 2.0;
  EXPECT_NEAR(off / n_off * p, sigma * sigma, 5.0 * sigma * sigma * std::sqrt(2.0 / n_off));
  EXPECT_NEAR(diag / p * p, 2.0 * sigma * sigma, 5.0 * 2.0 * sigma * sigma * std::sqrt(2.0 / p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) ASSERT_EQ(a(i, j), a(j, i));
}

TEST(Wigner, RademacherEntriesTakeTwoValues) {
  RngStream rng(1, 0);
  const auto a = sample_wigner_general(50, 1.0, EntryDistribution::rademacher, rng);
  const double s = 1.0 / std::sqrt(50.0);
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = i + 1; j < 50; ++j) ASSERT_DOUBLE_EQ(std::abs(a(i, j)), s);
}

TEST(Wishart, TraceAndRank) {
  RngStream rng(4, 0);
  const std::size_t p = 120, n = 30;
  const auto a = sample_wishart(p, n, 2.0, rng);
  // E tr(X X^T / N) = P sigma^2; variance 2 P sigma^4 / N.
  EXPECT_NEAR(a.trace(), p * 4.0, 5.0 * std::sqrt(2.0 * p * 16.0 / n));
  const auto s = eigvalsh(a);
  std::size_t zeros = 0;
  for (double v : s.values) zeros += std::abs(v) <= 1e-8;
  EXPECT_EQ(zeros, p - n);
}

TEST(WishartProduct, RankIsTheNarrowestDimension) {
  RngStream rng(8, 0);
  const auto a = sample_wishart_product({100, 40, 70, 25}, 1.0, rng);
  ASSERT_EQ(a.size(), 100u);
  const auto s = eigvalsh(a);
  std::size_t zeros = 0;
  for (double v : s.values) zeros += std::abs(v) <= 1e-8;
  EXPECT_EQ(zeros, 75u);
}

TEST(Percolation, FullKeepIsBitExact) {
  RngStream rng(2, 0);
  const auto a = sample_goe(60, 1.0, rng);
  RngStream mask(2, 1);
  EXPECT_EQ(percolate(a, 60.0, mask), a);
}

TEST(Percolation, KeepFractionMatchesProbability) {
  const std::size_t p = 500;
  RngStream rng(3, 0);
  const auto a = sample_goe(p, 1.0, rng);
  const auto b = percolate(a, 50.0, rng);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      if (b(i, j) != 0.0) {
        ++kept;
        ASSERT_EQ(b(i, j), a(i, j));
      }
    }
  const double n = p * (p + 1) / 2.0, q = 0.1;
  EXPECT_NEAR(kept / n, q, 5.0 * std::sqrt(q * (1 - q) / n));
  EXPECT_THROW(percolate(a, 501.0, rng), RejectedInput);
  EXPECT_THROW(percolate(a, 0.0, rng), RejectedInput);
}

TEST(Spiked, RankOnePerturbationOfTheNoise) {
  const std::size_t p = 200;
  RngStream r1(5, 0), r2(5, 0);
  const auto noise = sample_goe(p, 1.0, r1);
  const auto spiked = sample_spiked_goe(p, 1.0, {4.0}, r2);
  // The difference is beta u u^T: trace beta, Frobenius norm beta.
  double tr = 0.0, fro = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const double d = spiked(i, j) - noise(i, j);
      if (i == j) tr += d;
      fro += d * d;
    }
  EXPECT_NEAR(tr, 4.0, 1e-12);
  EXPECT_NEAR(std::sqrt(fro), 4.0, 1e-12);
  EXPECT_THROW(sample_spiked_goe(p, 1.0, std::vector<double>(21, 1.0), r2), RejectedInput);
}

TEST(Spiked, TwoSpikesAreOrthogonal) {
  const std::size_t p = 100;
  RngStream r1(6, 0), r2(6, 0);
  const auto noise = sample_goe(p, 1.0, r1);
  const auto spiked = sample_spiked_goe(p, 1.0, {3.0, -2.0}, r2);
  std::vector<double> e(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) e[i * p + j] = spiked(i, j) - noise(i, j);
  const auto s = eigvalsh(SymmetricMatrix::from_entries(p, e));
  EXPECT_NEAR(s.values.front(), -2.0, 1e-12);
  EXPECT_NEAR(s.values.back(), 3.0, 1e-12);
  EXPECT_NEAR(std::abs(s.values[p / 2]), 0.0, 1e-12);
}

TEST(Ginibre, SquareProductHasUnitScaleSpectrum) {
  RngStream rng(7, 0);
  const auto g = sample_ginibre_product({300, 300}, {1.0}, rng);
  ASSERT_EQ(g.eigenvalues.size(), 300u);
  double outside = 0.0;
  for (const auto& z : g.eigenvalues) outside += std::abs(z) > 1.1;
  EXPECT_LE(outside / 300.0, 0.02);
  EXPECT_THROW(sample_ginibre_product({10, 12}, {1.0}, rng), RejectedInput);
  EXPECT_NO_THROW(sample_ginibre_product({10, 12, 10}, {1.0, 1.0}, rng, false));
  EXPECT_THROW(sample_ginibre_product({10, 10}, {1.0, 1.0}, rng), RejectedInput);
}

TEST(Spec, JsonRoundTripAndValidation) {
  EnsembleSpec s;
  s.kind = EnsembleKind::percolated_product;
  s.dims = {50, 20, 30};
  s.k = 5.0;
  s.sigma = 0.5;
  const auto t = EnsembleSpec::from_json(s.to_json());
  EXPECT_EQ(t.kind, s.kind);
  EXPECT_EQ(t.dims, s.dims);
  EXPECT_EQ(t.k, s.k);
  EXPECT_EQ(t.sigma, s.sigma);
  EXPECT_EQ(t.to_json(), s.to_json());
  EXPECT_NE(s.to_json().find("\"p\":0.1"), std::string::npos);

  EXPECT_EQ(parse_ensemble_kind("wigner_general"), EnsembleKind::wigner_general);
  EXPECT_THROW(parse_ensemble_kind("gue"), RejectedInput);
  EXPECT_THROW(EnsembleSpec::from_json("[1]"), RejectedInput);
  EXPECT_THROW(EnsembleSpec::from_json("{\"dim\": \"x\"}"), RejectedInput);

  EnsembleSpec bad;
  bad.kind = EnsembleKind::percolated_wigner;
  bad.dim = 10;
  bad.k = 20;
  EXPECT_THROW(bad.validate(), RejectedInput);
  bad.kind = EnsembleKind::ginibre_product;
  bad.dims = {5, 5};
  RngStream rng(0, 0);
  EXPECT_THROW(bad.sample(rng), RejectedInput);
}

TEST(Spec, SampleMatchesDirectSampler) {
  EnsembleSpec s;
  s.kind = EnsembleKind::wishart;
  s.dim = 30;
  s.n = 10;
  RngStream a(1, 2), b(1, 2);
  EXPECT_EQ(s.sample(a), sample_wishart(30, 10, 1.0, b));
}

}  // namespace
