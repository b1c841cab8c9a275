#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "rmt/eigen.hpp"
#include "rmt/ensembles.hpp"

namespace {

Eigen::MatrixXd to_eigen(const rmt::SymmetricMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(i, j);
  return m;
}

class DenseVersusEigen : public ::testing::TestWithParam<std::size_t> {};

TEST_P(DenseVersusEigen, EigenvaluesMatch) {
  const std::size_t n = GetParam();
  rmt::RngStream rng(11, n);
  const auto a = rmt::sample_goe(n, 1.0, rng);
  const auto s = rmt::eigvalsh(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(a), Eigen::EigenvaluesOnly);
  ASSERT_EQ(s.size(), n);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s.values[i], oracle.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-11);
}

TEST_P(DenseVersusEigen, EigenvectorsDiagonalize) {
  const std::size_t n = GetParam();
  rmt::RngStream rng(12, n);
  const auto a = rmt::sample_goe(n, 1.0, rng);
  const auto eig = rmt::eigh_dense(a, true);
  ASSERT_TRUE(eig.vectors.has_value());
  const auto& v = *eig.vectors;
  Eigen::MatrixXd vm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v(i, j);
  const Eigen::MatrixXd ortho = vm.transpose() * vm - Eigen::MatrixXd::Identity(n, n);
  EXPECT_LT(ortho.cwiseAbs().maxCoeff(), 1e-12);
  Eigen::VectorXd lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda(static_cast<Eigen::Index>(i)) = eig.spectrum.values[i];
  const Eigen::MatrixXd resid = to_eigen(a) * vm - vm * lambda.asDiagonal();
  EXPECT_LT(resid.cwiseAbs().maxCoeff(), 1e-11);
}

INSTANTIATE_TEST_SUITE_P(Sizes, DenseVersusEigen, ::testing::Values(1, 2, 3, 5, 17, 64, 200));

TEST(DenseEigen, DiagonalAndIdentity) {
  const std::vector<double> d{3.0, -1.0, 2.0, 0.0};
  const auto s = rmt::eigvalsh(rmt::SymmetricMatrix::diagonal(d));
  EXPECT_EQ(s.values, (std::vector<double>{-1.0, 0.0, 2.0, 3.0}));
  const auto id = rmt::eigvalsh(rmt::SymmetricMatrix::identity(6));
  for (double v : id.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

// A low-rank Gram matrix has a large block of numerically zero eigenvalues,
// where a purely relative deflation test never splits the QL iteration.
TEST(DenseEigen, RankDeficientGramMatrix) {
  rmt::RngStream rng(3, 0);
  const auto a = rmt::sample_wishart(300, 40, 1.0, rng);
  const auto s = rmt::eigvalsh(a);
  const auto zeros = std::count_if(s.values.begin(), s.values.end(), [](double v) { return std::abs(v) <= 1e-8; });
  EXPECT_EQ(zeros, 260);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(a), Eigen::EigenvaluesOnly);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s.values[i], oracle.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-11);
}

TEST(DenseEigen, RejectsNonFiniteEntries) {
  std::vector<double> e(4, 0.0);
  e[0] = std::nan("");
  EXPECT_THROW(rmt::eigvalsh(rmt::SymmetricMatrix::from_entries(2, e)), rmt::RejectedInput);
}

TEST(Tridiagonal, GolubWelschWeightsMatchEigenvectors) {
  rmt::TridiagonalMatrix t;
  t.alpha = {2.0, -1.0, 0.5, 3.0, 1.0};
  t.beta = {0.7, 1.2, 0.3, 0.9};
  const auto r = rmt::eigh_tridiagonal(t);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) m(i, i) = t.alpha[static_cast<std::size_t>(i)];
  for (int i = 0; i < 4; ++i) m(i, i + 1) = m(i + 1, i) = t.beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(m);
  double total = 0.0;
  for (int j = 0; j < 5; ++j) {
    EXPECT_NEAR(r.nodes[static_cast<std::size_t>(j)], oracle.eigenvalues()(j), 1e-13);
    const double w = r.first_components[static_cast<std::size_t>(j)];
    EXPECT_NEAR(w * w, oracle.eigenvectors()(0, j) * oracle.eigenvectors()(0, j), 1e-13);
    total += w * w;
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Tridiagonal, RejectsNonPositiveBeta) {
  rmt::TridiagonalMatrix t;
  t.alpha = {1.0, 2.0};
  t.beta = {0.0};
  EXPECT_THROW(rmt::eigh_tridiagonal(t), rmt::RejectedInput);
}

std::vector<std::complex<double>> eigen_general(const rmt::DenseMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return ev;
}

// Matches each eigenvalue to its nearest unused oracle eigenvalue.
double max_matching_error(std::vector<std::complex<double>> ours, std::vector<std::complex<double>> ref) {
  double worst = 0.0;
  for (const auto& z : ours) {
    auto best = std::min_element(ref.begin(), ref.end(),
                                 [&](const auto& a, const auto& b) { return std::abs(a - z) < std::abs(b - z); });
    worst = std::max(worst, std::abs(*best - z));
    ref.erase(best);
  }
  return worst;
}

class GeneralVersusEigen : public ::testing::TestWithParam<std::size_t> {};

TEST_P(GeneralVersusEigen, GinibreProductEigenvalues) {
  const std::size_t n = GetParam();
  rmt::RngStream rng(5, n);
  const auto g = rmt::sample_ginibre_product({n, n, n}, {1.0, 1.0}, rng);
  ASSERT_EQ(g.eigenvalues.size(), n);
  EXPECT_LT(max_matching_error(g.eigenvalues, eigen_general(g.product)), 1e-10);
  for (std::size_t i = 1; i < n; ++i) EXPECT_GE(std::abs(g.eigenvalues[i - 1]), std::abs(g.eigenvalues[i]));
}

INSTANTIATE_TEST_SUITE_P(Sizes, GeneralVersusEigen, ::testing::Values(1, 2, 3, 10, 60, 150));

TEST(GeneralEigen, RotationHasConjugatePair) {
  rmt::DenseMatrix r(2, 2, {0.0, -1.0, 1.0, 0.0});
  const auto ev = rmt::eigvals_general(r);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(std::abs(ev[0]), 1.0, 1e-15);
  EXPECT_NEAR(ev[0].real(), 0.0, 1e-15);
  EXPECT_NEAR(ev[0].imag(), -ev[1].imag(), 1e-15);
}

}  // namespace
