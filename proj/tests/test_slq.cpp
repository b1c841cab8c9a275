#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "rmt/ensembles.hpp"
#include "rmt/eigen.hpp"
#include "rmt/io.hpp"
#include "rmt/slq.hpp"
#include "temp_dir.hpp"

namespace {

using namespace rmt;

std::vector<double> unit_random(std::size_t n, std::uint64_t stream) {
  RngStream rng(21, stream);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) {
    x = rng.normal();
    s += x * x;
  }
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

TEST(Lanczos, FullRunRecoversADiagonalSpectrum) {
  std::vector<double> d(40);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::sin(static_cast<double>(i)) * 3.0 + 0.01 * i;
  const auto op = diagonal_operator(d);
  const auto lr = lanczos(op, unit_random(40, 0), 40, true);
  ASSERT_EQ(lr.steps_taken, 40u);
  const auto e = eigh_tridiagonal(lr.t, false);
  auto sorted = d;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(e.nodes[i], sorted[i], 1e-10);

  const auto& q = *lr.basis;
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 40; ++k) s += q(i, k) * q(j, k);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-12);
    }
}

TEST(Lanczos, BreaksDownOnAnInvariantSubspace) {
  const auto op = diagonal_operator({1.0, 1.0, 2.0, 2.0, 2.0});
  const auto lr = lanczos(op, unit_random(5, 1), 5);
  EXPECT_TRUE(lr.breakdown);
  EXPECT_EQ(lr.steps_taken, 2u);
}

TEST(Lanczos, RejectsBadArguments) {
  const auto op = diagonal_operator({1.0, 2.0});
  EXPECT_THROW(lanczos(op, std::vector<double>{1.0, 1.0}, 2), RejectedInput);
  EXPECT_THROW(lanczos(op, std::vector<double>{1.0, 0.0}, 3), RejectedInput);
  EXPECT_THROW(lanczos(op, std::vector<double>{1.0}, 1), RejectedInput);
}

// An m-point Gauss rule integrates polynomials of degree 2m - 1 exactly:
// sum_j w_j x_j^k = v^T A^k v.
TEST(Quadrature, GaussRuleIsExactToDegreeTwoMMinusOne) {
  const std::size_t n = 120, m = 6;
  RngStream rng(3, 0);
  const auto a = sample_goe(n, 1.0, rng);
  const auto op = operator_from_matrix(a);
  const auto v = unit_random(n, 2);
  const auto rule = quadrature_from_tridiagonal(lanczos(op, v, m).t);
  ASSERT_EQ(rule.nodes.size(), m);
  std::vector<double> x = v;
  for (int k = 0; k <= static_cast<int>(2 * m - 1); ++k) {
    const double direct = std::inner_product(v.begin(), v.end(), x.begin(), 0.0);
    EXPECT_NEAR(rule.moment(k), direct, 1e-11 * std::pow(2.5, k)) << k;
    x = op(x);
  }
}

TEST(Quadrature, ThreePointDiagonal) {
  const auto op = diagonal_operator({1.0, 2.0, 3.0});
  const double s = 1.0 / std::sqrt(3.0);
  const auto rule = quadrature_from_tridiagonal(lanczos(op, std::vector<double>{s, s, s}, 3).t);
  ASSERT_EQ(rule.nodes.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(rule.nodes[i], static_cast<double>(i + 1), 1e-10);
    EXPECT_NEAR(rule.weights[i], 1.0 / 3.0, 1e-10);
  }
}

TEST(Slq, ProbesAreReproducibleAndNormalized) {
  RngStream rng(4, 0);
  const auto op = operator_from_matrix(sample_goe(300, 1.0, rng));
  SlqOptions opt;
  opt.steps = 30;
  opt.probes = 4;
  opt.seed = 9;
  const auto a = slq_density(op, opt), b = slq_density(op, opt);
  EXPECT_EQ(a.average.nodes, b.average.nodes);
  EXPECT_EQ(a.average.weights, b.average.weights);
  ASSERT_EQ(a.per_probe.size(), 4u);
  for (const auto& r : a.per_probe) EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(std::accumulate(a.average.weights.begin(), a.average.weights.end(), 0.0), 1.0, 1e-12);
  EXPECT_TRUE(std::is_sorted(a.average.nodes.begin(), a.average.nodes.end()));
  opt.seed = 10;
  EXPECT_NE(slq_density(op, opt).average.nodes, a.average.nodes);
  opt.probes = 0;
  EXPECT_THROW(slq_density(op, opt), RejectedInput);
}

TEST(Slq, MomentsTrackTheDenseSpectrum) {
  const std::size_t n = 500;
  RngStream rng(5, 0);
  const auto a = sample_goe(n, 1.0, rng);
  const auto exact = eigvalsh(a);
  SlqOptions opt;
  opt.steps = 60;
  opt.probes = 10;
  const auto r = slq_density(operator_from_matrix(a), opt);
  // Four standard errors of the probe average.
  for (int k : {2, 4, 6}) {
    double s1 = 0.0, s2 = 0.0;
    for (const auto& rule : r.per_probe) {
      const double m = rule.moment(k);
      s1 += m;
      s2 += m * m;
    }
    const double p = static_cast<double>(opt.probes), mean = s1 / p;
    const double se = std::sqrt((s2 / p - mean * mean) * p / (p - 1.0) / p);
    EXPECT_NEAR(r.average.moment(k), mean, 1e-10);
    EXPECT_NEAR(mean, exact.moment(k), 4.0 * se) << k;
  }
}

TEST(Slq, SmoothingIntegratesToOne) {
  QuadratureRule rule{{-1.0, 0.5}, {0.25, 0.75}};
  const auto d = smooth_rule(rule, 0.1, 801);
  double mass = 0.0;
  for (std::size_t i = 1; i < d.x.size(); ++i) mass += 0.5 * (d.density[i] + d.density[i - 1]) * (d.x[i] - d.x[i - 1]);
  EXPECT_NEAR(mass, 1.0, 1e-4);
  EXPECT_THROW(smooth_rule(rule, 0.0, 10), RejectedInput);
}

TEST(Hutchinson, DiagonalTrace) {
  std::vector<double> d(100);
  std::iota(d.begin(), d.end(), 1.0);
  const auto op = diagonal_operator(d);
  // Rademacher probes have v_i^2 = 1, so every sample is exact.
  const auto r = hutchinson_trace(op, 30, ProbeKind::rademacher, 1);
  EXPECT_NEAR(r.estimate, 5050.0, 1e-9);
  const auto g = hutchinson_trace(op, 30, ProbeKind::gaussian, 1);
  EXPECT_GT(g.standard_error, 0.0);
  EXPECT_LE(std::abs(g.estimate - 5050.0), 3.0 * g.standard_error);
  EXPECT_THROW(hutchinson_trace(op, 1, ProbeKind::gaussian, 1), RejectedInput);
}

TEST(ProbeKind, Names) {
  EXPECT_EQ(parse_probe_kind(to_string(ProbeKind::gaussian)), ProbeKind::gaussian);
  EXPECT_EQ(parse_probe_kind("rademacher"), ProbeKind::rademacher);
  EXPECT_THROW(parse_probe_kind("sphere"), RejectedInput);
}

TEST(Stream, MatchesTheInMemoryOperator) {
  TempDir dir;
  const std::size_t n = 80;
  RngStream rng(6, 0);
  const auto op = operator_from_matrix(sample_goe(n, 1.0, rng));
  write_stream_manifest(dir.path(), n);
  std::atomic<bool> done{false};
  std::size_t served = 0;
  std::thread server([&] { served = serve_stream_requests(dir.path(), op, [&] { return !done.load(); }); });

  SlqOptions opt;
  opt.steps = 20;
  opt.probes = 3;
  SlqResult remote;
  try {
    remote = slq_density(stream_operator(dir.path()), opt);
  } catch (...) {
    done = true;
    server.join();
    throw;
  }
  done = true;
  server.join();
  const auto local = slq_density(op, opt);
  EXPECT_EQ(served, 60u);
  EXPECT_EQ(remote.average.nodes, local.average.nodes);
  EXPECT_EQ(remote.average.weights, local.average.weights);
  // Client cleans up every exchange.
  std::size_t left = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) left += e.path().extension() == ".rvec";
  EXPECT_EQ(left, 0u);
}

TEST(Stream, TimesOutWithoutAServer) {
  TempDir dir;
  write_stream_manifest(dir.path(), 3);
  StreamOptions opt;
  opt.timeout = std::chrono::milliseconds(30);
  const auto op = stream_operator(dir.path(), opt);
  EXPECT_THROW(op(std::vector<double>{1.0, 2.0, 3.0}), NumericFailure);
}

TEST(Stream, MalformedManifest) {
  TempDir dir;
  io::write_text(dir / "operator.json", "{\"dimension\": 3}");
  EXPECT_THROW(stream_operator(dir.path()), NumericFailure);
  EXPECT_THROW(stream_operator(dir / "absent"), NumericFailure);
}

TEST(Stream, ServerRejectsWrongLengthRequests) {
  TempDir dir;
  write_stream_manifest(dir.path(), 3);
  io::write_rvec(dir / "request_0.rvec", std::vector<double>{1.0, 2.0});
  EXPECT_THROW(serve_stream_requests(dir.path(), diagonal_operator({1.0, 2.0, 3.0}), [] { return true; }, 1),
               NumericFailure);
}

}  // namespace
