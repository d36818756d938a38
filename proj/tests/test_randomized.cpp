#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "mm.hpp"
#include "randomized.hpp"

using namespace mmkit;

TEST_CASE("sampling probabilities are normalized and proportional") {
  Matrix<double> a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  Matrix<double> b(2, 3);
  b(0, 0) = 1.0;
  b(1, 2) = 1.0;
  // Column norms of a are {1, 2}; row norms of b are {1, 1}.
  std::vector<double> p = leverage_probs(a, b);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(1.0 / 3.0));
  CHECK(p[1] == doctest::Approx(2.0 / 3.0));
  CHECK(p[0] + p[1] == doctest::Approx(1.0));
}

TEST_CASE("a dead column never gets sampled") {
  Matrix<double> a(2, 2);
  a(0, 0) = 3.0;
  a(1, 0) = 4.0;
  Matrix<double> b(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = 100.0;
  std::vector<double> p = leverage_probs(a, b);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("all-zero factors fall back to uniform sampling") {
  Matrix<double> a(3, 4), b(4, 2);
  std::vector<double> p = leverage_probs(a, b);
  REQUIRE(p.size() == 4);
  for (double v : p) CHECK(v == doctest::Approx(0.25));
  Rng rng(600);
  Matrix<double> est = sampled_mm(a, b, 5, rng);
  CHECK(max_abs(est) == 0.0);
}

TEST_CASE("dimension and sample-count validation") {
  Matrix<double> a(2, 3), b(2, 2);
  CHECK_THROWS_AS(leverage_probs(a, b), DimensionError);
  Rng rng(601);
  Matrix<double> ok_a(2, 2), ok_b(2, 2);
  CHECK_THROWS_AS(sampled_mm(ok_a, ok_b, 0, rng), DimensionError);
}

TEST_CASE("a single live column is recovered exactly") {
  Rng rng(602);
  const std::size_t k = 6, m = 5, n = 7;
  Matrix<double> a(k, m), b(m, n);
  const std::size_t live = 2;
  for (std::size_t i = 0; i < k; ++i)
    a(i, live) = static_cast<double>(rng.next_int(-9, 9));
  b = random_matrix<double>(m, n, rng);
  Matrix<double> exact = matmul(a, b);
  // All the probability mass lands on the live column, and with c = 4 the
  // 1/c rescaling is a power of two, so the estimate is bit-exact.
  Rng sampler(603);
  Matrix<double> est = sampled_mm(a, b, 4, sampler);
  CHECK(max_abs_diff(est, exact) == 0.0);
}

TEST_CASE("sampling is deterministic per seed and differs across streams") {
  Rng rng_inputs(604);
  Matrix<double> a = random_matrix<double>(8, 8, rng_inputs);
  Matrix<double> b = random_matrix<double>(8, 8, rng_inputs);
  Rng s1(777), s2(777);
  Matrix<double> e1 = sampled_mm(a, b, 3, s1);
  Matrix<double> e2 = sampled_mm(a, b, 3, s2);
  CHECK(e1 == e2);
  Rng s3(Rng::derive(777, 1));
  Matrix<double> e3 = sampled_mm(a, b, 3, s3);
  CHECK(e1 != e3);
}

TEST_CASE("operation counts scale with the sample budget") {
  Rng rng(605);
  Matrix<double> a = random_matrix<double>(4, 6, rng);
  Matrix<double> b = random_matrix<double>(6, 3, rng);
  OpCounter oc;
  sampled_mm(a, b, 10, rng, &oc);
  CHECK(oc.ring_muls == 10 * (4 + 4 * 3));
  CHECK(oc.ring_adds == 10 * 4 * 3);
  CHECK(oc.const_muls == 0);
}

TEST_CASE("the audited error statistic stays within its budget") {
  Rng rng(606);
  Matrix<double> a = random_matrix<double>(20, 20, rng);
  Matrix<double> b = random_matrix<double>(20, 20, rng);
  Matrix<double> exact = matmul(a, b);
  double mean_audit = 0.0;
  double worst = 0.0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    Rng sampler(Rng::derive(607, static_cast<std::uint64_t>(t)));
    Matrix<double> est = sampled_mm(a, b, 10, sampler);
    SampleStats st = sample_error_stats(a, b, exact, est, 10);
    mean_audit += st.audit;
    worst = std::max(worst, st.audit);
    CHECK(st.rel_error >= 0.0);
  }
  mean_audit /= trials;
  CHECK(mean_audit <= 2.0);
  CHECK(worst <= 6.0);
}

TEST_CASE("error stats degrade gracefully on zero inputs") {
  Matrix<double> z(3, 3);
  SampleStats st = sample_error_stats(z, z, z, z, 4);
  CHECK(st.rel_error == 0.0);
  CHECK(st.audit == 0.0);
}

TEST_CASE("the estimator is unbiased within empirical error bars") {
  Rng rng(608);
  const std::size_t n = 8;
  Matrix<double> a = random_matrix<double>(n, n, rng);
  Matrix<double> b = random_matrix<double>(n, n, rng);
  Matrix<double> exact = matmul(a, b);
  const int trials = 2000;
  const std::size_t c = 2;
  Matrix<double> sum(n, n), sumsq(n, n);
  for (int t = 0; t < trials; ++t) {
    Rng sampler(Rng::derive(609, static_cast<std::uint64_t>(t)));
    Matrix<double> est = sampled_mm(a, b, c, sampler);
    for (std::size_t i = 0; i < est.size(); ++i) {
      sum.data()[i] += est.data()[i];
      sumsq.data()[i] += est.data()[i] * est.data()[i];
    }
  }
  // Every entry's sample mean must sit within five empirical standard errors
  // of the true product entry.
  for (std::size_t i = 0; i < sum.size(); ++i) {
    double mean = sum.data()[i] / trials;
    double var = sumsq.data()[i] / trials - mean * mean;
    double se = std::sqrt(std::max(var, 0.0) / trials);
    CHECK(std::fabs(mean - exact.data()[i]) <= 5.0 * se + 1e-9);
  }
}
