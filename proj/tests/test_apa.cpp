#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "apa.hpp"
#include "decomposition.hpp"
#include "mm.hpp"
#include "zoo.hpp"

using namespace mmkit;

namespace {

std::vector<std::pair<Matrix<Rat>, Matrix<Rat>>> random_pair_inputs(
    std::size_t k, std::size_t m, std::size_t n, Rng& rng) {
  return {{random_matrix<Rat>(k, m, rng), random_matrix<Rat>(m, n, rng)},
          {random_matrix<Rat>(m, n, rng), random_matrix<Rat>(n, k, rng)}};
}

std::vector<Matrix<Rat>> oracles(
    const std::vector<std::pair<Matrix<Rat>, Matrix<Rat>>>& in) {
  std::vector<Matrix<Rat>> out;
  for (const auto& [a, b] : in) out.push_back(straightforward_mm(a, b));
  return out;
}

}  // namespace

TEST_CASE("lambda polynomial arithmetic") {
  LPoly one(Rat(1));
  LPoly lam = LPoly::term(Rat(1), 1);
  LPoly p = (one + lam) * (one - lam);
  CHECK(p.degree() == 2);
  CHECK(p.coeff(0) == Rat(1));
  CHECK(p.coeff(1) == Rat(0));
  CHECK(p.coeff(2) == Rat(-1));
  CHECK(p.eval(Rat(3)) == Rat(-8));

  LPoly z = lam - lam;
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  CHECK((z * p).is_zero());
  CHECK(-p == LPoly(Rat(-1)) * p);

  LPoly q = LPoly::term(Rat(2, 3), 4);
  CHECK(q.degree() == 4);
  CHECK(q.coeff(3) == Rat(0));
  CHECK(q.eval(Rat(1, 2)) == Rat(2, 3) * Rat(1, 16));
}

TEST_CASE("pair approximation has the stated border rank and degree") {
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  CHECK(alg.rank == 8 + 4 + 4);
  CHECK(alg.order == 2);
  CHECK(alg.degree() == 4);
  REQUIRE(alg.target.is_disjoint());
  CHECK(validate_border_rank(alg).ok);
}

TEST_CASE("border validation passes across small dimensions") {
  for (std::size_t k = 1; k <= 2; ++k)
    for (std::size_t m = 1; m <= 2; ++m)
      for (std::size_t n = 1; n <= 2; ++n) {
        ApaAlgorithm alg = apa_pair(k, m, n);
        CHECK(alg.rank == k * m * n + k * m + m * n);
        BorderValidationResult res = validate_border_rank(alg);
        CHECK(res.ok);
        CHECK(res.order == 2);
        CHECK(res.violations.empty());
      }
}

TEST_CASE("approximate rank undercuts the exact pair everywhere small") {
  for (std::size_t k = 1; k <= 4; ++k)
    for (std::size_t m = 1; m <= 4; ++m)
      for (std::size_t n = 1; n <= 4; ++n)
        CHECK(apa_pair(k, m, n).rank <
              k * m * n + k * m + m * n + n * k);
}

TEST_CASE("border validation flags a zeroed coefficient") {
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  // Zero one lambda-carrying coefficient in U.
  bool zeroed = false;
  for (std::size_t r = 0; r < alg.U.rows() && !zeroed; ++r)
    for (std::size_t q = 0; q < alg.U.cols() && !zeroed; ++q)
      if (alg.U(r, q).degree() == 1) {
        alg.U(r, q) = LPoly();
        zeroed = true;
      }
  REQUIRE(zeroed);
  BorderValidationResult res = validate_border_rank(alg);
  CHECK(!res.ok);
  CHECK(!res.violations.empty());
}

TEST_CASE("an exact scheme embeds as an order-zero approximation") {
  ApaAlgorithm alg = embed_exact(strassen2x2());
  CHECK(alg.order == 0);
  CHECK(alg.degree() == 0);
  CHECK(validate_border_rank(alg).ok);
  Decomposition back = lift_exact(alg);
  CHECK(back.U == strassen2x2().U);
  CHECK(back.W == strassen2x2().W);
}

TEST_CASE("lifting requires order zero and constant coefficients") {
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  CHECK_THROWS_AS(lift_exact(alg), DimensionError);
}

TEST_CASE("instantiation evaluates coefficients at lambda") {
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  Decomposition d1 = instantiate(alg, Rat(1));
  for (std::size_t q = 0; q < alg.rank; ++q)
    for (std::size_t r = 0; r < alg.U.rows(); ++r) {
      Rat sum(0);
      for (int t = 0; t <= alg.U(r, q).degree(); ++t)
        sum += alg.U(r, q).coeff(static_cast<std::size_t>(t));
      CHECK(d1.U(r, q) == sum);
    }
}

TEST_CASE("application rejects lambda zero and fixes zero inputs") {
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  std::vector<std::pair<Matrix<Rat>, Matrix<Rat>>> zeros = {
      {Matrix<Rat>(2, 2), Matrix<Rat>(2, 2)}, {Matrix<Rat>(2, 2), Matrix<Rat>(2, 2)}};
  CHECK_THROWS_AS(apa_apply(alg, zeros, Rat(0)), Error);
  for (const Rat& lam : {Rat(1), Rat(1, 7), Rat(-2)}) {
    std::vector<Matrix<Rat>> out = apa_apply(alg, zeros, lam);
    for (const Matrix<Rat>& m : out)
      for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.data()[i] == Rat(0));
  }
}

TEST_CASE("exact-ring application error shrinks linearly with lambda") {
  Rng rng(400);
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  auto in = random_pair_inputs(2, 2, 2, rng);
  auto want = oracles(in);
  auto max_err = [&](const Rat& lam) {
    std::vector<Matrix<Rat>> out = apa_apply(alg, in, lam);
    double e = 0.0;
    for (std::size_t t = 0; t < out.size(); ++t)
      e = std::max(e, max_abs_diff(out[t], want[t]));
    return e;
  };
  double prev = max_err(Rat(1, 64));
  Rat lam(1, 128);
  for (int step = 0; step < 6; ++step) {
    double cur = max_err(lam);
    REQUIRE(prev > 0.0);
    double ratio = cur / prev;
    CHECK(ratio >= 0.3);
    CHECK(ratio <= 0.7);
    prev = cur;
    lam /= 2;
  }
}

TEST_CASE("float application error halves down the ladder until roundoff") {
  Rng rng(401);
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  auto exact_in = random_pair_inputs(2, 2, 2, rng);
  auto want_exact = oracles(exact_in);
  std::vector<std::pair<Matrix<double>, Matrix<double>>> in;
  std::vector<Matrix<double>> want;
  for (const auto& [a, b] : exact_in)
    in.emplace_back(materialize<double>(a), materialize<double>(b));
  for (const auto& w : want_exact) want.push_back(materialize<double>(w));

  std::vector<double> err;
  for (int t = 4; t <= 30; ++t) {
    Rat lam(1, static_cast<long long>(1) << t);
    std::vector<Matrix<double>> out = apa_apply(alg, in, lam);
    double e = 0.0;
    for (std::size_t p = 0; p < out.size(); ++p)
      e = std::max(e, max_abs_diff(out[p], want[p]));
    err.push_back(e);
  }
  // Find the roundoff knee: the first rung where the error stops improving.
  std::size_t knee = err.size();
  for (std::size_t t = 1; t < err.size(); ++t)
    if (err[t] >= err[t - 1]) {
      knee = t;
      break;
    }
  // Several clean halvings must happen before cancellation takes over.
  REQUIRE(knee >= 6);
  for (std::size_t t = 1; t + 2 < knee && t < 9; ++t) {
    double ratio = err[t] / err[t - 1];
    CHECK(ratio >= 0.3);
    CHECK(ratio <= 0.7);
  }
  // Beyond the knee the error is dominated by roundoff amplified by the
  // 1/lambda^2 rescaling, so it grows again.
  REQUIRE(knee < err.size());
  CHECK(err.back() > err[knee - 1]);
}

TEST_CASE("interpolation recovers the exact product") {
  Rng rng(402);
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  for (int rep = 0; rep < 10; ++rep) {
    auto in = random_pair_inputs(2, 2, 2, rng);
    auto want = oracles(in);
    OpCounter oc;
    std::vector<Matrix<Rat>> got = apa_recover_exact(alg, in, 0, &oc);
    REQUIRE(got.size() == want.size());
    for (std::size_t t = 0; t < got.size(); ++t) CHECK(got[t] == want[t]);
  }
}

TEST_CASE("interpolation works for rectangular dimensions") {
  Rng rng(403);
  for (auto [k, m, n] : {std::tuple<std::size_t, std::size_t, std::size_t>{2, 3, 4},
                         {3, 3, 3},
                         {1, 2, 1}}) {
    ApaAlgorithm alg = apa_pair(k, m, n);
    auto in = random_pair_inputs(k, m, n, rng);
    auto want = oracles(in);
    std::vector<Matrix<Rat>> got = apa_recover_exact(alg, in);
    for (std::size_t t = 0; t < got.size(); ++t) CHECK(got[t] == want[t]);
  }
}

TEST_CASE("extra sample points stay consistent with the interpolant") {
  Rng rng(404);
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  auto in = random_pair_inputs(2, 2, 2, rng);
  auto want = oracles(in);
  std::vector<Matrix<Rat>> got = apa_recover_exact(alg, in, alg.degree() + 2);
  for (std::size_t t = 0; t < got.size(); ++t) CHECK(got[t] == want[t]);
  CHECK_THROWS_AS(apa_recover_exact(alg, in, 2), Error);
}

TEST_CASE("identity operands recover identity products") {
  ApaAlgorithm alg = apa_pair(2, 2, 2);
  std::vector<std::pair<Matrix<Rat>, Matrix<Rat>>> in = {
      {Matrix<Rat>::identity(2), Matrix<Rat>::identity(2)},
      {Matrix<Rat>::identity(2), Matrix<Rat>::identity(2)}};
  std::vector<Matrix<Rat>> got = apa_recover_exact(alg, in);
  for (const Matrix<Rat>& m : got) CHECK(m == Matrix<Rat>::identity(2));
}

TEST_CASE("serializable degree bound is tight") {
  ApaAlgorithm alg = apa_pair(3, 2, 4);
  // Aggregate columns reach degree 1+1+2; the first correction family's
  // outputs are scaled by lambda^2 twice over.
  CHECK(alg.degree() == 4);
  CHECK(validate_border_rank(alg).ok);
}
