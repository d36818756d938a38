#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "exponents.hpp"

using namespace mmkit;

TEST_CASE("square exponents match logarithm oracles") {
  CHECK(exponent_square(2, 7) ==
        doctest::Approx(std::log2(7.0)).epsilon(1e-12));
  CHECK(exponent_square(2, 7) == doctest::Approx(2.8074).epsilon(1e-4));
  CHECK(exponent_square(6, 144) ==
        doctest::Approx(std::log(144.0) / std::log(6.0)).epsilon(1e-12));
  CHECK(exponent_square(6, 144) == doctest::Approx(2.7737).epsilon(1e-4));
  for (std::size_t n : {2, 3, 4, 10})
    CHECK(exponent_square(n, n * n * n) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(exponent_square(2, 8) == doctest::Approx(3.0));
  CHECK_THROWS_AS(exponent_square(1, 5), DimensionError);
  CHECK_THROWS_AS(exponent_square(2, 0), DimensionError);
}

TEST_CASE("rectangular exponent symmetrizes over cyclic duals") {
  for (std::size_t n : {2, 3, 6})
    CHECK(exponent_rect(n, n, n, 5 * n) ==
          doctest::Approx(exponent_square(n, 5 * n)).epsilon(1e-12));
  CHECK(exponent_rect(2, 3, 4, 20) == doctest::Approx(exponent_rect(4, 2, 3, 20)));
  CHECK(exponent_rect(2, 3, 4, 20) ==
        doctest::Approx(3.0 * std::log(20.0) / std::log(24.0)).epsilon(1e-12));
  CHECK_THROWS_AS(exponent_rect(1, 1, 1, 5), DimensionError);
  CHECK_THROWS_AS(exponent_rect(2, 3, 4, 0), DimensionError);
}

TEST_CASE("tau solver reproduces the two-block bound") {
  std::vector<MmShape> shapes = {{7, 1, 7}, {1, 7, 7}};
  TauResult res = schonhage_tau(shapes, 63, 1e-13);
  // 2 * 49^tau = 63, so tau = log_49(31.5).
  double tau_closed = std::log(31.5) / std::log(49.0);
  CHECK(res.tau == doctest::Approx(tau_closed).epsilon(1e-10));
  CHECK(res.omega_bound == doctest::Approx(3.0 * tau_closed).epsilon(1e-10));
  CHECK(res.omega_bound < 2.66);
  CHECK(res.residual <= 1e-10);
  CHECK(res.iterations > 30);
}

TEST_CASE("tau on a single square shape matches the plain exponent") {
  TauResult res = schonhage_tau({{2, 2, 2}}, 7);
  CHECK(res.omega_bound == doctest::Approx(exponent_square(2, 7)).epsilon(1e-9));
  TauResult twice = schonhage_tau({{2, 2, 2}, {2, 2, 2}}, 14);
  CHECK(twice.tau == doctest::Approx(res.tau).epsilon(1e-9));
}

TEST_CASE("tau solver rejects out-of-range inputs") {
  CHECK_THROWS_AS(schonhage_tau({}, 5), DimensionError);
  CHECK_THROWS_AS(schonhage_tau({{2, 2, 2}, {3, 3, 3}}, 1), DimensionError);
  CHECK_THROWS_AS(schonhage_tau({{2, 2, 2}}, 513), DimensionError);
}

TEST_CASE("rank formulas hit the published counts at the canonical orders") {
  CHECK(pan_rank(PanFamily::P1978, 70) == 143640);
  CHECK(pan_rank(PanFamily::P1980, 48) == 47216);
  CHECK(pan_rank(PanFamily::P1981, 46) == 41308);
  CHECK(pan_rank(PanFamily::P1982, 44) == 36133);
  CHECK(pan_rank(PanFamily::P1982, 2) == 48);
}

TEST_CASE("rank formulas reject orders where the quotient is fractional") {
  CHECK_THROWS_AS(pan_rank(PanFamily::P1980, 3), DimensionError);
  CHECK_THROWS_AS(pan_rank(PanFamily::P1982, 3), DimensionError);
  CHECK_THROWS_AS(pan_rank(PanFamily::P1978, 1), DimensionError);
  // n^3 + 18n^2 - 4n == n(n-1)(n+1) mod 3, so the 1978 family is integral
  // at every order, and so is the 1981 family.
  for (long long n = 2; n <= 40; ++n) {
    CHECK_NOTHROW(pan_rank(PanFamily::P1978, n));
    CHECK_NOTHROW(pan_rank(PanFamily::P1981, n));
  }
}

TEST_CASE("table rows stay at or under the published bounds") {
  std::vector<PanRow> rows = pan_table();
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].year == 1978);
  CHECK(rows[1].year == 1980);
  CHECK(rows[2].year == 1981);
  CHECK(rows[3].year == 1982);
  CHECK(rows[0].n == 70);
  CHECK(rows[1].n == 48);
  CHECK(rows[2].n == 46);
  CHECK(rows[3].n == 44);
  for (const PanRow& row : rows) {
    CHECK(row.rank == pan_rank(static_cast<PanFamily>(&row - rows.data()), row.n));
    CHECK(row.omega ==
          doctest::Approx(std::log2(static_cast<double>(row.rank)) /
                          std::log2(static_cast<double>(row.n)))
              .epsilon(1e-12));
    CHECK(row.omega <= row.published_bound);
    CHECK(row.published_bound - row.omega <= 1e-3);
  }
  CHECK(rows[0].note == "also quoted as 2.7962");
  CHECK(rows[1].note.empty());
  CHECK(rows[3].formula == "(4n^3+45n^2+128n+108)/12");
}

TEST_CASE("row construction is consistent across orders within a family") {
  PanRow small = pan_row(PanFamily::P1978, 34);
  CHECK(small.rank == (34LL * 34 * 34 + 18 * 34 * 34 - 4 * 34) / 3);
  CHECK(small.omega == doctest::Approx(exponent_square(
                           34, static_cast<std::size_t>(small.rank))));
  // The family improves as the order grows toward its sweet spot.
  CHECK(pan_row(PanFamily::P1978, 70).omega < pan_row(PanFamily::P1978, 34).omega);
}
