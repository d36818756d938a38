#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "common.hpp"
#include "matrix.hpp"
#include "mm.hpp"

using namespace mmkit;

TEST_CASE("rng is deterministic and well ranged") {
  Rng a(42), b(42), c(43);
  bool same = true, differs = false;
  for (int i = 0; i < 100; ++i) {
    std::uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    same = same && va == vb;
    differs = differs || va != vc;
  }
  CHECK(same);
  CHECK(differs);

  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    double u = r.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    std::int64_t v = r.next_int(-9, 9);
    CHECK(v >= -9);
    CHECK(v <= 9);
    CHECK(r.next_index(5) < 5);
  }
}

TEST_CASE("rng stream derivation separates streams") {
  CHECK(Rng::derive(1, 0) != Rng::derive(1, 1));
  CHECK(Rng::derive(1, 0) != Rng::derive(2, 0));
  CHECK(Rng::derive(5, 3) == Rng::derive(5, 3));
}

TEST_CASE("next_int covers both endpoints") {
  Rng r(11);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(r.next_int(-2, 2));
  CHECK(seen.count(-2) == 1);
  CHECK(seen.count(2) == 1);
  CHECK(seen.size() == 5);
}

TEST_CASE("ring traits basics") {
  CHECK(ring_traits<double>::exact == false);
  CHECK(ring_traits<C64>::exact == false);
  CHECK(ring_traits<Rat>::exact == true);
  CHECK(ring_traits<BigInt>::exact == true);
  CHECK(std::string(ring_traits<double>::name) == "f64");
  CHECK(std::string(ring_traits<Rat>::name) == "rational");

  CHECK(ring_traits<double>::from_rational(Rat(3, 4)) == doctest::Approx(0.75));
  CHECK(ring_traits<Rat>::from_rational(Rat(3, 4)) == Rat(3, 4));
  CHECK(ring_traits<BigInt>::from_rational(Rat(6)) == BigInt(6));
  CHECK_THROWS_AS(ring_traits<BigInt>::from_rational(Rat(1, 2)), RingError);

  CHECK(ring_traits<C64>::abs2(C64(3, 4)) == doctest::Approx(25.0));
  CHECK(ring_traits<Rat>::abs2(Rat(-2)) == doctest::Approx(4.0));
}

TEST_CASE("rational helpers") {
  CHECK(rat_is_integer(Rat(5)));
  CHECK(rat_is_integer(Rat(-4)));
  CHECK(!rat_is_integer(Rat(1, 3)));
  Rat x(1, 3);
  CHECK(x + x + x == Rat(1));
  CHECK(static_cast<double>(Rat(1, 4)) == doctest::Approx(0.25));
}

TEST_CASE("matrix construction and element access") {
  Matrix<double> m(2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.size() == 6);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.data()[i] == 0.0);
  m(1, 2) = 5.0;
  CHECK(m.data()[5] == 5.0);

  Matrix<Rat> id = Matrix<Rat>::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? Rat(1) : Rat(0)));
}

TEST_CASE("elementwise operations count additions") {
  Rng rng(3);
  Matrix<Rat> a = random_matrix<Rat>(3, 4, rng);
  Matrix<Rat> b = random_matrix<Rat>(3, 4, rng);
  OpCounter oc;
  Matrix<Rat> s = add(a, b, &oc);
  CHECK(oc.ring_adds == 12);
  Matrix<Rat> d = sub(s, b, &oc);
  CHECK(oc.ring_adds == 24);
  CHECK(d == a);

  Matrix<Rat> t = a;
  add_into(t, b, &oc);
  CHECK(t == s);
  sub_into(t, b, &oc);
  CHECK(t == a);
  CHECK(oc.ring_adds == 48);

  Matrix<Rat> n = negate(a);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(n.data()[i] == -a.data()[i]);

  OpCounter oc2;
  Matrix<Rat> sc = scale(a, Rat(3), &oc2);
  CHECK(oc2.const_muls == 12);
  CHECK(oc2.ring_muls == 0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(sc.data()[i] == Rat(3) * a.data()[i]);
}

TEST_CASE("block place pad crop roundtrip") {
  Rng rng(5);
  Matrix<Rat> a = random_matrix<Rat>(5, 7, rng);
  Matrix<Rat> p = pad(a, 8, 8);
  CHECK(p.rows() == 8);
  CHECK(p(6, 6) == Rat(0));
  CHECK(crop(p, 5, 7) == a);

  Matrix<Rat> b = block(a, 1, 2, 3, 4);
  CHECK(b(0, 0) == a(1, 2));
  Matrix<Rat> q(5, 7);
  place(q, 1, 2, b);
  CHECK(q(1, 2) == a(1, 2));
  CHECK(q(3, 5) == a(3, 5));
  CHECK(q(0, 0) == Rat(0));
}

TEST_CASE("transpose and matmul against hand oracle") {
  Matrix<Rat> a(2, 3);
  a(0, 0) = Rat(1); a(0, 1) = Rat(2); a(0, 2) = Rat(3);
  a(1, 0) = Rat(4); a(1, 1) = Rat(5); a(1, 2) = Rat(6);
  Matrix<Rat> at = transpose(a);
  CHECK(at.rows() == 3);
  CHECK(at(2, 1) == Rat(6));

  Matrix<Rat> b(3, 2);
  b(0, 0) = Rat(7); b(0, 1) = Rat(8);
  b(1, 0) = Rat(9); b(1, 1) = Rat(10);
  b(2, 0) = Rat(11); b(2, 1) = Rat(12);
  Matrix<Rat> c = matmul(a, b);
  CHECK(c(0, 0) == Rat(58));
  CHECK(c(0, 1) == Rat(64));
  CHECK(c(1, 0) == Rat(139));
  CHECK(c(1, 1) == Rat(154));
}

TEST_CASE("norm helpers") {
  Matrix<double> a(2, 2);
  a(0, 0) = 3.0; a(0, 1) = 0.0;
  a(1, 0) = 4.0; a(1, 1) = -1.0;
  CHECK(frobenius(a) == doctest::Approx(std::sqrt(26.0)));
  CHECK(max_abs(a) == doctest::Approx(4.0));
  CHECK(col_norm(a, 0) == doctest::Approx(5.0));
  CHECK(row_norm(a, 1) == doctest::Approx(std::sqrt(17.0)));
  Matrix<double> b = a;
  b(1, 1) = 1.0;
  CHECK(max_abs_diff(a, b) == doctest::Approx(2.0));
  CHECK(approx_equal(a, b, 2.0));
  CHECK(!approx_equal(a, b, 1.0));
}

TEST_CASE("materialize converts exact matrices") {
  Matrix<Rat> a(2, 2);
  a(0, 0) = Rat(1, 2);
  a(1, 1) = Rat(-3);
  Matrix<double> d = materialize<double>(a);
  CHECK(d(0, 0) == doctest::Approx(0.5));
  CHECK(d(1, 1) == doctest::Approx(-3.0));
  Matrix<C64> c = materialize<C64>(a);
  CHECK(c(0, 0).real() == doctest::Approx(0.5));
  CHECK(c(0, 1) == C64(0.0, 0.0));
}

TEST_CASE("straightforward multiplication matches matmul and counts structurally") {
  Rng rng(9);
  for (auto [k, m, n] : {std::tuple<std::size_t, std::size_t, std::size_t>{2, 3, 4},
                         {1, 1, 1},
                         {5, 2, 7},
                         {4, 4, 4}}) {
    Matrix<Rat> a = random_matrix<Rat>(k, m, rng);
    Matrix<Rat> b = random_matrix<Rat>(m, n, rng);
    OpCounter oc;
    Matrix<Rat> c = straightforward_mm(a, b, &oc);
    CHECK(c == matmul(a, b));
    CHECK(oc.ring_muls == static_cast<long long>(k * m * n));
    CHECK(oc.ring_adds == static_cast<long long>(k * m * n - k * n));
    CHECK(oc.const_muls == 0);
  }
}

TEST_CASE("commutative scheme matches the straightforward product") {
  Rng rng(13);
  for (std::size_t n : {2, 4, 6, 8, 10}) {
    Matrix<Rat> a = random_matrix<Rat>(n, n, rng);
    Matrix<Rat> b = random_matrix<Rat>(n, n, rng);
    OpCounter oc;
    Matrix<Rat> c = commutative_mm_even(a, b, &oc);
    CHECK(c == straightforward_mm(a, b));
    long long nn = static_cast<long long>(n);
    CHECK(oc.ring_muls == nn * nn * nn / 2 + nn * nn);
    CHECK(oc.ring_adds == 3 * nn * nn * nn / 2 + 2 * nn * nn - 2 * nn);
  }
}

TEST_CASE("commutative scheme rejects odd and rectangular inputs") {
  Rng rng(1);
  Matrix<double> a3 = random_matrix<double>(3, 3, rng);
  CHECK_THROWS_AS(commutative_mm_even(a3, a3), DimensionError);
  Matrix<double> a24 = random_matrix<double>(2, 4, rng);
  Matrix<double> a44 = random_matrix<double>(4, 4, rng);
  CHECK_THROWS_AS(commutative_mm_even(a24, a44), DimensionError);
}

TEST_CASE("op counter arithmetic") {
  OpCounter a{1, 2, 3}, b{10, 20, 30};
  a += b;
  CHECK(a.ring_muls == 11);
  CHECK(a.ring_adds == 22);
  CHECK(a.const_muls == 33);
  CHECK(a.total() == 66);
  a.reset();
  CHECK(a.total() == 0);
}
