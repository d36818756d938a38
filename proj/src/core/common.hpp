#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mmkit {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using C64 = std::complex<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RingError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class Dist { IntUniform, RealUniform };

// Deterministic across platforms: only raw mt19937_64 outputs are used,
// never std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(eng_() % static_cast<std::uint64_t>(n));
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
  }

 private:
  std::mt19937_64 eng_;
};

template <class T>
struct ring_traits;

template <>
struct ring_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "f64";
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_rational(const Rat& q) { return q.convert_to<double>(); }
  static double abs2(double x) { return x * x; }
  static double random(Rng& rng, Dist d) {
    if (d == Dist::IntUniform) return static_cast<double>(rng.next_int(-9, 9));
    return 2.0 * rng.next_unit() - 1.0;
  }
};

template <>
struct ring_traits<C64> {
  static constexpr bool exact = false;
  static constexpr const char* name = "complex";
  static C64 zero() { return {0.0, 0.0}; }
  static C64 one() { return {1.0, 0.0}; }
  static C64 from_rational(const Rat& q) { return {q.convert_to<double>(), 0.0}; }
  static double abs2(const C64& z) { return std::norm(z); }
  static C64 random(Rng& rng, Dist d) {
    double re = ring_traits<double>::random(rng, d);
    double im = ring_traits<double>::random(rng, d);
    return {re, im};
  }
};

template <>
struct ring_traits<Rat> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_rational(const Rat& q) { return q; }
  static double abs2(const Rat& q) {
    double x = q.convert_to<double>();
    return x * x;
  }
  static Rat random(Rng& rng, Dist d) {
    if (d == Dist::IntUniform) return Rat(rng.next_int(-9, 9));
    std::int64_t num = rng.next_int(-9, 9);
    std::int64_t den = rng.next_int(1, 8);
    return Rat(num) / Rat(den);
  }
};

template <>
struct ring_traits<BigInt> {
  static constexpr bool exact = true;
  static constexpr const char* name = "bigint";
  static BigInt zero() { return BigInt(0); }
  static BigInt one() { return BigInt(1); }
  static BigInt from_rational(const Rat& q) {
    if (boost::multiprecision::denominator(q) != 1)
      throw RingError("non-integral coefficient " + q.str() +
                      " cannot be used over the integer ring");
    return BigInt(boost::multiprecision::numerator(q));
  }
  static double abs2(const BigInt& x) {
    double v = x.convert_to<double>();
    return v * v;
  }
  static BigInt random(Rng& rng, Dist) { return BigInt(rng.next_int(-9, 9)); }
};

inline bool rat_is_integer(const Rat& q) {
  return boost::multiprecision::denominator(q) == 1;
}

}  // namespace mmkit
