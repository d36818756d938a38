#pragma once

#include "matrix.hpp"

namespace mmkit {

// Inner-product matrix multiplication, counted structurally: kmn ring
// multiplications and k(m-1)n ring additions regardless of entry values.
template <class T>
Matrix<T> straightforward_mm(const Matrix<T>& a, const Matrix<T>& b,
                             OpCounter* oc = nullptr) {
  if (a.cols() != b.rows())
    throw DimensionError("straightforward_mm: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t h = 0; h < b.cols(); ++h) {
      T acc = a(i, 0) * b(0, h);
      for (std::size_t j = 1; j < a.cols(); ++j) acc += a(i, j) * b(j, h);
      c(i, h) = acc;
      if (oc) {
        oc->ring_muls += static_cast<long long>(a.cols());
        oc->ring_adds += static_cast<long long>(a.cols()) - 1;
      }
    }
  return c;
}

// Product-pairing scheme for commutative rings, n even. Row and column
// correction terms are hoisted, giving n^3/2 + n^2 multiplications and
// 3n^3/2 + 2n^2 - 2n additions.
template <class T>
Matrix<T> commutative_mm_even(const Matrix<T>& a, const Matrix<T>& b,
                              OpCounter* oc = nullptr) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw DimensionError("commutative_mm_even: matrices must be square and equal");
  std::size_t n = a.rows();
  if (n % 2 != 0)
    throw DimensionError("commutative_mm_even: order must be even");
  std::size_t half = n / 2;

  std::vector<T> rowc(n, ring_traits<T>::zero());
  for (std::size_t i = 0; i < n; ++i) {
    T acc = a(i, 0) * a(i, 1);
    for (std::size_t t = 1; t < half; ++t) acc += a(i, 2 * t) * a(i, 2 * t + 1);
    rowc[i] = acc;
    if (oc) {
      oc->ring_muls += static_cast<long long>(half);
      oc->ring_adds += static_cast<long long>(half) - 1;
    }
  }

  std::vector<T> colc(n, ring_traits<T>::zero());
  for (std::size_t h = 0; h < n; ++h) {
    T acc = b(0, h) * b(1, h);
    for (std::size_t t = 1; t < half; ++t) acc += b(2 * t, h) * b(2 * t + 1, h);
    colc[h] = acc;
    if (oc) {
      oc->ring_muls += static_cast<long long>(half);
      oc->ring_adds += static_cast<long long>(half) - 1;
    }
  }

  Matrix<T> c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < n; ++h) {
      T acc = ring_traits<T>::zero();
      for (std::size_t t = 0; t < half; ++t) {
        T left = a(i, 2 * t) + b(2 * t + 1, h);
        T right = b(2 * t, h) + a(i, 2 * t + 1);
        if (t == 0)
          acc = left * right;
        else
          acc += left * right;
      }
      c(i, h) = acc - rowc[i] - colc[h];
      if (oc) {
        oc->ring_muls += static_cast<long long>(half);
        oc->ring_adds += 2 * static_cast<long long>(half) +
                         (static_cast<long long>(half) - 1) + 2;
      }
    }
  return c;
}

}  // namespace mmkit
