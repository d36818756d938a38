#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "common.hpp"
#include "opcount.hpp"

namespace mmkit {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, ring_traits<T>::zero()) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring_traits<T>::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <class T>
void check_same_shape(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix shapes differ: " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

template <class T>
Matrix<T> add(const Matrix<T>& a, const Matrix<T>& b, OpCounter* oc = nullptr) {
  check_same_shape(a, b);
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] + b.data()[i];
  if (oc) oc->ring_adds += static_cast<long long>(a.size());
  return c;
}

template <class T>
Matrix<T> sub(const Matrix<T>& a, const Matrix<T>& b, OpCounter* oc = nullptr) {
  check_same_shape(a, b);
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  if (oc) oc->ring_adds += static_cast<long long>(a.size());
  return c;
}

template <class T>
void add_into(Matrix<T>& dst, const Matrix<T>& src, OpCounter* oc = nullptr) {
  check_same_shape(dst, src);
  for (std::size_t i = 0; i < dst.size(); ++i) dst.data()[i] += src.data()[i];
  if (oc) oc->ring_adds += static_cast<long long>(dst.size());
}

template <class T>
void sub_into(Matrix<T>& dst, const Matrix<T>& src, OpCounter* oc = nullptr) {
  check_same_shape(dst, src);
  for (std::size_t i = 0; i < dst.size(); ++i) dst.data()[i] -= src.data()[i];
  if (oc) oc->ring_adds += static_cast<long long>(dst.size());
}

template <class T>
Matrix<T> negate(const Matrix<T>& a) {
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = -a.data()[i];
  return c;
}

template <class T>
Matrix<T> scale(const Matrix<T>& a, const T& s, OpCounter* oc = nullptr) {
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = s * a.data()[i];
  if (oc) oc->const_muls += static_cast<long long>(a.size());
  return c;
}

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T& aij = a(i, j);
      for (std::size_t h = 0; h < b.cols(); ++h) c(i, h) += aij * b(j, h);
    }
  return c;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> c(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = a(i, j);
  return c;
}

template <class T>
Matrix<T> block(const Matrix<T>& a, std::size_t i0, std::size_t j0,
                std::size_t rows, std::size_t cols) {
  Matrix<T> c(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) c(i, j) = a(i0 + i, j0 + j);
  return c;
}

template <class T>
void place(Matrix<T>& a, std::size_t i0, std::size_t j0, const Matrix<T>& b) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) a(i0 + i, j0 + j) = b(i, j);
}

template <class T>
Matrix<T> pad(const Matrix<T>& a, std::size_t rows, std::size_t cols) {
  Matrix<T> c(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  return c;
}

template <class T>
Matrix<T> crop(const Matrix<T>& a, std::size_t rows, std::size_t cols) {
  return block(a, 0, 0, rows, cols);
}

template <class T>
double frobenius(const Matrix<T>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += ring_traits<T>::abs2(a.data()[i]);
  return std::sqrt(s);
}

template <class T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::sqrt(ring_traits<T>::abs2(a.data()[i])));
  return m;
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  check_same_shape(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::sqrt(ring_traits<T>::abs2(a.data()[i] - b.data()[i])));
  return m;
}

template <class T>
bool approx_equal(const Matrix<T>& a, const Matrix<T>& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

template <class T>
double col_norm(const Matrix<T>& a, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += ring_traits<T>::abs2(a(i, j));
  return std::sqrt(s);
}

template <class T>
double row_norm(const Matrix<T>& a, std::size_t i) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) s += ring_traits<T>::abs2(a(i, j));
  return std::sqrt(s);
}

template <class T>
Matrix<T> random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                        Dist d = Dist::IntUniform) {
  Matrix<T> c(rows, cols);
  for (std::size_t i = 0; i < c.size(); ++i)
    c.data()[i] = ring_traits<T>::random(rng, d);
  return c;
}

template <class T>
Matrix<T> materialize(const Matrix<Rat>& a) {
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    c.data()[i] = ring_traits<T>::from_rational(a.data()[i]);
  return c;
}

}  // namespace mmkit
