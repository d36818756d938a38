#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "common.hpp"
#include "matrix.hpp"
#include "opcount.hpp"

namespace mmkit {

// Optimal sampling probabilities for the outer-product estimator:
// p_j proportional to ||a_j||_2 ||b_j^T||_2, uniform if all products vanish.
inline std::vector<double> leverage_probs(const Matrix<double>& a,
                                          const Matrix<double>& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  const std::size_t m = a.cols();
  std::vector<double> p(m);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    p[j] = col_norm(a, j) * row_norm(b, j);
    total += p[j];
  }
  if (total == 0.0) {
    for (std::size_t j = 0; j < m; ++j) p[j] = 1.0 / static_cast<double>(m);
    return p;
  }
  for (std::size_t j = 0; j < m; ++j) p[j] /= total;
  return p;
}

// Monte Carlo product estimate from c outer products drawn i.i.d. with
// replacement, each rescaled by 1/(c p_j).
inline Matrix<double> sampled_mm(const Matrix<double>& a, const Matrix<double>& b,
                                 std::size_t c, Rng& rng,
                                 OpCounter* oc = nullptr) {
  if (c < 1) throw DimensionError("sample count must be positive");
  std::vector<double> p = leverage_probs(a, b);
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    acc += p[j];
    cdf[j] = acc;
  }
  cdf.back() = 1.0;
  const std::size_t k = a.rows(), n = b.cols();
  Matrix<double> out(k, n);
  for (std::size_t t = 0; t < c; ++t) {
    double u = rng.next_unit();
    std::size_t j = 0;
    while (j + 1 < cdf.size() && cdf[j] <= u) ++j;
    const double w = 1.0 / (static_cast<double>(c) * p[j]);
    for (std::size_t i = 0; i < k; ++i) {
      const double wa = w * a(i, j);
      for (std::size_t h = 0; h < n; ++h) out(i, h) += wa * b(j, h);
    }
    if (oc) {
      oc->ring_muls += static_cast<long long>(k + k * n);
      oc->ring_adds += static_cast<long long>(k * n);
    }
  }
  return out;
}

struct SampleStats {
  double rel_error = 0.0;  // ||approx - AB||_F / (||A||_F ||B||_F)
  double audit = 0.0;      // sqrt(c) * rel_error, bounded by 4 in expectation
};

inline SampleStats sample_error_stats(const Matrix<double>& a,
                                      const Matrix<double>& b,
                                      const Matrix<double>& exact,
                                      const Matrix<double>& approx,
                                      std::size_t c) {
  check_same_shape(exact, approx);
  double denom = frobenius(a) * frobenius(b);
  SampleStats st;
  if (denom == 0.0) return st;
  double err = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    double d = exact.data()[i] - approx.data()[i];
    err += d * d;
  }
  st.rel_error = std::sqrt(err) / denom;
  st.audit = std::sqrt(static_cast<double>(c)) * st.rel_error;
  return st;
}

}  // namespace mmkit
