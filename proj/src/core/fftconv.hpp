#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "common.hpp"
#include "matrix.hpp"
#include "mm.hpp"
#include "opcount.hpp"

namespace mmkit {

inline bool is_pow2(std::size_t k) { return k != 0 && (k & (k - 1)) == 0; }

// Least power of two strictly greater than the product degree, so the cyclic
// convolution of that length carries the full linear convolution.
inline std::size_t fft_size_for(std::size_t product_degree) {
  std::size_t k = 1;
  while (k <= product_degree) k <<= 1;
  return k;
}

// Iterative radix-2 transform with the forward root e^{+2*pi*i/K},
// unnormalized; the inverse conjugates the roots and divides by K. Twiddle
// multiplications are counted except by the free factors 1 and -1, giving at
// most K/2 per stage alongside exactly K additions per stage.
inline std::vector<C64> fft(std::vector<C64> a, bool inverse = false,
                            OpCounter* oc = nullptr) {
  const std::size_t k = a.size();
  if (!is_pow2(k)) throw DimensionError("fft length must be a power of two");
  for (std::size_t i = 1, j = 0; i < k; ++i) {
    std::size_t bit = k >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double pi = 3.14159265358979323846;
  for (std::size_t len = 2; len <= k; len <<= 1) {
    double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? -1.0 : 1.0);
    C64 wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < k; i += len) {
      C64 w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        C64 u = a[i + j];
        C64 v = j == 0 ? a[i + j + len / 2] : a[i + j + len / 2] * w;
        if (oc) {
          if (j != 0) oc->ring_muls += 1;
          oc->ring_adds += 2;
        }
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(k);
    for (C64& z : a) z *= s;
    if (oc) oc->const_muls += static_cast<long long>(k);
  }
  return a;
}

// Straightforward polynomial product: (deg a + 1)(deg b + 1) multiplications
// and (deg a)(deg b) additions.
template <typename T>
std::vector<T> convolve_direct(const std::vector<T>& a, const std::vector<T>& b,
                               OpCounter* oc = nullptr) {
  if (a.empty() || b.empty()) return {};
  std::vector<T> r(a.size() + b.size() - 1, ring_traits<T>::zero());
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t t = 0; t < b.size(); ++t) r[s + t] += a[s] * b[t];
  if (oc) {
    oc->ring_muls += static_cast<long long>(a.size() * b.size());
    oc->ring_adds += static_cast<long long>(a.size() * b.size() - r.size());
  }
  return r;
}

inline std::vector<C64> convolve_fft(const std::vector<C64>& a,
                                     const std::vector<C64>& b,
                                     OpCounter* oc = nullptr,
                                     std::size_t* k_used = nullptr) {
  if (a.empty() || b.empty()) return {};
  const std::size_t deg = (a.size() - 1) + (b.size() - 1);
  const std::size_t k = fft_size_for(deg);
  if (k_used) *k_used = k;
  std::vector<C64> fa(k, C64(0.0, 0.0)), fb(k, C64(0.0, 0.0));
  for (std::size_t t = 0; t < a.size(); ++t) fa[t] = a[t];
  for (std::size_t t = 0; t < b.size(); ++t) fb[t] = b[t];
  fa = fft(std::move(fa), false, oc);
  fb = fft(std::move(fb), false, oc);
  for (std::size_t t = 0; t < k; ++t) fa[t] *= fb[t];
  if (oc) oc->ring_muls += static_cast<long long>(k);
  fa = fft(std::move(fa), true, oc);
  fa.resize(deg + 1);
  return fa;
}

inline std::vector<double> convolve_fft_real(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             OpCounter* oc = nullptr,
                                             std::size_t* k_used = nullptr) {
  std::vector<C64> ca(a.size()), cb(b.size());
  for (std::size_t t = 0; t < a.size(); ++t) ca[t] = C64(a[t], 0.0);
  for (std::size_t t = 0; t < b.size(); ++t) cb[t] = C64(b[t], 0.0);
  std::vector<C64> cc = convolve_fft(ca, cb, oc, k_used);
  std::vector<double> r(cc.size());
  for (std::size_t t = 0; t < cc.size(); ++t) r[t] = cc[t].real();
  return r;
}

namespace detail {

inline void check_polymat(const std::vector<Matrix<double>>& a, const char* label) {
  if (a.empty()) throw DimensionError(std::string(label) + " has no coefficients");
  for (const auto& m : a)
    if (m.rows() != a[0].rows() || m.cols() != a[0].cols())
      throw DimensionError(std::string(label) + " coefficient shapes differ");
}

}  // namespace detail

// Polynomial-matrix product, coefficient matrices ascending by degree.
inline std::vector<Matrix<double>> poly_mm_straight(
    const std::vector<Matrix<double>>& a, const std::vector<Matrix<double>>& b,
    OpCounter* oc = nullptr) {
  detail::check_polymat(a, "left operand");
  detail::check_polymat(b, "right operand");
  const std::size_t k = a[0].rows(), m = a[0].cols(), n = b[0].cols();
  if (b[0].rows() != m) throw DimensionError("polynomial matrix shapes do not chain");
  const std::size_t da = a.size() - 1, db = b.size() - 1;
  std::vector<Matrix<double>> r(da + db + 1, Matrix<double>(k, n));
  for (std::size_t s = 0; s <= da; ++s)
    for (std::size_t t = 0; t <= db; ++t)
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t h = 0; h < n; ++h)
            r[s + t](i, h) += a[s](i, j) * b[t](j, h);
  if (oc) {
    const long long terms =
        static_cast<long long>(k * m * n) * static_cast<long long>((da + 1) * (db + 1));
    oc->ring_muls += terms;
    oc->ring_adds += terms - static_cast<long long>(k * n * (da + db + 1));
  }
  return r;
}

// One FFT convolution per scalar entry product: k*m*n transforms pairs.
inline std::vector<Matrix<double>> poly_mm_coeff_fft(
    const std::vector<Matrix<double>>& a, const std::vector<Matrix<double>>& b,
    OpCounter* oc = nullptr, std::size_t* k_used = nullptr) {
  detail::check_polymat(a, "left operand");
  detail::check_polymat(b, "right operand");
  const std::size_t k = a[0].rows(), m = a[0].cols(), n = b[0].cols();
  if (b[0].rows() != m) throw DimensionError("polynomial matrix shapes do not chain");
  const std::size_t da = a.size() - 1, db = b.size() - 1;
  std::vector<Matrix<double>> r(da + db + 1, Matrix<double>(k, n));
  std::vector<double> pa(da + 1), pb(db + 1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t s = 0; s <= da; ++s) pa[s] = a[s](i, j);
        for (std::size_t t = 0; t <= db; ++t) pb[t] = b[t](j, h);
        std::vector<double> conv = convolve_fft_real(pa, pb, oc, k_used);
        for (std::size_t t = 0; t < conv.size(); ++t) {
          r[t](i, h) += conv[t];
          if (oc) oc->ring_adds += 1;
        }
      }
  return r;
}

// Transform the matrix-valued coefficient sequences once, multiply the K
// sample matrices (exactly K inner matrix products), transform back.
inline std::vector<Matrix<double>> poly_mm_matrix_fft(
    const std::vector<Matrix<double>>& a, const std::vector<Matrix<double>>& b,
    OpCounter* oc = nullptr, std::size_t* k_used = nullptr) {
  detail::check_polymat(a, "left operand");
  detail::check_polymat(b, "right operand");
  const std::size_t k = a[0].rows(), m = a[0].cols(), n = b[0].cols();
  if (b[0].rows() != m) throw DimensionError("polynomial matrix shapes do not chain");
  const std::size_t da = a.size() - 1, db = b.size() - 1;
  const std::size_t kk = fft_size_for(da + db);
  if (k_used) *k_used = kk;
  std::vector<Matrix<C64>> ahat(kk, Matrix<C64>(k, m)), bhat(kk, Matrix<C64>(m, n));
  std::vector<C64> seq(kk);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::fill(seq.begin(), seq.end(), C64(0.0, 0.0));
      for (std::size_t t = 0; t <= da; ++t) seq[t] = C64(a[t](i, j), 0.0);
      std::vector<C64> f = fft(seq, false, oc);
      for (std::size_t t = 0; t < kk; ++t) ahat[t](i, j) = f[t];
    }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      std::fill(seq.begin(), seq.end(), C64(0.0, 0.0));
      for (std::size_t t = 0; t <= db; ++t) seq[t] = C64(b[t](j, h), 0.0);
      std::vector<C64> f = fft(seq, false, oc);
      for (std::size_t t = 0; t < kk; ++t) bhat[t](j, h) = f[t];
    }
  std::vector<Matrix<C64>> chat;
  chat.reserve(kk);
  for (std::size_t t = 0; t < kk; ++t)
    chat.push_back(straightforward_mm(ahat[t], bhat[t], oc));
  std::vector<Matrix<double>> r(da + db + 1, Matrix<double>(k, n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t t = 0; t < kk; ++t) seq[t] = chat[t](i, h);
      std::vector<C64> f = fft(seq, true, oc);
      for (std::size_t t = 0; t <= da + db; ++t) r[t](i, h) = f[t].real();
    }
  return r;
}

// Complex matrix product by four real products per entry block:
// 4*kmn real multiplications.
inline Matrix<C64> complex_mm_4m(const Matrix<C64>& a, const Matrix<C64>& b,
                                 OpCounter* oc = nullptr) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  Matrix<double> ar(k, m), ai(k, m), br(m, n), bi(m, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      ar(i, j) = a(i, j).real();
      ai(i, j) = a(i, j).imag();
    }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      br(j, h) = b(j, h).real();
      bi(j, h) = b(j, h).imag();
    }
  Matrix<double> rr = sub(straightforward_mm(ar, br, oc),
                          straightforward_mm(ai, bi, oc), oc);
  Matrix<double> ri = add(straightforward_mm(ar, bi, oc),
                          straightforward_mm(ai, br, oc), oc);
  Matrix<C64> c(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t h = 0; h < n; ++h) c(i, h) = C64(rr(i, h), ri(i, h));
  return c;
}

// Three real products via the rank-3 complex multiplication scheme applied
// blockwise: 3*kmn real multiplications at the cost of extra additions.
inline Matrix<C64> complex_mm_3m(const Matrix<C64>& a, const Matrix<C64>& b,
                                 OpCounter* oc = nullptr) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  Matrix<double> ar(k, m), ai(k, m), br(m, n), bi(m, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      ar(i, j) = a(i, j).real();
      ai(i, j) = a(i, j).imag();
    }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      br(j, h) = b(j, h).real();
      bi(j, h) = b(j, h).imag();
    }
  Matrix<double> p1 = straightforward_mm(ar, br, oc);
  Matrix<double> p2 = straightforward_mm(ai, bi, oc);
  Matrix<double> p3 = straightforward_mm(add(ar, ai, oc), add(br, bi, oc), oc);
  Matrix<double> rr = sub(p1, p2, oc);
  Matrix<double> ri = sub(sub(p3, p1, oc), p2, oc);
  Matrix<C64> c(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t h = 0; h < n; ++h) c(i, h) = C64(rr(i, h), ri(i, h));
  return c;
}

}  // namespace mmkit
