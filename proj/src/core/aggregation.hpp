#pragma once

#include <cstddef>
#include <string>

#include "decomposition.hpp"
#include "matrix.hpp"
#include "tensor.hpp"

namespace mmkit {

// Aggregation over the disjoint pair MM(k,m,n) + MM(m,n,k). Each aggregate
// (a_{i,j}+u_{j,h})(b_{j,h}+v_{h,i}) feeds both outputs; three correction
// families cancel the six cross terms. Rank kmn + km + mn + nk.
inline Decomposition aggregation_pair(std::size_t k, std::size_t m, std::size_t n) {
  if (k < 1 || m < 1 || n < 1)
    throw DimensionError("aggregation_pair needs positive dimensions");
  MmShape s1{k, m, n}, s2{m, n, k};
  Decomposition d;
  d.name = "aggregation_pair" + std::to_string(k) + "x" + std::to_string(m) +
           "x" + std::to_string(n);
  d.target = Target::disjoint({s1, s2});
  d.rank = k * m * n + k * m + m * n + n * k;
  d.U = Matrix<Rat>(d.target.alpha(), d.rank);
  d.V = Matrix<Rat>(d.target.beta(), d.rank);
  d.W = Matrix<Rat>(d.target.gamma(), d.rank);

  auto a_row = [&](std::size_t i, std::size_t j) { return j * k + i; };
  auto u_row = [&](std::size_t j, std::size_t h) { return k * m + h * m + j; };
  auto b_row = [&](std::size_t j, std::size_t h) { return h * m + j; };
  auto v_row = [&](std::size_t h, std::size_t i) { return m * n + i * n + h; };
  auto c1_row = [&](std::size_t i, std::size_t h) { return i * n + h; };
  auto c2_row = [&](std::size_t j, std::size_t i) { return n * k + j * k + i; };

  const std::size_t kmn = k * m * n;
  auto q_agg = [&](std::size_t i, std::size_t j, std::size_t h) {
    return (i * m + j) * n + h;
  };
  auto q_t1 = [&](std::size_t i, std::size_t j) { return kmn + i * m + j; };
  auto q_t2 = [&](std::size_t j, std::size_t h) { return kmn + k * m + j * n + h; };
  auto q_t3 = [&](std::size_t i, std::size_t h) {
    return kmn + k * m + m * n + i * n + h;
  };

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t h = 0; h < n; ++h) {
        std::size_t q = q_agg(i, j, h);
        d.U(a_row(i, j), q) = 1;
        d.U(u_row(j, h), q) = 1;
        d.V(b_row(j, h), q) = 1;
        d.V(v_row(h, i), q) = 1;
        d.W(c1_row(i, h), q) = 1;
        d.W(c2_row(j, i), q) = 1;
      }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t q = q_t1(i, j);
      d.U(a_row(i, j), q) = 1;
      for (std::size_t h = 0; h < n; ++h) {
        d.V(b_row(j, h), q) = 1;
        d.V(v_row(h, i), q) = 1;
      }
      d.W(c2_row(j, i), q) = -1;
    }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      std::size_t q = q_t2(j, h);
      d.U(u_row(j, h), q) = 1;
      d.V(b_row(j, h), q) = 1;
      for (std::size_t i = 0; i < k; ++i) {
        d.W(c1_row(i, h), q) = -1;
        d.W(c2_row(j, i), q) = -1;
      }
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t h = 0; h < n; ++h) {
      std::size_t q = q_t3(i, h);
      for (std::size_t j = 0; j < m; ++j) {
        d.U(a_row(i, j), q) = 1;
        d.U(u_row(j, h), q) = 1;
      }
      d.V(v_row(h, i), q) = 1;
      d.W(c1_row(i, h), q) = -1;
    }
  return d;
}

// Aggregation over three disjoint MM(n,n,n) problems whose operands are
// cyclically staggered. Two aggregate groups cover the three targets and
// cancel eight cross-term families against each other; six correction
// families of n^2 products each absorb the remaining eleven. Rank 2n^3+6n^2.
inline Decomposition aggregation_triple(std::size_t n) {
  if (n < 1) throw DimensionError("aggregation_triple needs a positive dimension");
  MmShape s{n, n, n};
  Decomposition d;
  d.name = "aggregation_triple" + std::to_string(n);
  d.target = Target::disjoint({s, s, s});
  const std::size_t n2 = n * n, n3 = n2 * n;
  d.rank = 2 * n3 + 6 * n2;
  d.U = Matrix<Rat>(d.target.alpha(), d.rank);
  d.V = Matrix<Rat>(d.target.beta(), d.rank);
  d.W = Matrix<Rat>(d.target.gamma(), d.rank);

  auto x_row = [&](std::size_t i, std::size_t j) { return j * n + i; };
  auto u_row = [&](std::size_t j, std::size_t h) { return n2 + h * n + j; };
  auto a_row = [&](std::size_t h, std::size_t i) { return 2 * n2 + i * n + h; };
  auto y_row = [&](std::size_t j, std::size_t h) { return h * n + j; };
  auto v_row = [&](std::size_t h, std::size_t i) { return n2 + i * n + h; };
  auto b_row = [&](std::size_t i, std::size_t j) { return 2 * n2 + j * n + i; };
  auto z_row = [&](std::size_t i, std::size_t h) { return i * n + h; };
  auto w_row = [&](std::size_t i, std::size_t j) { return n2 + j * n + i; };
  auto d_row = [&](std::size_t j, std::size_t h) { return 2 * n2 + h * n + j; };

  auto q_g1 = [&](std::size_t i, std::size_t j, std::size_t h) {
    return (i * n + j) * n + h;
  };
  auto q_g2 = [&](std::size_t i, std::size_t j, std::size_t h) {
    return n3 + (i * n + j) * n + h;
  };
  auto q_c = [&](std::size_t group, std::size_t p, std::size_t q) {
    return 2 * n3 + group * n2 + p * n + q;
  };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t h = 0; h < n; ++h) {
        std::size_t q = q_g1(i, j, h);
        d.U(x_row(i, j), q) = 1;
        d.U(u_row(j, h), q) = 1;
        d.U(a_row(h, i), q) = 1;
        d.V(y_row(j, h), q) = 1;
        d.V(v_row(h, i), q) = 1;
        d.V(b_row(i, j), q) = 1;
        d.W(w_row(i, j), q) = 1;
        d.W(d_row(j, h), q) = 1;

        q = q_g2(i, j, h);
        d.U(x_row(i, j), q) = 1;
        d.U(a_row(h, i), q) = 1;
        d.V(y_row(j, h), q) = 1;
        d.V(v_row(h, i), q) = 1;
        d.W(z_row(i, h), q) = 1;
        d.W(d_row(j, h), q) = -1;
        d.W(w_row(i, j), q) = -1;
      }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      std::size_t q = q_c(0, j, h);
      d.U(u_row(j, h), q) = 1;
      d.V(y_row(j, h), q) = 1;
      for (std::size_t i = 0; i < n; ++i) d.W(w_row(i, j), q) = -1;
      d.W(d_row(j, h), q) = -Rat(static_cast<long>(n));

      q = q_c(1, j, h);
      d.U(u_row(j, h), q) = 1;
      for (std::size_t i = 0; i < n; ++i) {
        d.V(v_row(h, i), q) = 1;
        d.V(b_row(i, j), q) = 1;
      }
      d.W(d_row(j, h), q) = -1;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t q = q_c(2, i, j);
      d.U(x_row(i, j), q) = Rat(static_cast<long>(n));
      for (std::size_t h = 0; h < n; ++h) {
        d.U(u_row(j, h), q) = 1;
        d.U(a_row(h, i), q) = 1;
      }
      d.V(b_row(i, j), q) = 1;
      d.W(w_row(i, j), q) = -1;

      q = q_c(3, i, j);
      d.U(x_row(i, j), q) = 1;
      d.V(b_row(i, j), q) = 1;
      for (std::size_t h = 0; h < n; ++h) d.W(d_row(j, h), q) = -1;
    }
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t q = q_c(4, h, i);
      for (std::size_t j = 0; j < n; ++j) d.U(x_row(i, j), q) = 1;
      d.U(a_row(h, i), q) += Rat(static_cast<long>(n));
      d.V(v_row(h, i), q) = 1;
      d.W(z_row(i, h), q) = -1;

      q = q_c(5, h, i);
      d.U(a_row(h, i), q) = 1;
      for (std::size_t j = 0; j < n; ++j) d.V(y_row(j, h), q) = 1;
      d.W(z_row(i, h), q) = -1;
    }
  return d;
}

}  // namespace mmkit
