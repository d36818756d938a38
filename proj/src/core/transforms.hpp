#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "common.hpp"
#include "decomposition.hpp"
#include "matrix.hpp"
#include "tensor.hpp"

namespace mmkit {

// Kronecker composition of two MM decompositions: the result multiplies
// (k*k') x (m*m') by (m*m') x (n*n') with rank r*r'.
inline Decomposition tensor_product(const Decomposition& a, const Decomposition& b) {
  if (!a.target.is_mm() || !b.target.is_mm())
    throw DimensionError("tensor product needs matrix multiplication targets");
  a.check_dims();
  b.check_dims();
  const MmShape& s1 = a.target.shape();
  const MmShape& s2 = b.target.shape();
  MmShape s{s1.k * s2.k, s1.m * s2.m, s1.n * s2.n};
  Decomposition out;
  out.name = a.name + "_x_" + b.name;
  out.target = Target::mm(s);
  out.rank = a.rank * b.rank;
  out.U = Matrix<Rat>(s.alpha(), out.rank);
  out.V = Matrix<Rat>(s.beta(), out.rank);
  out.W = Matrix<Rat>(s.gamma(), out.rank);
  for (std::size_t q1 = 0; q1 < a.rank; ++q1)
    for (std::size_t q2 = 0; q2 < b.rank; ++q2) {
      const std::size_t q = q1 * b.rank + q2;
      for (std::size_t r1 = 0; r1 < s1.alpha(); ++r1) {
        const Rat& c1 = a.U(r1, q1);
        if (c1 == 0) continue;
        const std::size_t i1 = r1 % s1.k, j1 = r1 / s1.k;
        for (std::size_t r2 = 0; r2 < s2.alpha(); ++r2) {
          const Rat& c2 = b.U(r2, q2);
          if (c2 == 0) continue;
          const std::size_t i2 = r2 % s2.k, j2 = r2 / s2.k;
          out.U(u_index(s, i1 * s2.k + i2, j1 * s2.m + j2), q) = c1 * c2;
        }
      }
      for (std::size_t r1 = 0; r1 < s1.beta(); ++r1) {
        const Rat& c1 = a.V(r1, q1);
        if (c1 == 0) continue;
        const std::size_t j1 = r1 % s1.m, h1 = r1 / s1.m;
        for (std::size_t r2 = 0; r2 < s2.beta(); ++r2) {
          const Rat& c2 = b.V(r2, q2);
          if (c2 == 0) continue;
          const std::size_t j2 = r2 % s2.m, h2 = r2 / s2.m;
          out.V(v_index(s, j1 * s2.m + j2, h1 * s2.n + h2), q) = c1 * c2;
        }
      }
      for (std::size_t r1 = 0; r1 < s1.gamma(); ++r1) {
        const Rat& c1 = a.W(r1, q1);
        if (c1 == 0) continue;
        const std::size_t h1 = r1 % s1.n, i1 = r1 / s1.n;
        for (std::size_t r2 = 0; r2 < s2.gamma(); ++r2) {
          const Rat& c2 = b.W(r2, q2);
          if (c2 == 0) continue;
          const std::size_t h2 = r2 % s2.n, i2 = r2 / s2.n;
          out.W(w_index(s, i1 * s2.k + i2, h1 * s2.n + h2), q) = c1 * c2;
        }
      }
    }
  return out;
}

enum class DualMode { Cycle, Cycle2, Transpose };

inline const char* dual_mode_name(DualMode m) {
  switch (m) {
    case DualMode::Cycle: return "cycle";
    case DualMode::Cycle2: return "cycle2";
    default: return "transpose";
  }
}

namespace detail {

inline Target cycle_target(const Target& t) {
  if (t.is_raw()) {
    const Tensor3& in = t.tensor();
    Tensor3 out(in.beta(), in.gamma(), in.alpha());
    for (const TensorEntry& e : in.entries()) out.at(e.j, e.h, e.i) = e.value;
    return Target::raw(std::move(out));
  }
  std::vector<MmShape> shapes;
  for (const MmShape& s : t.shapes()) shapes.push_back({s.m, s.n, s.k});
  return t.is_mm() ? Target::mm(shapes[0]) : Target::disjoint(std::move(shapes));
}

}  // namespace detail

// Cyclic duality rotates the operand roles, (U,V,W) -> (V,W,U); for an MM
// target that is MM(k,m,n) -> MM(m,n,k). Transpose duality swaps the outer
// dimensions, MM(k,m,n) -> MM(n,m,k), exploiting (AB)^T = B^T A^T.
inline Decomposition dualize(const Decomposition& d, DualMode mode) {
  d.check_dims();
  Decomposition out;
  out.name = d.name + "_" + dual_mode_name(mode);
  out.rank = d.rank;
  if (mode == DualMode::Cycle) {
    out.target = detail::cycle_target(d.target);
    out.U = d.V;
    out.V = d.W;
    out.W = d.U;
    return out;
  }
  if (mode == DualMode::Cycle2) {
    out.target = detail::cycle_target(detail::cycle_target(d.target));
    out.U = d.W;
    out.V = d.U;
    out.W = d.V;
    return out;
  }
  if (d.target.is_raw())
    throw DimensionError("transpose duality needs matrix multiplication targets");
  std::vector<MmShape> tshapes;
  for (const MmShape& s : d.target.shapes()) tshapes.push_back({s.n, s.m, s.k});
  Target tt = d.target.is_mm() ? Target::mm(tshapes[0]) : Target::disjoint(tshapes);
  out.target = tt;
  out.U = Matrix<Rat>(tt.alpha(), d.rank);
  out.V = Matrix<Rat>(tt.beta(), d.rank);
  out.W = Matrix<Rat>(tt.gamma(), d.rank);
  for (std::size_t p = 0; p < tshapes.size(); ++p) {
    const MmShape& s = d.target.shapes()[p];
    const MmShape& t = tshapes[p];
    const std::size_t ou = d.target.u_offset(p), ov = d.target.v_offset(p),
                      ow = d.target.w_offset(p);
    const std::size_t nu = tt.u_offset(p), nv = tt.v_offset(p), nw = tt.w_offset(p);
    for (std::size_t q = 0; q < d.rank; ++q) {
      for (std::size_t j = 0; j < s.m; ++j)
        for (std::size_t h = 0; h < s.n; ++h)
          out.U(nu + u_index(t, h, j), q) = d.V(ov + v_index(s, j, h), q);
      for (std::size_t i = 0; i < s.k; ++i)
        for (std::size_t j = 0; j < s.m; ++j)
          out.V(nv + v_index(t, j, i), q) = d.U(ou + u_index(s, i, j), q);
      for (std::size_t i = 0; i < s.k; ++i)
        for (std::size_t h = 0; h < s.n; ++h)
          out.W(nw + w_index(t, h, i), q) = d.W(ow + w_index(s, i, h), q);
    }
  }
  return out;
}

struct EquivalenceMaps {
  Matrix<Rat> x, xi;  // k x k pair, exact inverses of each other
  Matrix<Rat> y, yi;  // m x m
  Matrix<Rat> z, zi;  // n x n
  std::vector<std::size_t> perm;  // product relabeling, perm[q] = source index
};

namespace detail {

inline void check_inverse_pair(const Matrix<Rat>& a, const Matrix<Rat>& ai,
                               std::size_t n, const char* label) {
  if (a.rows() != n || a.cols() != n || ai.rows() != n || ai.cols() != n)
    throw DimensionError(std::string(label) + " map has the wrong size");
  Matrix<Rat> id = Matrix<Rat>::identity(n);
  if (!(matmul(a, ai) == id) || !(matmul(ai, a) == id))
    throw DimensionError(std::string(label) + " maps are not exact inverses");
}

inline void check_permutation(const std::vector<std::size_t>& p, std::size_t r) {
  if (p.size() != r) throw DimensionError("permutation length does not match rank");
  std::vector<bool> seen(r, false);
  for (std::size_t v : p) {
    if (v >= r || seen[v]) throw DimensionError("product relabeling is not a permutation");
    seen[v] = true;
  }
}

}  // namespace detail

// Sandwiching by invertible maps plus a product relabeling preserves validity:
// the transformed triple evaluates trace((Xi A Y)(Yi B Z)(Zi D X)) = trace(ABD).
inline Decomposition equivalence_transform(const Decomposition& d,
                                           const EquivalenceMaps& maps) {
  if (!d.target.is_mm())
    throw DimensionError("equivalence transform needs a matrix multiplication target");
  d.check_dims();
  const MmShape& s = d.target.shape();
  detail::check_inverse_pair(maps.x, maps.xi, s.k, "row");
  detail::check_inverse_pair(maps.y, maps.yi, s.m, "middle");
  detail::check_inverse_pair(maps.z, maps.zi, s.n, "column");
  detail::check_permutation(maps.perm, d.rank);
  Matrix<Rat> xit = transpose(maps.xi), xt = transpose(maps.x);
  Matrix<Rat> yit = transpose(maps.yi), yt = transpose(maps.y);
  Matrix<Rat> zit = transpose(maps.zi), zt = transpose(maps.z);
  Decomposition out;
  out.name = d.name + "_equiv";
  out.target = d.target;
  out.rank = d.rank;
  out.U = Matrix<Rat>(s.alpha(), d.rank);
  out.V = Matrix<Rat>(s.beta(), d.rank);
  out.W = Matrix<Rat>(s.gamma(), d.rank);
  for (std::size_t q = 0; q < d.rank; ++q) {
    const std::size_t qo = maps.perm[q];
    Matrix<Rat> mu(s.k, s.m), mv(s.m, s.n), mw(s.n, s.k);
    for (std::size_t i = 0; i < s.k; ++i)
      for (std::size_t j = 0; j < s.m; ++j) mu(i, j) = d.U(u_index(s, i, j), qo);
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t h = 0; h < s.n; ++h) mv(j, h) = d.V(v_index(s, j, h), qo);
    for (std::size_t h = 0; h < s.n; ++h)
      for (std::size_t i = 0; i < s.k; ++i) mw(h, i) = d.W(w_index(s, i, h), qo);
    Matrix<Rat> nu = matmul(matmul(xit, mu), yt);
    Matrix<Rat> nv = matmul(matmul(yit, mv), zt);
    Matrix<Rat> nw = matmul(matmul(zit, mw), xt);
    for (std::size_t i = 0; i < s.k; ++i)
      for (std::size_t j = 0; j < s.m; ++j) out.U(u_index(s, i, j), q) = nu(i, j);
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t h = 0; h < s.n; ++h) out.V(v_index(s, j, h), q) = nv(j, h);
    for (std::size_t h = 0; h < s.n; ++h)
      for (std::size_t i = 0; i < s.k; ++i) out.W(w_index(s, i, h), q) = nw(h, i);
  }
  return out;
}

// Random diagonal-scaling equivalence with a random product permutation.
// Diagonal entries are drawn from a small set of invertible rationals.
inline EquivalenceMaps random_equivalence(const MmShape& s, Rng& rng) {
  static const Rat pool[] = {Rat(1), Rat(-1), Rat(2), Rat(1, 2), Rat(3), Rat(-1, 3)};
  auto diag_pair = [&](std::size_t n, Matrix<Rat>& a, Matrix<Rat>& ai) {
    a = Matrix<Rat>(n, n);
    ai = Matrix<Rat>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      Rat v = pool[rng.next_index(sizeof(pool) / sizeof(pool[0]))];
      a(i, i) = v;
      ai(i, i) = Rat(1) / v;
    }
  };
  EquivalenceMaps maps;
  diag_pair(s.k, maps.x, maps.xi);
  diag_pair(s.m, maps.y, maps.yi);
  diag_pair(s.n, maps.z, maps.zi);
  return maps;
}

inline std::vector<std::size_t> random_permutation(std::size_t r, Rng& rng) {
  std::vector<std::size_t> p(r);
  for (std::size_t i = 0; i < r; ++i) p[i] = i;
  for (std::size_t i = r; i > 1; --i) {
    std::size_t j = rng.next_index(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace mmkit
