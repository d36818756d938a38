#pragma once

#include <cstddef>
#include <vector>

#include "common.hpp"
#include "matrix.hpp"

namespace mmkit {

// MM(k,m,n): A is k x m, B is m x n, C = AB is k x n. The auxiliary trilinear
// operand D is n x k.
struct MmShape {
  std::size_t k = 1, m = 1, n = 1;

  std::size_t alpha() const { return k * m; }
  std::size_t beta() const { return m * n; }
  std::size_t gamma() const { return n * k; }
  std::size_t volume() const { return k * m * n; }
  bool square() const { return k == m && m == n; }

  bool operator==(const MmShape&) const = default;
};

// Canonical 0-based flattening, row index fastest:
//   A entry (i,j) -> row j*k+i of U
//   B entry (j,h) -> row h*m+j of V
//   C entry (i,h) -> row i*n+h of W  (D entry (h,i) plays the same role)
inline std::size_t u_index(const MmShape& s, std::size_t i, std::size_t j) {
  return j * s.k + i;
}
inline std::size_t v_index(const MmShape& s, std::size_t j, std::size_t h) {
  return h * s.m + j;
}
inline std::size_t w_index(const MmShape& s, std::size_t i, std::size_t h) {
  return i * s.n + h;
}

struct TensorEntry {
  std::size_t i = 0, j = 0, h = 0;
  Rat value;
};

// Dense order-3 tensor over Rat, first index fastest in memory.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t alpha, std::size_t beta, std::size_t gamma)
      : alpha_(alpha), beta_(beta), gamma_(gamma),
        data_(alpha * beta * gamma, Rat(0)) {}

  std::size_t alpha() const { return alpha_; }
  std::size_t beta() const { return beta_; }
  std::size_t gamma() const { return gamma_; }

  Rat& at(std::size_t i, std::size_t j, std::size_t h) {
    return data_[i + alpha_ * (j + beta_ * h)];
  }
  const Rat& at(std::size_t i, std::size_t j, std::size_t h) const {
    return data_[i + alpha_ * (j + beta_ * h)];
  }

  std::vector<TensorEntry> entries() const {
    std::vector<TensorEntry> out;
    for (std::size_t h = 0; h < gamma_; ++h)
      for (std::size_t j = 0; j < beta_; ++j)
        for (std::size_t i = 0; i < alpha_; ++i) {
          const Rat& v = at(i, j, h);
          if (v != 0) out.push_back({i, j, h, v});
        }
    return out;
  }

  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t alpha_ = 0, beta_ = 0, gamma_ = 0;
  std::vector<Rat> data_;
};

inline Tensor3 mm_tensor(const MmShape& s) {
  Tensor3 t(s.alpha(), s.beta(), s.gamma());
  for (std::size_t i = 0; i < s.k; ++i)
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t h = 0; h < s.n; ++h)
        t.at(u_index(s, i, j), v_index(s, j, h), w_index(s, i, h)) = Rat(1);
  return t;
}

class Target {
 public:
  enum class Kind { Mm, Disjoint, Tensor };

  static Target mm(std::size_t k, std::size_t m, std::size_t n) {
    Target t;
    t.kind_ = Kind::Mm;
    t.shapes_ = {MmShape{k, m, n}};
    return t;
  }
  static Target mm(const MmShape& s) { return mm(s.k, s.m, s.n); }

  static Target disjoint(std::vector<MmShape> shapes) {
    if (shapes.empty()) throw DimensionError("disjoint target needs at least one shape");
    Target t;
    t.kind_ = Kind::Disjoint;
    t.shapes_ = std::move(shapes);
    return t;
  }

  static Target raw(Tensor3 tensor) {
    Target t;
    t.kind_ = Kind::Tensor;
    t.tensor_ = std::move(tensor);
    return t;
  }

  Kind kind() const { return kind_; }
  const std::vector<MmShape>& shapes() const { return shapes_; }
  const MmShape& shape() const { return shapes_.at(0); }
  const Tensor3& tensor() const { return tensor_; }

  bool is_mm() const { return kind_ == Kind::Mm; }
  bool is_disjoint() const { return kind_ == Kind::Disjoint; }
  bool is_raw() const { return kind_ == Kind::Tensor; }

  std::size_t alpha() const {
    if (kind_ == Kind::Tensor) return tensor_.alpha();
    std::size_t s = 0;
    for (const auto& sh : shapes_) s += sh.alpha();
    return s;
  }
  std::size_t beta() const {
    if (kind_ == Kind::Tensor) return tensor_.beta();
    std::size_t s = 0;
    for (const auto& sh : shapes_) s += sh.beta();
    return s;
  }
  std::size_t gamma() const {
    if (kind_ == Kind::Tensor) return tensor_.gamma();
    std::size_t s = 0;
    for (const auto& sh : shapes_) s += sh.gamma();
    return s;
  }

  // Row offsets of the p-th shape's block inside the concatenated operand
  // vectors of a disjoint target.
  std::size_t u_offset(std::size_t p) const {
    std::size_t s = 0;
    for (std::size_t t = 0; t < p; ++t) s += shapes_[t].alpha();
    return s;
  }
  std::size_t v_offset(std::size_t p) const {
    std::size_t s = 0;
    for (std::size_t t = 0; t < p; ++t) s += shapes_[t].beta();
    return s;
  }
  std::size_t w_offset(std::size_t p) const {
    std::size_t s = 0;
    for (std::size_t t = 0; t < p; ++t) s += shapes_[t].gamma();
    return s;
  }

  // Sparse list of the target tensor's nonzero entries.
  std::vector<TensorEntry> entries() const {
    if (kind_ == Kind::Tensor) return tensor_.entries();
    std::vector<TensorEntry> out;
    for (std::size_t p = 0; p < shapes_.size(); ++p) {
      const MmShape& s = shapes_[p];
      std::size_t ou = u_offset(p), ov = v_offset(p), ow = w_offset(p);
      for (std::size_t i = 0; i < s.k; ++i)
        for (std::size_t j = 0; j < s.m; ++j)
          for (std::size_t h = 0; h < s.n; ++h)
            out.push_back({ou + u_index(s, i, j), ov + v_index(s, j, h),
                           ow + w_index(s, i, h), Rat(1)});
    }
    return out;
  }

  bool operator==(const Target&) const = default;

 private:
  Kind kind_ = Kind::Mm;
  std::vector<MmShape> shapes_ = {MmShape{}};
  Tensor3 tensor_;
};

inline Tensor3 disjoint_tensor(const std::vector<MmShape>& shapes) {
  Target t = Target::disjoint(shapes);
  Tensor3 out(t.alpha(), t.beta(), t.gamma());
  for (const auto& e : t.entries()) out.at(e.i, e.j, e.h) = e.value;
  return out;
}

}  // namespace mmkit
