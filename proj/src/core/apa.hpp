#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "common.hpp"
#include "decomposition.hpp"
#include "matrix.hpp"
#include "tensor.hpp"

namespace mmkit {

// Polynomial in the degeneration parameter lambda, ascending coefficients.
struct LPoly {
  std::vector<Rat> c;

  LPoly() = default;
  explicit LPoly(const Rat& v) {
    if (v != 0) c.push_back(v);
  }

  static LPoly term(const Rat& v, std::size_t deg) {
    LPoly p;
    if (v != 0) {
      p.c.assign(deg + 1, Rat(0));
      p.c[deg] = v;
    }
    return p;
  }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  Rat coeff(std::size_t t) const { return t < c.size() ? c[t] : Rat(0); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  Rat eval(const Rat& lambda) const {
    Rat acc(0);
    for (std::size_t t = c.size(); t > 0; --t) acc = acc * lambda + c[t - 1];
    return acc;
  }

  friend LPoly operator+(const LPoly& a, const LPoly& b) {
    LPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
    for (std::size_t t = 0; t < a.c.size(); ++t) r.c[t] += a.c[t];
    for (std::size_t t = 0; t < b.c.size(); ++t) r.c[t] += b.c[t];
    r.trim();
    return r;
  }
  friend LPoly operator-(const LPoly& a, const LPoly& b) {
    LPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
    for (std::size_t t = 0; t < a.c.size(); ++t) r.c[t] += a.c[t];
    for (std::size_t t = 0; t < b.c.size(); ++t) r.c[t] -= b.c[t];
    r.trim();
    return r;
  }
  friend LPoly operator*(const LPoly& a, const LPoly& b) {
    LPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
    for (std::size_t s = 0; s < a.c.size(); ++s)
      for (std::size_t t = 0; t < b.c.size(); ++t) r.c[s + t] += a.c[s] * b.c[t];
    r.trim();
    return r;
  }
  LPoly operator-() const {
    LPoly r = *this;
    for (Rat& v : r.c) v = -v;
    return r;
  }
  LPoly& operator+=(const LPoly& o) { return *this = *this + o; }
  LPoly& operator-=(const LPoly& o) { return *this = *this - o; }

  bool operator==(const LPoly&) const = default;
};

template <>
struct ring_traits<LPoly> {
  static constexpr bool exact = true;
  static constexpr const char* name = "lpoly";
  static LPoly zero() { return LPoly(); }
  static LPoly one() { return LPoly(Rat(1)); }
  static LPoly from_rational(const Rat& q) { return LPoly(q); }
  static double abs2(const LPoly& p) {
    double s = 0.0;
    for (const Rat& v : p.c) s += ring_traits<Rat>::abs2(v);
    return s;
  }
  static LPoly random(Rng& rng, Dist d) {
    return LPoly(ring_traits<Rat>::random(rng, d));
  }
};

inline Rat rat_pow(const Rat& x, std::size_t e) {
  Rat p(1);
  for (std::size_t t = 0; t < e; ++t) p *= x;
  return p;
}

// Arbitrary-precision-approximate decomposition: lambda-polynomial
// coefficients whose order-`order` part of the computed outputs is the exact
// result, with lower orders vanishing.
struct ApaAlgorithm {
  std::string name;
  Target target;
  std::size_t rank = 0;
  std::size_t order = 0;
  Matrix<LPoly> U, V, W;

  void check_dims() const {
    if (U.rows() != target.alpha() || U.cols() != rank ||
        V.rows() != target.beta() || V.cols() != rank ||
        W.rows() != target.gamma() || W.cols() != rank)
      throw DimensionError("apa matrices do not match target dimensions");
  }

  // Largest attainable lambda-degree of a computed output entry.
  std::size_t degree() const {
    std::size_t best = 0;
    for (std::size_t q = 0; q < rank; ++q) {
      int du = 0, dv = 0, dw = 0;
      for (std::size_t r = 0; r < U.rows(); ++r) du = std::max(du, U(r, q).degree());
      for (std::size_t r = 0; r < V.rows(); ++r) dv = std::max(dv, V(r, q).degree());
      for (std::size_t r = 0; r < W.rows(); ++r) dw = std::max(dw, W(r, q).degree());
      if (du < 0 || dv < 0 || dw < 0) continue;
      best = std::max(best, static_cast<std::size_t>(du + dv + dw));
    }
    return best;
  }
};

using AnyAlg = std::variant<Decomposition, ApaAlgorithm>;

// Numeric instance at a fixed lambda. Outputs still carry the lambda^order
// factor; apa_apply divides it back out.
inline Decomposition instantiate(const ApaAlgorithm& alg, const Rat& lambda) {
  alg.check_dims();
  Decomposition d;
  d.name = alg.name + "@lambda";
  d.target = alg.target;
  d.rank = alg.rank;
  d.U = Matrix<Rat>(alg.U.rows(), alg.rank);
  d.V = Matrix<Rat>(alg.V.rows(), alg.rank);
  d.W = Matrix<Rat>(alg.W.rows(), alg.rank);
  for (std::size_t q = 0; q < alg.rank; ++q) {
    for (std::size_t r = 0; r < alg.U.rows(); ++r) d.U(r, q) = alg.U(r, q).eval(lambda);
    for (std::size_t r = 0; r < alg.V.rows(); ++r) d.V(r, q) = alg.V(r, q).eval(lambda);
    for (std::size_t r = 0; r < alg.W.rows(); ++r) d.W(r, q) = alg.W(r, q).eval(lambda);
  }
  return d;
}

template <typename T>
std::vector<Matrix<T>> apa_apply(
    const ApaAlgorithm& alg,
    const std::vector<std::pair<Matrix<T>, Matrix<T>>>& inputs, const Rat& lambda,
    OpCounter* oc = nullptr) {
  if (lambda == 0) throw DimensionError("apa application needs a nonzero lambda");
  Decomposition d = instantiate(alg, lambda);
  std::vector<Matrix<T>> outs = apply_disjoint(d, inputs, oc);
  if (alg.order == 0) return outs;
  T inv = ring_traits<T>::from_rational(Rat(1) / rat_pow(lambda, alg.order));
  for (Matrix<T>& m : outs) m = scale(m, inv, oc);
  return outs;
}

namespace detail {

inline Matrix<Rat> rat_inverse(Matrix<Rat> a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("inverse needs a square matrix");
  Matrix<Rat> inv = Matrix<Rat>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col) == 0) ++piv;
    if (piv == n) throw DimensionError("matrix is singular");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(col, j), a(piv, j));
      std::swap(inv(col, j), inv(piv, j));
    }
    Rat p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      Rat f = a(row, col);
      if (f == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(row, j) -= f * a(col, j);
        inv(row, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace detail

// Exact recovery: run the algorithm at `points` distinct nonzero lambdas
// (1,2,3,...), interpolate each output entry as a polynomial in lambda, and
// read off the order-s coefficient. Needs degree+1 points; any extras serve
// as exact consistency checks on the interpolated polynomials.
inline std::vector<Matrix<Rat>> apa_recover_exact(
    const ApaAlgorithm& alg,
    const std::vector<std::pair<Matrix<Rat>, Matrix<Rat>>>& inputs,
    std::size_t points = 0, OpCounter* oc = nullptr) {
  alg.check_dims();
  const std::size_t d = alg.degree();
  const std::size_t need = d + 1;
  if (points == 0) points = need;
  if (points < need)
    throw DimensionError("recovery needs at least degree+1 sample points");
  std::vector<Rat> lambdas(points);
  for (std::size_t t = 0; t < points; ++t) lambdas[t] = Rat(static_cast<long>(t + 1));
  std::vector<std::vector<Matrix<Rat>>> raw(points);
  for (std::size_t t = 0; t < points; ++t) {
    Decomposition inst = instantiate(alg, lambdas[t]);
    raw[t] = apply_disjoint(inst, inputs, oc);
  }
  Matrix<Rat> vand(need, need);
  for (std::size_t t = 0; t < need; ++t)
    for (std::size_t p = 0; p < need; ++p) vand(t, p) = rat_pow(lambdas[t], p);
  Matrix<Rat> vinv = detail::rat_inverse(vand);
  std::vector<Matrix<Rat>> out;
  for (std::size_t part = 0; part < raw[0].size(); ++part) {
    const Matrix<Rat>& shape = raw[0][part];
    Matrix<Rat> rec(shape.rows(), shape.cols());
    std::vector<Rat> coeffs(need);
    for (std::size_t r = 0; r < shape.rows(); ++r)
      for (std::size_t cc = 0; cc < shape.cols(); ++cc) {
        for (std::size_t p = 0; p < need; ++p) {
          Rat acc(0);
          for (std::size_t t = 0; t < need; ++t)
            acc += vinv(p, t) * raw[t][part](r, cc);
          coeffs[p] = acc;
        }
        for (std::size_t t = need; t < points; ++t) {
          Rat pred(0);
          for (std::size_t p = need; p > 0; --p)
            pred = pred * lambdas[t] + coeffs[p - 1];
          if (pred != raw[t][part](r, cc))
            throw Error("interpolated outputs fail the extra-point consistency check");
        }
        rec(r, cc) = coeffs[alg.order];
      }
    out.push_back(std::move(rec));
  }
  return out;
}

struct BorderViolation {
  std::size_t i = 0, j = 0, h = 0;
  std::size_t lambda_degree = 0;
  Rat got, want;
};

struct BorderValidationResult {
  bool ok = false;
  std::size_t equations = 0;
  std::size_t order = 0;
  std::size_t max_degree_seen = 0;
  std::vector<BorderViolation> violations;
};

// Symbolic border-rank check: for every index triple, the accumulated
// lambda-polynomial must vanish below order s and match the target tensor
// entry at order s exactly. Higher orders are unconstrained.
inline BorderValidationResult validate_border_rank(const ApaAlgorithm& alg) {
  alg.check_dims();
  const std::size_t alpha = alg.target.alpha(), beta = alg.target.beta(),
                    gamma = alg.target.gamma();
  auto key = [&](std::size_t i, std::size_t j, std::size_t h) {
    return i + alpha * (j + beta * h);
  };
  std::unordered_map<std::size_t, LPoly> acc;
  for (std::size_t q = 0; q < alg.rank; ++q)
    for (std::size_t ru = 0; ru < alpha; ++ru) {
      const LPoly& pu = alg.U(ru, q);
      if (pu.is_zero()) continue;
      for (std::size_t rv = 0; rv < beta; ++rv) {
        const LPoly& pv = alg.V(rv, q);
        if (pv.is_zero()) continue;
        LPoly puv = pu * pv;
        for (std::size_t rw = 0; rw < gamma; ++rw) {
          const LPoly& pw = alg.W(rw, q);
          if (pw.is_zero()) continue;
          acc[key(ru, rv, rw)] += puv * pw;
        }
      }
    }
  std::unordered_map<std::size_t, Rat> want;
  for (const TensorEntry& e : alg.target.entries()) want[key(e.i, e.j, e.h)] = e.value;
  BorderValidationResult res;
  res.equations = alpha * beta * gamma;
  res.order = alg.order;
  auto check_key = [&](std::size_t k, const LPoly& p, const Rat& target_value) {
    if (p.degree() > 0)
      res.max_degree_seen =
          std::max(res.max_degree_seen, static_cast<std::size_t>(p.degree()));
    std::size_t i = k % alpha;
    std::size_t j = (k / alpha) % beta;
    std::size_t h = k / (alpha * beta);
    for (std::size_t t = 0; t < alg.order; ++t)
      if (p.coeff(t) != 0)
        res.violations.push_back({i, j, h, t, p.coeff(t), Rat(0)});
    if (p.coeff(alg.order) != target_value)
      res.violations.push_back({i, j, h, alg.order, p.coeff(alg.order), target_value});
  };
  for (const auto& [k, p] : acc) {
    auto it = want.find(k);
    check_key(k, p, it == want.end() ? Rat(0) : it->second);
  }
  for (const auto& [k, v] : want)
    if (!acc.count(k)) check_key(k, LPoly(), v);
  res.ok = res.violations.empty();
  return res;
}

// Views an exact decomposition as an order-0 approximate algorithm with
// constant coefficients.
inline ApaAlgorithm embed_exact(const Decomposition& d) {
  d.check_dims();
  ApaAlgorithm alg;
  alg.name = d.name;
  alg.target = d.target;
  alg.rank = d.rank;
  alg.order = 0;
  alg.U = Matrix<LPoly>(d.U.rows(), d.rank);
  alg.V = Matrix<LPoly>(d.V.rows(), d.rank);
  alg.W = Matrix<LPoly>(d.W.rows(), d.rank);
  for (std::size_t q = 0; q < d.rank; ++q) {
    for (std::size_t r = 0; r < d.U.rows(); ++r) alg.U(r, q) = LPoly(d.U(r, q));
    for (std::size_t r = 0; r < d.V.rows(); ++r) alg.V(r, q) = LPoly(d.V(r, q));
    for (std::size_t r = 0; r < d.W.rows(); ++r) alg.W(r, q) = LPoly(d.W(r, q));
  }
  return alg;
}

// An order-0 algorithm with constant coefficients is already exact.
inline Decomposition lift_exact(const ApaAlgorithm& alg) {
  alg.check_dims();
  if (alg.order != 0)
    throw DimensionError("only order-0 algorithms lift to exact decompositions");
  Decomposition d;
  d.name = alg.name;
  d.target = alg.target;
  d.rank = alg.rank;
  d.U = Matrix<Rat>(alg.U.rows(), alg.rank);
  d.V = Matrix<Rat>(alg.V.rows(), alg.rank);
  d.W = Matrix<Rat>(alg.W.rows(), alg.rank);
  auto pick = [](const LPoly& p) {
    if (p.degree() > 0)
      throw DimensionError("algorithm still depends on lambda; cannot lift");
    return p.coeff(0);
  };
  for (std::size_t q = 0; q < alg.rank; ++q) {
    for (std::size_t r = 0; r < alg.U.rows(); ++r) d.U(r, q) = pick(alg.U(r, q));
    for (std::size_t r = 0; r < alg.V.rows(); ++r) d.V(r, q) = pick(alg.V(r, q));
    for (std::size_t r = 0; r < alg.W.rows(); ++r) d.W(r, q) = pick(alg.W(r, q));
  }
  return d;
}

// Degeneration of the aggregation pair: dropping the third correction family
// in exchange for lambda-weighted operands leaves the result on the
// order-2 coefficient. Border rank kmn + km + mn.
inline ApaAlgorithm apa_pair(std::size_t k, std::size_t m, std::size_t n) {
  if (k < 1 || m < 1 || n < 1)
    throw DimensionError("apa_pair needs positive dimensions");
  MmShape s1{k, m, n}, s2{m, n, k};
  ApaAlgorithm alg;
  alg.name = "apa_pair" + std::to_string(k) + "x" + std::to_string(m) + "x" +
             std::to_string(n);
  alg.target = Target::disjoint({s1, s2});
  alg.rank = k * m * n + k * m + m * n;
  alg.order = 2;
  alg.U = Matrix<LPoly>(alg.target.alpha(), alg.rank);
  alg.V = Matrix<LPoly>(alg.target.beta(), alg.rank);
  alg.W = Matrix<LPoly>(alg.target.gamma(), alg.rank);

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

  const LPoly one(Rat(1));
  const LPoly neg_one(Rat(-1));
  const LPoly lam = LPoly::term(Rat(1), 1);
  const LPoly lam2 = LPoly::term(Rat(1), 2);
  const LPoly neg_lam2 = LPoly::term(Rat(-1), 2);

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t h = 0; h < n; ++h) {
        std::size_t q = q_agg(i, j, h);
        alg.U(a_row(i, j), q) = one;
        alg.U(u_row(j, h), q) = lam;
        alg.V(b_row(j, h), q) = one;
        alg.V(v_row(h, i), q) = lam;
        alg.W(c1_row(i, h), q) = lam2;
        alg.W(c2_row(j, i), q) = one;
      }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t q = q_t1(i, j);
      alg.U(a_row(i, j), q) = one;
      for (std::size_t h = 0; h < n; ++h) {
        alg.V(b_row(j, h), q) = one;
        alg.V(v_row(h, i), q) = lam;
      }
      alg.W(c2_row(j, i), q) = neg_one;
    }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      std::size_t q = q_t2(j, h);
      alg.U(u_row(j, h), q) = lam;
      alg.V(b_row(j, h), q) = one;
      for (std::size_t i = 0; i < k; ++i) {
        alg.W(c1_row(i, h), q) = neg_lam2;
        alg.W(c2_row(j, i), q) = neg_one;
      }
    }
  return alg;
}

}  // namespace mmkit
