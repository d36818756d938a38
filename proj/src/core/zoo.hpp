#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aggregation.hpp"
#include "apa.hpp"
#include "common.hpp"
#include "decomposition.hpp"
#include "matrix.hpp"
#include "tensor.hpp"

namespace mmkit {

namespace detail {

inline Matrix<Rat> int_matrix(std::size_t rows, std::size_t cols,
                              const std::vector<std::vector<int>>& vals) {
  Matrix<Rat> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rat(vals[i][j]);
  return m;
}

}  // namespace detail

// Rank-7 recursion base for 2x2 blocks, the symmetric variant.
inline Decomposition strassen2x2() {
  Decomposition d;
  d.name = "strassen2x2";
  d.target = Target::mm(2, 2, 2);
  d.rank = 7;
  d.U = detail::int_matrix(4, 7, {{1, 0, 1, 0, 1, -1, 0},
                                  {0, 1, 0, 0, 0, 1, 0},
                                  {0, 0, 0, 0, 1, 0, 1},
                                  {1, 1, 0, 1, 0, 0, -1}});
  d.V = detail::int_matrix(4, 7, {{1, 1, 0, -1, 0, 1, 0},
                                  {0, 0, 0, 1, 0, 0, 1},
                                  {0, 0, 1, 0, 0, 1, 0},
                                  {1, 0, -1, 0, 1, 0, 1}});
  d.W = detail::int_matrix(4, 7, {{1, 0, 0, 1, -1, 0, 1},
                                  {0, 0, 1, 0, 1, 0, 0},
                                  {0, 1, 0, 1, 0, 0, 0},
                                  {1, -1, 1, 0, 0, 1, 0}});
  d.plan_a = EvalPlan{4,
                      {{false, 0, 3}, {false, 1, 3}, {false, 0, 2}, {true, 1, 0}, {true, 2, 3}},
                      {{4}, {5}, {0}, {3}, {6}, {7}, {8}}};
  d.plan_b = EvalPlan{4,
                      {{false, 0, 3}, {true, 2, 3}, {true, 1, 0}, {false, 0, 2}, {false, 1, 3}},
                      {{4}, {0}, {5}, {6}, {3}, {7}, {8}}};
  d.plan_c = EvalPlan{7,
                      {{false, 0, 3},
                       {false, 7, 6},
                       {true, 8, 4},
                       {false, 2, 4},
                       {false, 1, 3},
                       {false, 0, 2},
                       {false, 12, 5},
                       {true, 13, 1}},
                      {{9}, {10}, {11}, {14}}};
  return d;
}

// Rank-7 base with only 15 block additions when evaluated by its plans.
inline Decomposition winograd2x2() {
  Decomposition d;
  d.name = "winograd2x2";
  d.target = Target::mm(2, 2, 2);
  d.rank = 7;
  d.U = detail::int_matrix(4, 7, {{-1, 1, 0, 1, 0, 1, 0},
                                  {1, 0, 0, -1, 1, -1, 0},
                                  {0, 0, 1, 0, 0, 1, 0},
                                  {1, 0, 0, 0, 1, -1, 1}});
  d.V = detail::int_matrix(4, 7, {{1, 1, 0, 0, -1, 0, 1},
                                  {0, 0, 1, 0, 0, 0, -1},
                                  {-1, 0, 0, -1, 1, 0, -1},
                                  {1, 0, 0, 1, 0, 1, 1}});
  d.W = detail::int_matrix(4, 7, {{0, 1, 1, 0, 0, 0, 0},
                                  {1, 1, 0, 0, 1, 1, 0},
                                  {1, 1, 0, 1, 0, 0, -1},
                                  {1, 1, 0, 1, 1, 0, 0}});
  d.plan_a = EvalPlan{4,
                      {{false, 1, 3}, {true, 4, 0}, {true, 0, 1}, {true, 2, 5}},
                      {{5}, {0}, {2}, {6}, {4}, {7}, {3}}};
  d.plan_b = EvalPlan{4,
                      {{true, 2, 0}, {true, 3, 4}, {true, 3, 2}, {true, 5, 1}},
                      {{5}, {0}, {1}, {6}, {4}, {3}, {7}}};
  d.plan_c = EvalPlan{7,
                      {{false, 0, 1},
                       {false, 7, 3},
                       {false, 7, 4},
                       {false, 1, 2},
                       {false, 9, 5},
                       {true, 8, 6},
                       {false, 8, 4}},
                      {{10}, {11}, {12}, {13}}};
  return d;
}

// One product per scalar multiplication of the definition.
inline Decomposition straightforward_alg(std::size_t k, std::size_t m, std::size_t n) {
  if (k < 1 || m < 1 || n < 1)
    throw DimensionError("straightforward needs positive dimensions");
  MmShape s{k, m, n};
  Decomposition d;
  d.name = "straightforward" + std::to_string(k) + "x" + std::to_string(m) + "x" +
           std::to_string(n);
  d.target = Target::mm(s);
  d.rank = k * m * n;
  d.U = Matrix<Rat>(s.alpha(), d.rank);
  d.V = Matrix<Rat>(s.beta(), d.rank);
  d.W = Matrix<Rat>(s.gamma(), d.rank);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t h = 0; h < n; ++h) {
        std::size_t q = (i * m + j) * n + h;
        d.U(u_index(s, i, j), q) = 1;
        d.V(v_index(s, j, h), q) = 1;
        d.W(w_index(s, i, h), q) = 1;
      }
  return d;
}

// Multiplication of two complex numbers as a 2x2x2 tensor (real and
// imaginary parts), in three real products.
inline Decomposition complex_mult_rank3() {
  Decomposition d;
  d.name = "complex_mult_rank3";
  Tensor3 t(2, 2, 2);
  t.at(0, 0, 0) = 1;
  t.at(1, 1, 0) = -1;
  t.at(0, 1, 1) = 1;
  t.at(1, 0, 1) = 1;
  d.target = Target::raw(std::move(t));
  d.rank = 3;
  d.U = detail::int_matrix(2, 3, {{1, 0, 1}, {0, 1, 1}});
  d.V = detail::int_matrix(2, 3, {{1, 0, 1}, {0, 1, 1}});
  d.W = detail::int_matrix(2, 3, {{1, -1, 0}, {-1, -1, 1}});
  return d;
}

// The cyclically dual tensor: x0*y0 + x1*y1 on the first output and
// x0*y1 - x1*y0 on the second, again in three products.
inline Decomposition complex_mult_dual() {
  Decomposition d;
  d.name = "complex_mult_dual";
  Tensor3 t(2, 2, 2);
  t.at(0, 0, 0) = 1;
  t.at(1, 1, 0) = 1;
  t.at(0, 1, 1) = 1;
  t.at(1, 0, 1) = -1;
  d.target = Target::raw(std::move(t));
  d.rank = 3;
  d.U = detail::int_matrix(2, 3, {{1, 0, 1}, {0, 1, 1}});
  d.V = detail::int_matrix(2, 3, {{1, 1, 0}, {-1, 1, 1}});
  d.W = detail::int_matrix(2, 3, {{1, 0, 1}, {0, -1, 1}});
  return d;
}

struct BuiltinSpec {
  std::string base;
  std::vector<std::size_t> args;
};

inline BuiltinSpec parse_builtin_spec(const std::string& spec) {
  if (spec.empty()) throw ParseError("empty algorithm spec");
  BuiltinSpec out;
  std::size_t open = spec.find('(');
  if (open == std::string::npos) {
    out.base = spec;
    return out;
  }
  if (spec.back() != ')') throw ParseError("malformed algorithm spec: " + spec);
  out.base = spec.substr(0, open);
  std::string args = spec.substr(open + 1, spec.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= args.size() && !args.empty()) {
    std::size_t comma = args.find(',', pos);
    std::string tok = args.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    try {
      long v = std::stol(tok);
      if (v < 1) throw ParseError("algorithm dimensions must be positive: " + spec);
      out.args.push_back(static_cast<std::size_t>(v));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("malformed algorithm spec: " + spec);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::vector<std::string> builtin_names() {
  return {"strassen2x2",          "winograd2x2",
          "straightforward(k,m,n)", "complex_mult_rank3",
          "complex_mult_dual",    "aggregation_pair(k,m,n)",
          "aggregation_triple(n)", "apa_pair(k,m,n)"};
}

inline AnyAlg builtin_algorithm(const std::string& spec) {
  BuiltinSpec b = parse_builtin_spec(spec);
  auto want = [&](std::size_t n) {
    if (b.args.size() != n)
      throw ParseError("builtin " + b.base + " takes " + std::to_string(n) +
                       " dimension argument(s)");
  };
  if (b.base == "strassen2x2") {
    want(0);
    return strassen2x2();
  }
  if (b.base == "winograd2x2") {
    want(0);
    return winograd2x2();
  }
  if (b.base == "complex_mult_rank3") {
    want(0);
    return complex_mult_rank3();
  }
  if (b.base == "complex_mult_dual") {
    want(0);
    return complex_mult_dual();
  }
  if (b.base == "straightforward") {
    want(3);
    return straightforward_alg(b.args[0], b.args[1], b.args[2]);
  }
  if (b.base == "aggregation_pair") {
    want(3);
    return aggregation_pair(b.args[0], b.args[1], b.args[2]);
  }
  if (b.base == "aggregation_triple") {
    want(1);
    return aggregation_triple(b.args[0]);
  }
  if (b.base == "apa_pair") {
    want(3);
    return apa_pair(b.args[0], b.args[1], b.args[2]);
  }
  throw ParseError("unknown builtin algorithm: " + spec);
}

inline Decomposition builtin_decomposition(const std::string& spec) {
  AnyAlg alg = builtin_algorithm(spec);
  if (auto* d = std::get_if<Decomposition>(&alg)) return std::move(*d);
  throw ParseError("builtin " + spec + " is approximate; exact decomposition required");
}

}  // namespace mmkit
