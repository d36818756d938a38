#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"
#include "matrix.hpp"
#include "mm.hpp"
#include "opcount.hpp"
#include "tensor.hpp"

namespace mmkit {

// Classified coefficient of a linear form. Multiplication by 1 or -1 is free;
// anything else is a const_mul.
enum class CoeffCls { One, MinusOne, General };

struct LinTerm {
  std::size_t idx = 0;
  CoeffCls cls = CoeffCls::One;
  Rat coeff = Rat(1);
};

struct LinForm {
  std::vector<LinTerm> terms;
};

inline CoeffCls classify(const Rat& c) {
  if (c == 1) return CoeffCls::One;
  if (c == -1) return CoeffCls::MinusOne;
  return CoeffCls::General;
}

inline std::vector<LinForm> column_forms(const Matrix<Rat>& m) {
  std::vector<LinForm> out(m.cols());
  for (std::size_t q = 0; q < m.cols(); ++q)
    for (std::size_t row = 0; row < m.rows(); ++row) {
      const Rat& c = m(row, q);
      if (c != 0) out[q].terms.push_back({row, classify(c), c});
    }
  return out;
}

inline std::vector<LinForm> row_forms(const Matrix<Rat>& m) {
  std::vector<LinForm> out(m.rows());
  for (std::size_t row = 0; row < m.rows(); ++row)
    for (std::size_t q = 0; q < m.cols(); ++q) {
      const Rat& c = m(row, q);
      if (c != 0) out[row].terms.push_back({q, classify(c), c});
    }
  return out;
}

template <typename T>
T eval_form(const LinForm& f, const std::vector<T>& x, OpCounter* oc = nullptr) {
  using TR = ring_traits<T>;
  if (f.terms.empty()) return TR::zero();
  T acc;
  {
    const LinTerm& t0 = f.terms[0];
    if (t0.cls == CoeffCls::One) {
      acc = x[t0.idx];
    } else if (t0.cls == CoeffCls::MinusOne) {
      acc = -x[t0.idx];
    } else {
      acc = TR::from_rational(t0.coeff) * x[t0.idx];
      if (oc) oc->const_muls += 1;
    }
  }
  for (std::size_t t = 1; t < f.terms.size(); ++t) {
    const LinTerm& tm = f.terms[t];
    if (tm.cls == CoeffCls::One) {
      acc = acc + x[tm.idx];
    } else if (tm.cls == CoeffCls::MinusOne) {
      acc = acc - x[tm.idx];
    } else {
      acc = acc + TR::from_rational(tm.coeff) * x[tm.idx];
      if (oc) oc->const_muls += 1;
    }
    if (oc) oc->ring_adds += 1;
  }
  return acc;
}

template <typename T>
Matrix<T> eval_form_blocks(const LinForm& f, const std::vector<Matrix<T>>& x,
                           std::size_t rows, std::size_t cols,
                           OpCounter* oc = nullptr) {
  if (f.terms.empty()) return Matrix<T>(rows, cols);
  Matrix<T> acc;
  {
    const LinTerm& t0 = f.terms[0];
    if (t0.cls == CoeffCls::One) {
      acc = x[t0.idx];
    } else if (t0.cls == CoeffCls::MinusOne) {
      acc = negate(x[t0.idx]);
    } else {
      acc = scale(x[t0.idx], ring_traits<T>::from_rational(t0.coeff), oc);
    }
  }
  for (std::size_t t = 1; t < f.terms.size(); ++t) {
    const LinTerm& tm = f.terms[t];
    if (tm.cls == CoeffCls::One) {
      add_into(acc, x[tm.idx], oc);
    } else if (tm.cls == CoeffCls::MinusOne) {
      sub_into(acc, x[tm.idx], oc);
    } else {
      add_into(acc, scale(x[tm.idx], ring_traits<T>::from_rational(tm.coeff), oc), oc);
    }
  }
  return acc;
}

// Straight-line add/sub schedule. Registers 0..inputs-1 hold the inputs; each
// step appends one new register, and `out` picks the result registers.
struct EvalStep {
  bool subtract = false;
  std::size_t x = 0, y = 0;
};

struct OutRef {
  std::size_t reg = 0;
  bool negate = false;
};

struct EvalPlan {
  std::size_t inputs = 0;
  std::vector<EvalStep> steps;
  std::vector<OutRef> out;

  std::size_t adds() const { return steps.size(); }
};

template <typename T>
std::vector<T> run_plan(const EvalPlan& p, const std::vector<T>& inputs,
                        OpCounter* oc = nullptr) {
  std::vector<T> regs = inputs;
  regs.reserve(p.inputs + p.steps.size());
  for (const EvalStep& s : p.steps) {
    regs.push_back(s.subtract ? T(regs[s.x] - regs[s.y]) : T(regs[s.x] + regs[s.y]));
    if (oc) oc->ring_adds += 1;
  }
  std::vector<T> out;
  out.reserve(p.out.size());
  for (const OutRef& o : p.out) out.push_back(o.negate ? -regs[o.reg] : regs[o.reg]);
  return out;
}

template <typename T>
std::vector<Matrix<T>> run_plan_blocks(const EvalPlan& p,
                                       const std::vector<Matrix<T>>& inputs,
                                       OpCounter* oc = nullptr) {
  std::vector<Matrix<T>> regs = inputs;
  regs.reserve(p.inputs + p.steps.size());
  for (const EvalStep& s : p.steps) {
    regs.push_back(s.subtract ? sub(regs[s.x], regs[s.y], oc)
                              : add(regs[s.x], regs[s.y], oc));
  }
  std::vector<Matrix<T>> out;
  out.reserve(p.out.size());
  for (const OutRef& o : p.out)
    out.push_back(o.negate ? negate(regs[o.reg]) : regs[o.reg]);
  return out;
}

// Coefficient vectors each register computes over the plan inputs.
inline std::vector<std::vector<Rat>> plan_coefficients(const EvalPlan& p) {
  std::vector<std::vector<Rat>> regs;
  regs.reserve(p.inputs + p.steps.size());
  for (std::size_t i = 0; i < p.inputs; ++i) {
    std::vector<Rat> e(p.inputs, Rat(0));
    e[i] = Rat(1);
    regs.push_back(std::move(e));
  }
  for (const EvalStep& s : p.steps) {
    std::vector<Rat> v = regs[s.x];
    for (std::size_t i = 0; i < p.inputs; ++i)
      v[i] = s.subtract ? Rat(v[i] - regs[s.y][i]) : Rat(v[i] + regs[s.y][i]);
    regs.push_back(std::move(v));
  }
  std::vector<std::vector<Rat>> out;
  out.reserve(p.out.size());
  for (const OutRef& o : p.out) {
    std::vector<Rat> v = regs[o.reg];
    if (o.negate)
      for (Rat& c : v) c = -c;
    out.push_back(std::move(v));
  }
  return out;
}

// Plan outputs must reproduce the columns of M (operand-side plans).
inline bool plan_matches_columns(const EvalPlan& p, const Matrix<Rat>& m) {
  if (p.inputs != m.rows() || p.out.size() != m.cols()) return false;
  auto coeffs = plan_coefficients(p);
  for (std::size_t q = 0; q < m.cols(); ++q)
    for (std::size_t row = 0; row < m.rows(); ++row)
      if (coeffs[q][row] != m(row, q)) return false;
  return true;
}

// Plan outputs must reproduce the rows of M (output-side plans).
inline bool plan_matches_rows(const EvalPlan& p, const Matrix<Rat>& m) {
  if (p.inputs != m.cols() || p.out.size() != m.rows()) return false;
  auto coeffs = plan_coefficients(p);
  for (std::size_t row = 0; row < m.rows(); ++row)
    for (std::size_t q = 0; q < m.cols(); ++q)
      if (coeffs[row][q] != m(row, q)) return false;
  return true;
}

// Rank-r decomposition of a target tensor: column q of U, V, W gives the q-th
// product's operand forms and its contribution to the outputs.
struct Decomposition {
  std::string name;
  Target target;
  std::size_t rank = 0;
  Matrix<Rat> U, V, W;
  std::optional<EvalPlan> plan_a, plan_b, plan_c;

  bool has_plans() const { return plan_a && plan_b && plan_c; }
  bool recursable() const { return target.is_mm() && target.shape().square() && target.shape().k >= 2; }

  void check_dims() const {
    if (U.rows() != target.alpha() || U.cols() != rank ||
        V.rows() != target.beta() || V.cols() != rank ||
        W.rows() != target.gamma() || W.cols() != rank)
      throw DimensionError("decomposition matrices do not match target dimensions");
  }
};

inline bool plans_consistent(const Decomposition& d) {
  if (!d.has_plans()) return false;
  return plan_matches_columns(*d.plan_a, d.U) &&
         plan_matches_columns(*d.plan_b, d.V) &&
         plan_matches_rows(*d.plan_c, d.W);
}

template <typename T>
std::vector<T> apply_to_vectors(const Decomposition& d, const std::vector<T>& x,
                                const std::vector<T>& y, OpCounter* oc = nullptr,
                                bool use_plans = true) {
  d.check_dims();
  if (x.size() != d.target.alpha() || y.size() != d.target.beta())
    throw DimensionError("operand vectors do not match target dimensions");
  std::vector<T> l, r;
  if (use_plans && d.has_plans()) {
    l = run_plan(*d.plan_a, x, oc);
    r = run_plan(*d.plan_b, y, oc);
  } else {
    auto fu = column_forms(d.U);
    auto fv = column_forms(d.V);
    l.reserve(d.rank);
    r.reserve(d.rank);
    for (std::size_t q = 0; q < d.rank; ++q) {
      l.push_back(eval_form(fu[q], x, oc));
      r.push_back(eval_form(fv[q], y, oc));
    }
  }
  std::vector<T> p;
  p.reserve(d.rank);
  for (std::size_t q = 0; q < d.rank; ++q) {
    p.push_back(l[q] * r[q]);
    if (oc) oc->ring_muls += 1;
  }
  if (use_plans && d.has_plans()) return run_plan(*d.plan_c, p, oc);
  auto fw = row_forms(d.W);
  std::vector<T> z;
  z.reserve(d.target.gamma());
  for (std::size_t e = 0; e < d.target.gamma(); ++e)
    z.push_back(eval_form(fw[e], p, oc));
  return z;
}

template <typename T>
Matrix<T> apply(const Decomposition& d, const Matrix<T>& a, const Matrix<T>& b,
                OpCounter* oc = nullptr, bool use_plans = true) {
  if (!d.target.is_mm())
    throw DimensionError("apply needs a matrix multiplication target");
  const MmShape& s = d.target.shape();
  if (a.rows() != s.k || a.cols() != s.m || b.rows() != s.m || b.cols() != s.n)
    throw DimensionError("operand shapes do not match the target");
  std::vector<T> x(s.alpha()), y(s.beta());
  for (std::size_t i = 0; i < s.k; ++i)
    for (std::size_t j = 0; j < s.m; ++j) x[u_index(s, i, j)] = a(i, j);
  for (std::size_t j = 0; j < s.m; ++j)
    for (std::size_t h = 0; h < s.n; ++h) y[v_index(s, j, h)] = b(j, h);
  std::vector<T> z = apply_to_vectors(d, x, y, oc, use_plans);
  Matrix<T> c(s.k, s.n);
  for (std::size_t i = 0; i < s.k; ++i)
    for (std::size_t h = 0; h < s.n; ++h) c(i, h) = z[w_index(s, i, h)];
  return c;
}

template <typename T>
std::vector<Matrix<T>> apply_disjoint(
    const Decomposition& d,
    const std::vector<std::pair<Matrix<T>, Matrix<T>>>& inputs,
    OpCounter* oc = nullptr) {
  if (d.target.is_raw())
    throw DimensionError("apply_disjoint needs matrix multiplication targets");
  const auto& shapes = d.target.shapes();
  if (inputs.size() != shapes.size())
    throw DimensionError("wrong number of operand pairs for disjoint target");
  std::vector<T> x(d.target.alpha(), ring_traits<T>::zero());
  std::vector<T> y(d.target.beta(), ring_traits<T>::zero());
  for (std::size_t p = 0; p < shapes.size(); ++p) {
    const MmShape& s = shapes[p];
    const auto& [a, b] = inputs[p];
    if (a.rows() != s.k || a.cols() != s.m || b.rows() != s.m || b.cols() != s.n)
      throw DimensionError("operand shapes do not match the target");
    std::size_t ou = d.target.u_offset(p), ov = d.target.v_offset(p);
    for (std::size_t i = 0; i < s.k; ++i)
      for (std::size_t j = 0; j < s.m; ++j) x[ou + u_index(s, i, j)] = a(i, j);
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t h = 0; h < s.n; ++h) y[ov + v_index(s, j, h)] = b(j, h);
  }
  std::vector<T> z = apply_to_vectors(d, x, y, oc, false);
  std::vector<Matrix<T>> out;
  out.reserve(shapes.size());
  for (std::size_t p = 0; p < shapes.size(); ++p) {
    const MmShape& s = shapes[p];
    std::size_t ow = d.target.w_offset(p);
    Matrix<T> c(s.k, s.n);
    for (std::size_t i = 0; i < s.k; ++i)
      for (std::size_t h = 0; h < s.n; ++h) c(i, h) = z[ow + w_index(s, i, h)];
    out.push_back(std::move(c));
  }
  return out;
}

namespace detail {

template <typename T>
Matrix<T> recursive_step(const Decomposition& d, const Matrix<T>& a,
                         const Matrix<T>& b, std::size_t cutoff, OpCounter* oc,
                         bool use_plans) {
  const std::size_t n = a.rows();
  if (n <= cutoff) return straightforward_mm(a, b, oc);
  const MmShape& s = d.target.shape();
  const std::size_t n0 = s.k;
  const std::size_t bs = n / n0;
  std::vector<Matrix<T>> x(s.alpha()), y(s.beta());
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n0; ++j) {
      x[u_index(s, i, j)] = block(a, i * bs, j * bs, bs, bs);
      y[v_index(s, j, i)] = block(b, j * bs, i * bs, bs, bs);
    }
  std::vector<Matrix<T>> l, r;
  if (use_plans && d.has_plans()) {
    l = run_plan_blocks(*d.plan_a, x, oc);
    r = run_plan_blocks(*d.plan_b, y, oc);
  } else {
    auto fu = column_forms(d.U);
    auto fv = column_forms(d.V);
    l.reserve(d.rank);
    r.reserve(d.rank);
    for (std::size_t q = 0; q < d.rank; ++q) {
      l.push_back(eval_form_blocks(fu[q], x, bs, bs, oc));
      r.push_back(eval_form_blocks(fv[q], y, bs, bs, oc));
    }
  }
  std::vector<Matrix<T>> p;
  p.reserve(d.rank);
  for (std::size_t q = 0; q < d.rank; ++q)
    p.push_back(recursive_step(d, l[q], r[q], cutoff, oc, use_plans));
  std::vector<Matrix<T>> z;
  if (use_plans && d.has_plans()) {
    z = run_plan_blocks(*d.plan_c, p, oc);
  } else {
    auto fw = row_forms(d.W);
    z.reserve(d.target.gamma());
    for (std::size_t e = 0; e < d.target.gamma(); ++e)
      z.push_back(eval_form_blocks(fw[e], p, bs, bs, oc));
  }
  Matrix<T> c(n, n);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t h = 0; h < n0; ++h)
      place(c, i * bs, h * bs, z[w_index(s, i, h)]);
  return c;
}

}  // namespace detail

// Recursive block application of a square decomposition. Inputs of order N are
// zero-padded up to the next power of the base order, recursed on until blocks
// reach the cutoff, then trimmed back to N.
template <typename T>
Matrix<T> apply_recursive(const Decomposition& d, const Matrix<T>& a,
                          const Matrix<T>& b, std::size_t cutoff,
                          OpCounter* oc = nullptr, bool use_plans = true) {
  if (!d.recursable())
    throw DimensionError("recursive application needs a square base case of order >= 2");
  if (cutoff < 1) throw DimensionError("cutoff must be at least 1");
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw DimensionError("recursive application needs equal square operands");
  d.check_dims();
  const std::size_t n = a.rows();
  if (n == 0) return Matrix<T>(0, 0);
  if (n <= cutoff) return straightforward_mm(a, b, oc);
  const std::size_t n0 = d.target.shape().k;
  std::size_t padded = 1;
  while (padded < n) padded *= n0;
  if (padded == n) {
    return detail::recursive_step(d, a, b, cutoff, oc, use_plans);
  }
  Matrix<T> pa = pad(a, padded, padded);
  Matrix<T> pb = pad(b, padded, padded);
  Matrix<T> pc = detail::recursive_step(d, pa, pb, cutoff, oc, use_plans);
  return crop(pc, n, n);
}

struct BrentViolation {
  std::size_t i = 0, j = 0, h = 0;
  Rat residual;
};

struct ValidationResult {
  bool ok = false;
  std::size_t equations = 0;
  Rat max_residual;
  std::vector<BrentViolation> violations;
};

// Exact check of the Brent equations: for every index triple, the products'
// accumulated coefficient must equal the target tensor entry.
inline ValidationResult validate_decomposition(const Decomposition& d) {
  d.check_dims();
  const std::size_t alpha = d.target.alpha(), beta = d.target.beta(),
                    gamma = d.target.gamma();
  auto key = [&](std::size_t i, std::size_t j, std::size_t h) {
    return i + alpha * (j + beta * h);
  };
  std::unordered_map<std::size_t, Rat> residual;
  auto fu = column_forms(d.U);
  auto fv = column_forms(d.V);
  auto fw = column_forms(d.W);
  for (std::size_t q = 0; q < d.rank; ++q)
    for (const LinTerm& tu : fu[q].terms)
      for (const LinTerm& tv : fv[q].terms)
        for (const LinTerm& tw : fw[q].terms)
          residual[key(tu.idx, tv.idx, tw.idx)] += tu.coeff * tv.coeff * tw.coeff;
  for (const TensorEntry& e : d.target.entries()) residual[key(e.i, e.j, e.h)] -= e.value;
  ValidationResult res;
  res.equations = alpha * beta * gamma;
  res.max_residual = Rat(0);
  for (const auto& [k, v] : residual) {
    if (v == 0) continue;
    std::size_t i = k % alpha;
    std::size_t j = (k / alpha) % beta;
    std::size_t h = k / (alpha * beta);
    res.violations.push_back({i, j, h, v});
    Rat a = v < 0 ? Rat(-v) : v;
    if (a > res.max_residual) res.max_residual = a;
  }
  res.ok = res.violations.empty();
  return res;
}

struct FloatValidationResult {
  bool ok = false;
  std::size_t equations = 0;
  double max_residual = 0.0;
  std::size_t violation_count = 0;
};

inline FloatValidationResult validate_decomposition_f64(const Decomposition& d,
                                                        double tol = 1e-9) {
  d.check_dims();
  const std::size_t alpha = d.target.alpha(), beta = d.target.beta(),
                    gamma = d.target.gamma();
  auto key = [&](std::size_t i, std::size_t j, std::size_t h) {
    return i + alpha * (j + beta * h);
  };
  std::unordered_map<std::size_t, double> residual;
  auto fu = column_forms(d.U);
  auto fv = column_forms(d.V);
  auto fw = column_forms(d.W);
  for (std::size_t q = 0; q < d.rank; ++q)
    for (const LinTerm& tu : fu[q].terms)
      for (const LinTerm& tv : fv[q].terms)
        for (const LinTerm& tw : fw[q].terms)
          residual[key(tu.idx, tv.idx, tw.idx)] +=
              static_cast<double>(tu.coeff) * static_cast<double>(tv.coeff) *
              static_cast<double>(tw.coeff);
  for (const TensorEntry& e : d.target.entries())
    residual[key(e.i, e.j, e.h)] -= static_cast<double>(e.value);
  FloatValidationResult res;
  res.equations = alpha * beta * gamma;
  for (const auto& [k, v] : residual) {
    double a = v < 0 ? -v : v;
    if (a > res.max_residual) res.max_residual = a;
    if (a > tol) ++res.violation_count;
  }
  res.ok = res.violation_count == 0;
  return res;
}

struct Census {
  std::size_t rank = 0;
  std::size_t nnz_u = 0, nnz_v = 0, nnz_w = 0;
  std::size_t adds_u = 0, adds_v = 0, adds_w = 0;
  std::size_t const_muls_u = 0, const_muls_v = 0, const_muls_w = 0;

  std::size_t adds_total() const { return adds_u + adds_v + adds_w; }
  std::size_t const_muls_total() const {
    return const_muls_u + const_muls_v + const_muls_w;
  }
};

// Structural operation bounds read off the coefficient matrices: each linear
// form with t nonzero terms costs t-1 additions, and every coefficient outside
// {0,1,-1} costs one const_mul.
inline Census operation_census(const Decomposition& d) {
  Census c;
  c.rank = d.rank;
  auto tally = [](const std::vector<LinForm>& forms, std::size_t& nnz,
                  std::size_t& adds, std::size_t& cmuls) {
    for (const LinForm& f : forms) {
      nnz += f.terms.size();
      if (!f.terms.empty()) adds += f.terms.size() - 1;
      for (const LinTerm& t : f.terms)
        if (t.cls == CoeffCls::General) ++cmuls;
    }
  };
  tally(column_forms(d.U), c.nnz_u, c.adds_u, c.const_muls_u);
  tally(column_forms(d.V), c.nnz_v, c.adds_v, c.const_muls_v);
  tally(row_forms(d.W), c.nnz_w, c.adds_w, c.const_muls_w);
  return c;
}

// Trace of A*B*D computed directly; equals the trilinear form the
// decomposition evaluates when it is valid.
inline Rat trace_abd(const Matrix<Rat>& a, const Matrix<Rat>& b,
                     const Matrix<Rat>& d) {
  Matrix<Rat> ab = matmul(a, b);
  Rat tr(0);
  for (std::size_t i = 0; i < ab.rows(); ++i)
    for (std::size_t h = 0; h < ab.cols(); ++h) tr += ab(i, h) * d(h, i);
  return tr;
}

// Value of sum_q <U_q,vec(A)><V_q,vec(B)><W_q,vec(D)> for an MM target.
inline Rat trilinear_value(const Decomposition& dec, const Matrix<Rat>& a,
                           const Matrix<Rat>& b, const Matrix<Rat>& d) {
  if (!dec.target.is_mm())
    throw DimensionError("trilinear evaluation needs a matrix multiplication target");
  const MmShape& s = dec.target.shape();
  if (a.rows() != s.k || a.cols() != s.m || b.rows() != s.m ||
      b.cols() != s.n || d.rows() != s.n || d.cols() != s.k)
    throw DimensionError("operand shapes do not match the target");
  std::vector<Rat> x(s.alpha()), y(s.beta()), z(s.gamma());
  for (std::size_t i = 0; i < s.k; ++i)
    for (std::size_t j = 0; j < s.m; ++j) x[u_index(s, i, j)] = a(i, j);
  for (std::size_t j = 0; j < s.m; ++j)
    for (std::size_t h = 0; h < s.n; ++h) y[v_index(s, j, h)] = b(j, h);
  for (std::size_t h = 0; h < s.n; ++h)
    for (std::size_t i = 0; i < s.k; ++i) z[w_index(s, i, h)] = d(h, i);
  auto fu = column_forms(dec.U);
  auto fv = column_forms(dec.V);
  auto fw = column_forms(dec.W);
  Rat total(0);
  for (std::size_t q = 0; q < dec.rank; ++q)
    total += eval_form(fu[q], x) * eval_form(fv[q], y) * eval_form(fw[q], z);
  return total;
}

}  // namespace mmkit
