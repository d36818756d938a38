#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "tensor.hpp"

namespace mmkit {

// omega implied by a rank-r decomposition of MM(n0,n0,n0): log_{n0} r.
inline double exponent_square(std::size_t n0, std::size_t r) {
  if (n0 < 2) throw DimensionError("square exponent needs base order >= 2");
  if (r < 1) throw DimensionError("rank must be positive");
  return std::log(static_cast<double>(r)) / std::log(static_cast<double>(n0));
}

// omega implied by a rank-r decomposition of MM(k,m,n) after symmetrizing the
// three cyclic duals: 3 log r / log(kmn).
inline double exponent_rect(std::size_t k, std::size_t m, std::size_t n,
                            std::size_t r) {
  double vol = static_cast<double>(k) * static_cast<double>(m) *
               static_cast<double>(n);
  if (vol <= 1.0) throw DimensionError("rectangular exponent needs volume > 1");
  if (r < 1) throw DimensionError("rank must be positive");
  return 3.0 * std::log(static_cast<double>(r)) / std::log(vol);
}

struct TauResult {
  double tau = 0.0;
  double omega_bound = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Bisection solve of sum_i (k_i m_i n_i)^tau = r on [0,3]. A rank-r
// decomposition of the disjoint union then bounds omega by 3*tau.
inline TauResult schonhage_tau(const std::vector<MmShape>& shapes, std::size_t rank,
                               double tol = 1e-10) {
  if (shapes.empty()) throw DimensionError("tau needs at least one shape");
  std::vector<double> vols;
  for (const MmShape& s : shapes) {
    if (s.volume() < 1) throw DimensionError("shapes need positive volume");
    vols.push_back(static_cast<double>(s.volume()));
  }
  const double r = static_cast<double>(rank);
  auto f = [&](double t) {
    double s = 0.0;
    for (double v : vols) s += std::pow(v, t);
    return s - r;
  };
  if (f(0.0) > 0.0)
    throw DimensionError("rank is below the number of disjoint problems");
  if (f(3.0) < 0.0)
    throw DimensionError("rank exceeds the total volume cubed; no bound within [0,3]");
  double lo = 0.0, hi = 3.0;
  int it = 0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  TauResult res;
  res.tau = 0.5 * (lo + hi);
  res.omega_bound = 3.0 * res.tau;
  res.residual = std::fabs(f(res.tau));
  res.iterations = it;
  return res;
}

enum class PanFamily { P1978, P1980, P1981, P1982 };

inline int pan_year(PanFamily f) {
  switch (f) {
    case PanFamily::P1978: return 1978;
    case PanFamily::P1980: return 1980;
    case PanFamily::P1981: return 1981;
    default: return 1982;
  }
}

inline const char* pan_formula(PanFamily f) {
  switch (f) {
    case PanFamily::P1978: return "(n^3+18n^2-4n)/3";
    case PanFamily::P1980: return "(2n^3+27n^2-2n)/6";
    case PanFamily::P1981: return "(n^3+12n^2+26n)/3";
    default: return "(4n^3+45n^2+128n+108)/12";
  }
}

inline long long pan_canonical_n(PanFamily f) {
  switch (f) {
    case PanFamily::P1978: return 70;
    case PanFamily::P1980: return 48;
    case PanFamily::P1981: return 46;
    default: return 44;
  }
}

inline double pan_published_bound(PanFamily f) {
  switch (f) {
    case PanFamily::P1978: return 2.7952;
    case PanFamily::P1980: return 2.7802;
    case PanFamily::P1981: return 2.7762;
    default: return 2.7734;
  }
}

// Exact rank of the family's construction at order n; the quotient must be an
// integer or the order is outside the family's domain.
inline long long pan_rank(PanFamily f, long long n) {
  if (n < 2) throw DimensionError("rank formulas need n >= 2");
  long long num = 0, den = 1;
  switch (f) {
    case PanFamily::P1978:
      num = n * n * n + 18 * n * n - 4 * n;
      den = 3;
      break;
    case PanFamily::P1980:
      num = 2 * n * n * n + 27 * n * n - 2 * n;
      den = 6;
      break;
    case PanFamily::P1981:
      num = n * n * n + 12 * n * n + 26 * n;
      den = 3;
      break;
    default:
      num = 4 * n * n * n + 45 * n * n + 128 * n + 108;
      den = 12;
      break;
  }
  if (num % den != 0)
    throw DimensionError("rank formula is not integral at n=" + std::to_string(n));
  return num / den;
}

struct PanRow {
  int year = 0;
  std::string formula;
  long long n = 0;
  long long rank = 0;
  double omega = 0.0;
  double published_bound = 0.0;
  std::string note;
};

inline PanRow pan_row(PanFamily f, long long n) {
  PanRow row;
  row.year = pan_year(f);
  row.formula = pan_formula(f);
  row.n = n;
  row.rank = pan_rank(f, n);
  row.omega = exponent_square(static_cast<std::size_t>(n),
                              static_cast<std::size_t>(row.rank));
  row.published_bound = pan_published_bound(f);
  if (f == PanFamily::P1978) row.note = "also quoted as 2.7962";
  return row;
}

inline std::vector<PanRow> pan_table() {
  std::vector<PanRow> rows;
  for (PanFamily f : {PanFamily::P1978, PanFamily::P1980, PanFamily::P1981,
                      PanFamily::P1982})
    rows.push_back(pan_row(f, pan_canonical_n(f)));
  return rows;
}

}  // namespace mmkit
