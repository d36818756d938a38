#include "scenarios.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "json.hpp"

#include "aggregation.hpp"
#include "apa.hpp"
#include "common.hpp"
#include "decomposition.hpp"
#include "exponents.hpp"
#include "fftconv.hpp"
#include "format.hpp"
#include "matrix.hpp"
#include "mm.hpp"
#include "randomized.hpp"
#include "tensor.hpp"
#include "transforms.hpp"
#include "zoo.hpp"

namespace mmkit {

namespace {

using json = nlohmann::ordered_json;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Rat parse_rat_flexible(const std::string& tok) {
  std::size_t dot = tok.find('.');
  if (dot == std::string::npos) return rat_from_string(tok);
  std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
  std::size_t frac = tok.size() - dot - 1;
  Rat num = rat_from_string(digits.empty() ? "0" : digits);
  BigInt den(1);
  for (std::size_t t = 0; t < frac; ++t) den *= 10;
  return num / Rat(den);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string::npos ? std::string::npos
                                                          : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::size_t parse_size(const std::string& tok, const char* what) {
  try {
    long long v = std::stoll(tok);
    if (v < 0) throw ParseError(std::string(what) + " must be nonnegative");
    return static_cast<std::size_t>(v);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(std::string("malformed ") + what + ": " + tok);
  }
}

std::vector<MmShape> parse_shape_list(const std::string& s) {
  std::vector<MmShape> shapes;
  for (const std::string& part : split(s, ',')) {
    auto dims = split(part, 'x');
    if (dims.size() != 3)
      throw ParseError("shape must be kxmxn: " + part);
    shapes.push_back({parse_size(dims[0], "dimension"), parse_size(dims[1], "dimension"),
                      parse_size(dims[2], "dimension")});
  }
  if (shapes.empty()) throw ParseError("empty shape list");
  return shapes;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const std::string& part : split(s, ','))
    out.push_back(parse_size(part, "size"));
  if (out.empty()) throw ParseError("empty size list");
  return out;
}

AnyAlg resolve_algorithm(const json& p) {
  if (p.contains("file")) return load_algorithm(p["file"].get<std::string>());
  if (p.contains("alg")) return builtin_algorithm(p["alg"].get<std::string>());
  throw ParseError("no algorithm given; pass a builtin name or a file path");
}

json shape_json(const MmShape& s) { return json::array({s.k, s.m, s.n}); }

json target_json(const Target& t) {
  json out;
  if (t.is_mm()) {
    out["kind"] = "mm";
    out["dims"] = shape_json(t.shape());
  } else if (t.is_disjoint()) {
    out["kind"] = "disjoint";
    json dims = json::array();
    for (const MmShape& s : t.shapes()) dims.push_back(shape_json(s));
    out["dims"] = dims;
  } else {
    out["kind"] = "tensor";
    out["dims"] = json::array({t.alpha(), t.beta(), t.gamma()});
  }
  return out;
}

json census_json(const Census& c) {
  json out;
  out["rank"] = c.rank;
  out["nnz_u"] = c.nnz_u;
  out["nnz_v"] = c.nnz_v;
  out["nnz_w"] = c.nnz_w;
  out["adds_u"] = c.adds_u;
  out["adds_v"] = c.adds_v;
  out["adds_w"] = c.adds_w;
  out["adds_total"] = c.adds_total();
  out["const_muls_total"] = c.const_muls_total();
  return out;
}

json counter_json(const OpCounter& oc) {
  json out;
  out["ring_muls"] = oc.ring_muls;
  out["ring_adds"] = oc.ring_adds;
  out["const_muls"] = oc.const_muls;
  return out;
}

struct RingTag {
  std::string name;
};

template <typename F>
json with_ring(const std::string& ring, F&& f) {
  if (ring == "f64") return f(double{});
  if (ring == "complex") return f(C64{});
  if (ring == "rational") return f(Rat{});
  if (ring == "bigint") return f(BigInt{});
  throw ParseError("unknown ring: " + ring + " (expected f64, complex, rational, bigint)");
}

template <typename T>
double exact_or_close(const Matrix<T>& got, const Matrix<T>& want) {
  return max_abs_diff(got, want);
}

// ---------------------------------------------------------------- multiply

json scenario_multiply(const json& p) {
  const std::string alg_name = p.value("alg", std::string("strassen2x2"));
  const std::string ring = p.value("ring", std::string("f64"));
  const std::uint64_t seed = p.value("seed", 1ULL);
  const int reps = std::max(1, p.value("reps", 1));
  const std::size_t cutoff = p.value("cutoff", 1ULL);
  const bool cutoff_given = p.contains("cutoff");

  json report;
  report["scenario"] = "multiply";
  report["alg"] = alg_name;
  report["ring"] = ring;
  report["seed"] = seed;

  if (alg_name == "commutative" && !p.contains("file")) {
    if (cutoff_given)
      throw ParseError(
          "the commutative scheme shares row and column corrections across output "
          "entries, so it is not a bilinear decomposition and cannot be recursed; "
          "drop --cutoff");
    const std::size_t n = p.value("n", 4ULL);
    return with_ring(ring, [&](auto tag) {
      using T = decltype(tag);
      Rng rng(Rng::derive(seed, 0));
      Matrix<T> a = random_matrix<T>(n, n, rng);
      Matrix<T> b = random_matrix<T>(n, n, rng);
      OpCounter oc;
      Matrix<T> c = commutative_mm_even(a, b, &oc);
      Matrix<T> ref = straightforward_mm(a, b);
      double err = exact_or_close(c, ref);
      report["n"] = n;
      report["counts"] = counter_json(oc);
      report["expected_ring_muls"] = n * n * n / 2 + n * n;
      report["expected_ring_adds"] = 3 * n * n * n / 2 + 2 * n * n - 2 * n;
      report["max_error"] = err;
      bool ok = err <= (ring_traits<T>::exact ? 0.0 : 1e-9);
      ok = ok && oc.ring_muls == static_cast<long long>(n * n * n / 2 + n * n);
      ok = ok &&
           oc.ring_adds == static_cast<long long>(3 * n * n * n / 2 + 2 * n * n - 2 * n);
      report["ok"] = ok;
      report["rows"] = json::array({json{{"method", "commutative"},
                                         {"n", n},
                                         {"ring_muls", oc.ring_muls},
                                         {"ring_adds", oc.ring_adds},
                                         {"max_error", err}}});
      return report;
    });
  }

  if (alg_name == "straightforward" && !p.contains("file")) {
    std::size_t n = p.value("n", 4ULL);
    std::size_t k = p.value("k", n), m = p.value("m", n);
    n = p.value("n", n);
    return with_ring(ring, [&](auto tag) {
      using T = decltype(tag);
      Rng rng(Rng::derive(seed, 0));
      Matrix<T> a = random_matrix<T>(k, m, rng);
      Matrix<T> b = random_matrix<T>(m, n, rng);
      OpCounter oc;
      Matrix<T> c = straightforward_mm(a, b, &oc);
      report["dims"] = json::array({k, m, n});
      report["counts"] = counter_json(oc);
      report["max_error"] = 0.0;
      report["ok"] = true;
      report["rows"] = json::array({json{{"method", "straightforward"},
                                         {"ring_muls", oc.ring_muls},
                                         {"ring_adds", oc.ring_adds}}});
      return report;
    });
  }

  AnyAlg alg = resolve_algorithm(p);
  report["name"] = algorithm_name(alg);
  report["target"] = target_json(algorithm_target(alg));
  report["rank"] = algorithm_rank(alg);

  if (const auto* apa = std::get_if<ApaAlgorithm>(&alg)) {
    const Rat lambda = parse_rat_flexible(p.value("lambda", std::string("1/100")));
    const std::size_t points = p.value("points", 0ULL);
    report["order"] = apa->order;
    report["degree"] = apa->degree();
    Rng rng(Rng::derive(seed, 0));
    std::vector<std::pair<Matrix<Rat>, Matrix<Rat>>> exact_inputs;
    for (const MmShape& s : apa->target.shapes()) {
      Matrix<Rat> a = random_matrix<Rat>(s.k, s.m, rng);
      Matrix<Rat> b = random_matrix<Rat>(s.m, s.n, rng);
      exact_inputs.emplace_back(std::move(a), std::move(b));
    }
    std::vector<Matrix<Rat>> reference;
    for (const auto& [a, b] : exact_inputs)
      reference.push_back(straightforward_mm(a, b));

    if (ring == "rational") {
      OpCounter oc;
      std::vector<Matrix<Rat>> rec = apa_recover_exact(*apa, exact_inputs, points, &oc);
      bool ok = true;
      double err = 0.0;
      for (std::size_t t = 0; t < rec.size(); ++t) {
        if (!(rec[t] == reference[t])) ok = false;
        err = std::max(err, max_abs_diff(rec[t], reference[t]));
      }
      report["mode"] = "exact_recovery";
      report["points"] =
          points == 0 ? static_cast<std::size_t>(apa->degree() + 1) : points;
      report["counts"] = counter_json(oc);
      report["max_error"] = err;
      report["ok"] = ok;
      report["rows"] = json::array(
          {json{{"mode", "exact_recovery"}, {"max_error", err}, {"exact", ok}}});
      return report;
    }
    if (ring != "f64")
      throw ParseError("approximate algorithms run with --ring f64 or --ring rational");
    std::vector<std::pair<Matrix<double>, Matrix<double>>> inputs;
    for (const auto& [a, b] : exact_inputs)
      inputs.emplace_back(materialize<double>(a), materialize<double>(b));
    json rows = json::array();
    double err_at_lambda = 0.0;
    OpCounter oc;
    for (const Rat& lam : {lambda, Rat(lambda / 2)}) {
      OpCounter trial_oc;
      std::vector<Matrix<double>> outs = apa_apply(*apa, inputs, lam, &trial_oc);
      double err = 0.0;
      for (std::size_t t = 0; t < outs.size(); ++t)
        err = std::max(err, max_abs_diff(outs[t], materialize<double>(reference[t])));
      if (lam == lambda) {
        err_at_lambda = err;
        oc = trial_oc;
      }
      rows.push_back(json{{"lambda", rat_to_string(lam)}, {"max_error", err}});
    }
    report["mode"] = "approximate";
    report["lambda"] = rat_to_string(lambda);
    report["counts"] = counter_json(oc);
    report["max_error"] = err_at_lambda;
    report["ok"] = std::isfinite(err_at_lambda);
    report["rows"] = rows;
    return report;
  }

  const Decomposition& d = std::get<Decomposition>(alg);
  return with_ring(ring, [&](auto tag) {
    using T = decltype(tag);
    Rng rng(Rng::derive(seed, 0));
    json rows = json::array();
    OpCounter oc;
    double err = 0.0;

    if (d.target.is_raw()) {
      const Tensor3& ten = d.target.tensor();
      std::vector<T> x(ten.alpha()), y(ten.beta());
      for (T& v : x) v = ring_traits<T>::random(rng, Dist::IntUniform);
      for (T& v : y) v = ring_traits<T>::random(rng, Dist::IntUniform);
      std::vector<T> z = apply_to_vectors(d, x, y, &oc);
      std::vector<T> ref(ten.gamma(), ring_traits<T>::zero());
      for (const TensorEntry& e : ten.entries())
        ref[e.h] = ref[e.h] + ring_traits<T>::from_rational(e.value) * x[e.i] * y[e.j];
      for (std::size_t h = 0; h < ref.size(); ++h)
        err = std::max(err, std::sqrt(ring_traits<T>::abs2(z[h] - ref[h])));
      report["mode"] = "tensor_apply";
      rows.push_back(json{{"mode", "tensor_apply"}, {"max_error", err}});
    } else if (d.target.is_disjoint()) {
      std::vector<std::pair<Matrix<T>, Matrix<T>>> inputs;
      for (const MmShape& s : d.target.shapes())
        inputs.emplace_back(random_matrix<T>(s.k, s.m, rng),
                            random_matrix<T>(s.m, s.n, rng));
      std::vector<Matrix<T>> outs = apply_disjoint(d, inputs, &oc);
      for (std::size_t t = 0; t < outs.size(); ++t) {
        Matrix<T> ref = straightforward_mm(inputs[t].first, inputs[t].second);
        err = std::max(err, exact_or_close(outs[t], ref));
      }
      report["mode"] = "disjoint_apply";
      rows.push_back(json{{"mode", "disjoint_apply"}, {"max_error", err}});
    } else {
      const MmShape& s = d.target.shape();
      const std::size_t n = p.value("n", 0ULL);
      if (n == 0 || (s.square() && n == s.k) ||
          (p.contains("k") || p.contains("m"))) {
        std::size_t kk = p.value("k", s.k), mm = p.value("m", s.m),
                    nn = p.value("n", s.n);
        if (kk != s.k || mm != s.m || nn != s.n)
          throw DimensionError(
              "operand dimensions do not match the base case; pass a square --n to recurse");
        Matrix<T> a = random_matrix<T>(s.k, s.m, rng);
        Matrix<T> b = random_matrix<T>(s.m, s.n, rng);
        for (int rep = 0; rep < reps; ++rep) {
          OpCounter rep_oc;
          double t0 = now_ms();
          Matrix<T> c = apply(d, a, b, &rep_oc);
          double t1 = now_ms();
          if (rep == 0) {
            oc = rep_oc;
            err = exact_or_close(c, straightforward_mm(a, b));
          }
          rows.push_back(json{{"rep", rep}, {"wall_ms", t1 - t0}});
        }
        report["mode"] = "base_apply";
      } else {
        if (!d.recursable())
          throw DimensionError(
              "algorithm has a rectangular base case and cannot recurse on square inputs");
        Matrix<T> a = random_matrix<T>(n, n, rng);
        Matrix<T> b = random_matrix<T>(n, n, rng);
        for (int rep = 0; rep < reps; ++rep) {
          OpCounter rep_oc;
          double t0 = now_ms();
          Matrix<T> c = apply_recursive(d, a, b, cutoff, &rep_oc);
          double t1 = now_ms();
          if (rep == 0) {
            oc = rep_oc;
            err = exact_or_close(c, straightforward_mm(a, b));
          }
          rows.push_back(json{{"rep", rep}, {"wall_ms", t1 - t0}});
        }
        report["mode"] = "recursive_apply";
        report["n"] = n;
        report["cutoff"] = cutoff;
      }
    }
    report["counts"] = counter_json(oc);
    report["max_error"] = err;
    double tol = ring_traits<T>::exact ? 0.0 : 1e-6;
    report["ok"] = err <= tol;
    report["wall_ms_note"] = "machine dependent";
    report["rows"] = rows;
    return report;
  });
}

// ---------------------------------------------------------------- validate

json scenario_validate(const json& p) {
  AnyAlg alg = resolve_algorithm(p);
  json report;
  report["scenario"] = "validate";
  report["name"] = algorithm_name(alg);
  report["target"] = target_json(algorithm_target(alg));
  report["rank"] = algorithm_rank(alg);
  json rows = json::array();
  if (const auto* apa = std::get_if<ApaAlgorithm>(&alg)) {
    BorderValidationResult res = validate_border_rank(*apa);
    report["kind"] = "apa";
    report["order"] = apa->order;
    report["degree"] = apa->degree();
    report["equations"] = res.equations;
    report["max_degree_seen"] = res.max_degree_seen;
    report["violations"] = res.violations.size();
    report["ok"] = res.ok;
    std::size_t shown = 0;
    for (const BorderViolation& v : res.violations) {
      if (shown++ >= 10) break;
      rows.push_back(json{{"i", v.i},
                          {"j", v.j},
                          {"h", v.h},
                          {"lambda_degree", v.lambda_degree},
                          {"got", rat_to_string(v.got)},
                          {"want", rat_to_string(v.want)}});
    }
  } else {
    const Decomposition& d = std::get<Decomposition>(alg);
    ValidationResult res = validate_decomposition(d);
    report["kind"] = "exact";
    report["equations"] = res.equations;
    report["max_residual"] = rat_to_string(res.max_residual);
    report["violations"] = res.violations.size();
    report["census"] = census_json(operation_census(d));
    if (d.has_plans()) report["plans_consistent"] = plans_consistent(d);
    report["ok"] = res.ok;
    std::size_t shown = 0;
    for (const BrentViolation& v : res.violations) {
      if (shown++ >= 10) break;
      rows.push_back(json{{"i", v.i},
                          {"j", v.j},
                          {"h", v.h},
                          {"residual", rat_to_string(v.residual)}});
    }
  }
  report["rows"] = rows;
  return report;
}

// ----------------------------------------------------------------- compose

json scenario_compose(const json& p) {
  const std::string op = p.value("op", std::string("tensor"));
  AnyAlg first = resolve_algorithm(p);
  const auto* d1 = std::get_if<Decomposition>(&first);
  if (!d1) throw ParseError("composition needs exact decompositions");
  Decomposition result = [&]() -> Decomposition {
    if (op == "tensor") {
      json p2;
      if (p.contains("file2")) p2["file"] = p["file2"];
      else if (p.contains("alg2")) p2["alg"] = p["alg2"];
      else throw ParseError("tensor composition needs a second algorithm");
      AnyAlg second = resolve_algorithm(p2);
      const auto* d2 = std::get_if<Decomposition>(&second);
      if (!d2) throw ParseError("composition needs exact decompositions");
      return tensor_product(*d1, *d2);
    }
    if (op == "cycle" || op == "cycle2" || op == "transpose") {
      DualMode mode = op == "cycle" ? DualMode::Cycle
                      : op == "cycle2" ? DualMode::Cycle2
                                       : DualMode::Transpose;
      return dualize(*d1, mode);
    }
    if (op == "equivalence") {
      if (!d1->target.is_mm())
        throw ParseError("equivalence transforms need a matrix multiplication target");
      Rng rng(Rng::derive(p.value("seed", 1ULL), 17));
      EquivalenceMaps maps = random_equivalence(d1->target.shape(), rng);
      maps.perm = random_permutation(d1->rank, rng);
      return equivalence_transform(*d1, maps);
    }
    throw ParseError("unknown composition op: " + op +
                     " (expected tensor, cycle, cycle2, transpose, equivalence)");
  }();
  ValidationResult res = validate_decomposition(result);
  json report;
  report["scenario"] = "compose";
  report["op"] = op;
  report["name"] = result.name;
  report["target"] = target_json(result.target);
  report["rank"] = result.rank;
  report["census"] = census_json(operation_census(result));
  report["valid"] = res.ok;
  report["ok"] = res.ok;
  if (p.contains("save")) {
    std::string path = p["save"].get<std::string>();
    save_algorithm(AnyAlg(result), path);
    report["saved"] = path;
  }
  report["rows"] = json::array({json{{"op", op},
                                     {"rank", result.rank},
                                     {"valid", res.ok}}});
  return report;
}

// ---------------------------------------------------------------- exponent

json scenario_exponent(const json& p) {
  std::size_t k = 0, m = 0, n = 0, rank = 0;
  std::string name = "literal";
  std::string rank_kind = "rank";
  if (p.contains("alg") || p.contains("file")) {
    AnyAlg alg = resolve_algorithm(p);
    const Target& t = algorithm_target(alg);
    if (!t.is_mm())
      throw ParseError("exponent needs a single matrix multiplication target; use tau "
                       "for disjoint unions");
    k = t.shape().k;
    m = t.shape().m;
    n = t.shape().n;
    rank = algorithm_rank(alg);
    name = algorithm_name(alg);
    if (std::holds_alternative<ApaAlgorithm>(alg)) rank_kind = "border_rank";
  } else {
    n = p.value("n", 0ULL);
    k = p.value("k", n);
    m = p.value("m", n);
    n = p.value("n", n);
    rank = p.value("rank", 0ULL);
    if (k == 0 || m == 0 || n == 0 || rank == 0)
      throw ParseError("exponent needs an algorithm or explicit dimensions and rank");
  }
  json report;
  report["scenario"] = "exponent";
  report["name"] = name;
  report["dims"] = json::array({k, m, n});
  report["rank"] = rank;
  report["rank_kind"] = rank_kind;
  json row;
  row["dims"] = std::to_string(k) + "x" + std::to_string(m) + "x" + std::to_string(n);
  row["rank"] = rank;
  if (k == m && m == n) {
    double w = exponent_square(n, rank);
    report["omega"] = w;
    row["omega"] = w;
  }
  double wr = exponent_rect(k, m, n, rank);
  report["omega_rect"] = wr;
  row["omega_rect"] = wr;
  report["rows"] = json::array({row});
  return report;
}

// --------------------------------------------------------------------- tau

json scenario_tau(const json& p) {
  std::vector<MmShape> shapes;
  std::size_t rank = 0;
  std::string name = "literal";
  if (p.contains("alg") || p.contains("file")) {
    AnyAlg alg = resolve_algorithm(p);
    const Target& t = algorithm_target(alg);
    if (t.is_raw()) throw ParseError("tau needs matrix multiplication targets");
    shapes = t.shapes();
    rank = algorithm_rank(alg);
    name = algorithm_name(alg);
  } else {
    if (!p.contains("dims") || !p.contains("rank"))
      throw ParseError("tau needs an algorithm or --dims and --rank");
    shapes = parse_shape_list(p["dims"].get<std::string>());
    rank = p["rank"].get<std::size_t>();
  }
  const double tol = p.value("tol", 1e-10);
  TauResult res = schonhage_tau(shapes, rank, tol);
  json report;
  report["scenario"] = "tau";
  report["name"] = name;
  json dims = json::array();
  for (const MmShape& s : shapes) dims.push_back(shape_json(s));
  report["dims"] = dims;
  report["rank"] = rank;
  report["tau"] = res.tau;
  report["omega_bound"] = res.omega_bound;
  report["residual"] = res.residual;
  report["iterations"] = res.iterations;
  bool ok = res.residual <= tol * static_cast<double>(rank);
  report["ok"] = ok;
  report["rows"] = json::array({json{{"tau", res.tau},
                                     {"omega_bound", res.omega_bound},
                                     {"residual", res.residual}}});
  return report;
}

// ------------------------------------------------------------------ tables

json scenario_tables(const json& p) {
  const std::string family = p.value("family", std::string("all"));
  std::vector<PanRow> rows;
  auto family_of = [&](const std::string& f) {
    if (f == "1978") return PanFamily::P1978;
    if (f == "1980") return PanFamily::P1980;
    if (f == "1981") return PanFamily::P1981;
    if (f == "1982") return PanFamily::P1982;
    throw ParseError("unknown family: " + f + " (expected all, 1978, 1980, 1981, 1982)");
  };
  if (family == "all") {
    if (p.contains("n"))
      throw ParseError("custom n needs a single family, not all");
    rows = pan_table();
  } else {
    PanFamily f = family_of(family);
    long long n = p.value("n", pan_canonical_n(f));
    rows.push_back(pan_row(f, n));
  }
  json report;
  report["scenario"] = "tables";
  json jrows = json::array();
  bool ok = true;
  for (const PanRow& r : rows) {
    ok = ok && r.omega < r.published_bound;
    json row;
    row["year"] = r.year;
    row["formula"] = r.formula;
    row["n"] = r.n;
    row["rank"] = r.rank;
    row["omega"] = r.omega;
    row["published_bound"] = r.published_bound;
    if (!r.note.empty()) row["note"] = r.note;
    jrows.push_back(row);
  }
  report["ok"] = ok;
  report["rows"] = jrows;
  return report;
}

// ---------------------------------------------------------------- convolve

json scenario_convolve(const json& p) {
  const std::size_t n = p.value("n", 8ULL);
  const std::uint64_t seed = p.value("seed", 1ULL);
  Rng rng(Rng::derive(seed, 0));
  std::vector<double> a(n + 1), b(n + 1);
  for (double& v : a) v = static_cast<double>(rng.next_int(-9, 9));
  for (double& v : b) v = static_cast<double>(rng.next_int(-9, 9));
  OpCounter direct_oc, fft_oc;
  std::vector<double> direct = convolve_direct(a, b, &direct_oc);
  std::size_t k_used = 0;
  std::vector<double> viafft = convolve_fft_real(a, b, &fft_oc, &k_used);
  double err = 0.0;
  for (std::size_t t = 0; t < direct.size(); ++t)
    err = std::max(err, std::fabs(direct[t] - viafft[t]));
  const double log2k = std::log2(static_cast<double>(k_used));
  const double per_fft_bound = 1.5 * static_cast<double>(k_used) * log2k;
  json report;
  report["scenario"] = "convolve";
  report["degree"] = n;
  report["product_degree"] = 2 * n;
  report["fft_size"] = k_used;
  report["per_fft_op_bound"] = per_fft_bound;
  report["max_error"] = err;
  json rows = json::array();
  rows.push_back(json{{"method", "direct"},
                      {"ring_muls", direct_oc.ring_muls},
                      {"ring_adds", direct_oc.ring_adds},
                      {"const_muls", direct_oc.const_muls}});
  rows.push_back(json{{"method", "fft"},
                      {"ring_muls", fft_oc.ring_muls},
                      {"ring_adds", fft_oc.ring_adds},
                      {"const_muls", fft_oc.const_muls}});
  report["rows"] = rows;
  bool muls_ok = direct_oc.ring_muls == static_cast<long long>((n + 1) * (n + 1));
  bool adds_ok = direct_oc.ring_adds == static_cast<long long>(n * n);
  double fft_total = static_cast<double>(fft_oc.ring_adds + fft_oc.ring_muls -
                                         static_cast<long long>(k_used));
  report["ok"] = err <= 1e-6 && muls_ok && adds_ok &&
                 fft_total <= 3.0 * per_fft_bound;
  return report;
}

// ------------------------------------------------------------------ polymm

json scenario_polymm(const json& p) {
  const std::size_t n = p.value("n", 2ULL);
  const std::size_t k = p.value("k", n), m = p.value("m", n);
  const std::size_t deg = p.value("degree", 7ULL);
  const std::uint64_t seed = p.value("seed", 1ULL);
  const std::string method = p.value("method", std::string("all"));
  Rng rng(Rng::derive(seed, 0));
  std::vector<Matrix<double>> a, b;
  for (std::size_t t = 0; t <= deg; ++t)
    a.push_back(random_matrix<double>(k, m, rng));
  for (std::size_t t = 0; t <= deg; ++t)
    b.push_back(random_matrix<double>(m, n, rng));
  OpCounter straight_oc;
  std::vector<Matrix<double>> ref = poly_mm_straight(a, b, &straight_oc);
  json rows = json::array();
  rows.push_back(json{{"method", "straight"},
                      {"ring_muls", straight_oc.ring_muls},
                      {"ring_adds", straight_oc.ring_adds},
                      {"max_error", 0.0}});
  double worst = 0.0;
  std::size_t k_used = 0;
  auto run = [&](const std::string& name) {
    OpCounter oc;
    std::vector<Matrix<double>> got;
    if (name == "coeff-fft")
      got = poly_mm_coeff_fft(a, b, &oc, &k_used);
    else
      got = poly_mm_matrix_fft(a, b, &oc, &k_used);
    double err = 0.0;
    for (std::size_t t = 0; t < ref.size(); ++t)
      err = std::max(err, max_abs_diff(ref[t], got[t]));
    worst = std::max(worst, err);
    rows.push_back(json{{"method", name},
                        {"ring_muls", oc.ring_muls},
                        {"ring_adds", oc.ring_adds},
                        {"const_muls", oc.const_muls},
                        {"max_error", err}});
  };
  if (method == "all" || method == "coeff-fft") run("coeff-fft");
  if (method == "all" || method == "matrix-coeff-fft") run("matrix-coeff-fft");
  if (method != "all" && method != "coeff-fft" && method != "matrix-coeff-fft" &&
      method != "straight")
    throw ParseError("unknown method: " + method);
  json report;
  report["scenario"] = "polymm";
  report["dims"] = json::array({k, m, n});
  report["degree"] = deg;
  report["fft_size"] = k_used;
  report["inner_mm_calls"] = k_used;
  report["max_error"] = worst;
  report["ok"] = worst <= 1e-6;
  report["rows"] = rows;
  return report;
}

// --------------------------------------------------------------- complexmm

json scenario_complexmm(const json& p) {
  const std::size_t n = p.value("n", 8ULL);
  const std::uint64_t seed = p.value("seed", 1ULL);
  Rng rng(Rng::derive(seed, 0));
  Matrix<C64> a = random_matrix<C64>(n, n, rng);
  Matrix<C64> b = random_matrix<C64>(n, n, rng);
  OpCounter oc4, oc3;
  Matrix<C64> c4 = complex_mm_4m(a, b, &oc4);
  Matrix<C64> c3 = complex_mm_3m(a, b, &oc3);
  double err = max_abs_diff(c3, c4);
  const long long n3 = static_cast<long long>(n) * n * n;
  const long long n2 = static_cast<long long>(n) * n;
  json report;
  report["scenario"] = "complexmm";
  report["n"] = n;
  report["max_error"] = err;
  json rows = json::array();
  rows.push_back(json{{"method", "4m"},
                      {"real_muls", oc4.ring_muls},
                      {"real_adds", oc4.ring_adds},
                      {"expected_muls", 4 * n3},
                      {"expected_adds", 4 * n3 - 2 * n2}});
  rows.push_back(json{{"method", "3m"},
                      {"real_muls", oc3.ring_muls},
                      {"real_adds", oc3.ring_adds},
                      {"expected_muls", 3 * n3},
                      {"expected_adds", 3 * n3 + 2 * n2}});
  report["rows"] = rows;
  report["ok"] = err <= 1e-6 && oc4.ring_muls == 4 * n3 &&
                 oc4.ring_adds == 4 * n3 - 2 * n2 && oc3.ring_muls == 3 * n3 &&
                 oc3.ring_adds == 3 * n3 + 2 * n2;
  return report;
}

// ------------------------------------------------------------------ sample

json scenario_sample(const json& p) {
  const std::size_t n = p.value("n", 64ULL);
  const std::size_t k = p.value("k", n), m = p.value("m", n);
  const std::size_t c = p.value("c", std::max<std::size_t>(1, m / 4));
  const std::size_t trials = p.value("trials", 10ULL);
  const std::uint64_t seed = p.value("seed", 1ULL);
  Rng gen(Rng::derive(seed, 0));
  Matrix<double> a = random_matrix<double>(k, m, gen, Dist::RealUniform);
  Matrix<double> b = random_matrix<double>(m, n, gen, Dist::RealUniform);
  Matrix<double> exact = straightforward_mm(a, b);
  json rows = json::array();
  double max_audit = 0.0, sum_rel = 0.0;
  bool ok = true;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t + 1));
    OpCounter oc;
    Matrix<double> approx = sampled_mm(a, b, c, rng, &oc);
    SampleStats st = sample_error_stats(a, b, exact, approx, c);
    max_audit = std::max(max_audit, st.audit);
    sum_rel += st.rel_error;
    ok = ok && st.audit <= 4.0;
    rows.push_back(json{{"trial", t},
                        {"rel_error", st.rel_error},
                        {"audit", st.audit}});
  }
  json report;
  report["scenario"] = "sample";
  report["dims"] = json::array({k, m, n});
  report["c"] = c;
  report["trials"] = trials;
  report["mean_rel_error"] = sum_rel / static_cast<double>(trials);
  report["max_audit"] = max_audit;
  report["audit_bound"] = 4.0;
  report["ok"] = ok;
  report["rows"] = rows;
  return report;
}

// --------------------------------------------------------------- crossover

long long pow_ll(long long base, int e) {
  long long r = 1;
  for (int t = 0; t < e; ++t) r *= base;
  return r;
}

json scenario_crossover(const json& p) {
  const int max_g = std::min(15, p.value("max_g", 12));
  const int measure_g = std::min(4, p.value("measure_g", 3));
  const std::uint64_t seed = p.value("seed", 1ULL);
  Decomposition strassen = strassen2x2();
  json rows = json::array();
  long long crossover_n = -1;
  for (int g = 1; g <= max_g; ++g) {
    const long long n = pow_ll(2, g);
    const long long s_ops = 7 * pow_ll(7, g) - 6 * pow_ll(4, g);
    const long long d_ops = 2 * pow_ll(8, g) - pow_ll(4, g);
    if (s_ops < d_ops && crossover_n < 0) crossover_n = n;
    json row;
    row["g"] = g;
    row["n"] = n;
    row["recursive_total_ops"] = s_ops;
    row["straightforward_total_ops"] = d_ops;
    if (g <= measure_g) {
      Rng rng(Rng::derive(seed, g));
      Matrix<double> a =
          random_matrix<double>(static_cast<std::size_t>(n), static_cast<std::size_t>(n), rng);
      Matrix<double> b =
          random_matrix<double>(static_cast<std::size_t>(n), static_cast<std::size_t>(n), rng);
      OpCounter so, doc;
      apply_recursive(strassen, a, b, 1, &so);
      straightforward_mm(a, b, &doc);
      row["measured_recursive_ops"] = so.total();
      row["measured_straightforward_ops"] = doc.total();
      row["model_matches"] =
          so.total() == s_ops && so.const_muls == 0 && doc.total() == d_ops;
    }
    rows.push_back(row);
  }
  bool model_ok = true;
  for (const auto& row : rows)
    if (row.contains("model_matches") && !row["model_matches"].get<bool>())
      model_ok = false;
  json report;
  report["scenario"] = "crossover";
  report["alg"] = "strassen2x2";
  report["cutoff"] = 1;
  report["crossover_n"] = crossover_n;
  report["model"] = "total ops: 7*7^g - 6*4^g vs 2*8^g - 4^g";
  report["ok"] = model_ok && crossover_n == 1024;
  report["wall_ms_note"] = "operation counts are machine independent; timings are not";
  report["rows"] = rows;
  return report;
}

// --------------------------------------------------------------- stability

json scenario_stability(const json& p) {
  std::vector<std::size_t> sizes = {32, 64, 128, 256};
  if (p.contains("sizes")) sizes = parse_size_list(p["sizes"].get<std::string>());
  const std::uint64_t seed = p.value("seed", 1ULL);
  const std::size_t cutoff = p.value("cutoff", 8ULL);
  Decomposition strassen = strassen2x2();
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
    const std::size_t n = sizes[idx];
    Rng rng(Rng::derive(seed, idx));
    Matrix<Rat> ea(n, n), eb(n, n);
    for (std::size_t i = 0; i < n * n; ++i) {
      ea.data()[i] = Rat(rng.next_int(-9, 9));
      eb.data()[i] = Rat(rng.next_int(-9, 9));
    }
    Matrix<Rat> exact = straightforward_mm(ea, eb);
    Matrix<double> a = materialize<double>(ea);
    Matrix<double> b = materialize<double>(eb);
    Matrix<double> c = apply_recursive(strassen, a, b, cutoff);
    double err = max_abs_diff(c, materialize<double>(exact));
    worst = std::max(worst, err);
    rows.push_back(json{{"n", n}, {"max_abs_error", err}});
  }
  json report;
  report["scenario"] = "stability";
  report["alg"] = "strassen2x2";
  report["cutoff"] = cutoff;
  report["entry_range"] = "integers in [-9,9]";
  report["reference"] = "exact rational arithmetic";
  report["max_abs_error"] = worst;
  report["tolerance"] = 1e-10;
  report["ok"] = worst <= 1e-10;
  report["rows"] = rows;
  return report;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"multiply", "validate", "compose",  "exponent", "tau",       "tables",
          "convolve", "polymm",   "complexmm", "sample",   "crossover", "stability"};
}

std::string run_scenario(const std::string& name, const std::string& params_json) {
  json p;
  if (!params_json.empty()) {
    try {
      p = json::parse(params_json);
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad parameter JSON: ") + e.what());
    }
  }
  if (!p.is_object() && !p.is_null())
    throw ParseError("scenario parameters must be a JSON object");
  if (p.is_null()) p = json::object();
  json report;
  if (name == "multiply") report = scenario_multiply(p);
  else if (name == "validate") report = scenario_validate(p);
  else if (name == "compose") report = scenario_compose(p);
  else if (name == "exponent") report = scenario_exponent(p);
  else if (name == "tau") report = scenario_tau(p);
  else if (name == "tables") report = scenario_tables(p);
  else if (name == "convolve") report = scenario_convolve(p);
  else if (name == "polymm") report = scenario_polymm(p);
  else if (name == "complexmm") report = scenario_complexmm(p);
  else if (name == "sample") report = scenario_sample(p);
  else if (name == "crossover") report = scenario_crossover(p);
  else if (name == "stability") report = scenario_stability(p);
  else throw ParseError("unknown scenario: " + name);
  return report.dump(2);
}

}  // namespace mmkit
