#include "mmkit/mmkit.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <variant>

#include "apa.hpp"
#include "common.hpp"
#include "decomposition.hpp"
#include "format.hpp"
#include "matrix.hpp"
#include "mm.hpp"
#include "scenarios.hpp"
#include "transforms.hpp"
#include "zoo.hpp"

using namespace mmkit;

struct mmk_alg {
  AnyAlg alg;
  std::string name;
};

struct mmk_mat {
  Matrix<double> m;
};

namespace {

thread_local std::string g_last_error = "";

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return fail(MMK_EPARSE, e.what());
  } catch (const DimensionError& e) {
    return fail(MMK_EDIM, e.what());
  } catch (const RingError& e) {
    return fail(MMK_ERING, e.what());
  } catch (const IoError& e) {
    return fail(MMK_EIO, e.what());
  } catch (const Error& e) {
    return fail(MMK_EFAIL, e.what());
  } catch (const std::exception& e) {
    return fail(MMK_EFAIL, e.what());
  }
}

const Decomposition* as_exact(const mmk_alg* alg) {
  return std::get_if<Decomposition>(&alg->alg);
}

mmk_alg* wrap(AnyAlg a) {
  auto* out = new mmk_alg{std::move(a), ""};
  out->name = algorithm_name(out->alg);
  return out;
}

}  // namespace

extern "C" {

const char* mmk_last_error(void) { return g_last_error.c_str(); }

int mmk_alg_builtin(const char* spec, mmk_alg** out) {
  if (!spec || !out) return fail(MMK_EINVAL, "null argument");
  return guarded([&]() -> int {
    *out = wrap(builtin_algorithm(spec));
    return MMK_OK;
  });
}

int mmk_alg_load(const char* path, mmk_alg** out) {
  if (!path || !out) return fail(MMK_EINVAL, "null argument");
  return guarded([&]() -> int {
    *out = wrap(load_algorithm(path));
    return MMK_OK;
  });
}

int mmk_alg_save(const mmk_alg* alg, const char* path) {
  if (!alg || !path) return fail(MMK_EINVAL, "null argument");
  return guarded([&]() -> int {
    save_algorithm(alg->alg, path);
    return MMK_OK;
  });
}

void mmk_alg_free(mmk_alg* alg) { delete alg; }

const char* mmk_alg_name(const mmk_alg* alg) {
  return alg ? alg->name.c_str() : "";
}

size_t mmk_alg_rank(const mmk_alg* alg) {
  return alg ? algorithm_rank(alg->alg) : 0;
}

int mmk_alg_is_apa(const mmk_alg* alg) {
  return alg && std::holds_alternative<ApaAlgorithm>(alg->alg) ? 1 : 0;
}

int mmk_alg_target_dims(const mmk_alg* alg, size_t* k, size_t* m, size_t* n) {
  if (!alg || !k || !m || !n) return fail(MMK_EINVAL, "null argument");
  return guarded([&]() -> int {
    const Target& t = algorithm_target(alg->alg);
    if (t.is_raw())
      return fail(MMK_EDIM, "algorithm targets a raw tensor, not a product");
    const MmShape& s = t.shapes().front();
    *k = s.k;
    *m = s.m;
    *n = s.n;
    return MMK_OK;
  });
}

int mmk_alg_validate(const mmk_alg* alg, int* valid) {
  if (!alg || !valid) return fail(MMK_EINVAL, "null argument");
  return guarded([&]() -> int {
    if (const auto* apa = std::get_if<ApaAlgorithm>(&alg->alg))
      *valid = validate_border_rank(*apa).ok ? 1 : 0;
    else
      *valid = validate_decomposition(std::get<Decomposition>(alg->alg)).ok ? 1 : 0;
    return MMK_OK;
  });
}

int mmk_alg_census(const mmk_alg* alg, long long* adds, long long* const_muls) {
  if (!alg || !adds || !const_muls) return fail(MMK_EINVAL, "null argument");
  const Decomposition* d = as_exact(alg);
  if (!d) return fail(MMK_ERING, "census needs an exact decomposition");
  return guarded([&]() -> int {
    Census c = operation_census(*d);
    *adds = c.adds_total();
    *const_muls = c.const_muls_total();
    return MMK_OK;
  });
}

int mmk_tensor_product(const mmk_alg* a, const mmk_alg* b, mmk_alg** out) {
  if (!a || !b || !out) return fail(MMK_EINVAL, "null argument");
  const Decomposition* da = as_exact(a);
  const Decomposition* db = as_exact(b);
  if (!da || !db)
    return fail(MMK_ERING, "tensor product needs exact decompositions");
  return guarded([&]() -> int {
    *out = wrap(AnyAlg(tensor_product(*da, *db)));
    return MMK_OK;
  });
}

int mmk_dualize(const mmk_alg* alg, const char* mode, mmk_alg** out) {
  if (!alg || !mode || !out) return fail(MMK_EINVAL, "null argument");
  const Decomposition* d = as_exact(alg);
  if (!d) return fail(MMK_ERING, "duality needs an exact decomposition");
  return guarded([&]() -> int {
    std::string m(mode);
    DualMode dm;
    if (m == "cycle") dm = DualMode::Cycle;
    else if (m == "cycle2") dm = DualMode::Cycle2;
    else if (m == "transpose") dm = DualMode::Transpose;
    else return fail(MMK_EINVAL, "unknown dual mode: " + m);
    *out = wrap(AnyAlg(dualize(*d, dm)));
    return MMK_OK;
  });
}

int mmk_equivalence_random(const mmk_alg* alg, uint64_t seed, mmk_alg** out) {
  if (!alg || !out) return fail(MMK_EINVAL, "null argument");
  const Decomposition* d = as_exact(alg);
  if (!d) return fail(MMK_ERING, "equivalence needs an exact decomposition");
  return guarded([&]() -> int {
    if (!d->target.is_mm())
      return fail(MMK_EDIM, "equivalence needs a matrix multiplication target");
    Rng rng(Rng::derive(seed, 17));
    EquivalenceMaps maps = random_equivalence(d->target.shape(), rng);
    maps.perm = random_permutation(d->rank, rng);
    *out = wrap(AnyAlg(equivalence_transform(*d, maps)));
    return MMK_OK;
  });
}

int mmk_mat_create(size_t rows, size_t cols, const double* data, mmk_mat** out) {
  if (!data || !out || rows == 0 || cols == 0)
    return fail(MMK_EINVAL, "null argument or empty shape");
  return guarded([&]() -> int {
    auto* m = new mmk_mat{Matrix<double>(rows, cols)};
    std::memcpy(m->m.data(), data, rows * cols * sizeof(double));
    *out = m;
    return MMK_OK;
  });
}

int mmk_mat_random(size_t rows, size_t cols, uint64_t seed, mmk_mat** out) {
  if (!out || rows == 0 || cols == 0)
    return fail(MMK_EINVAL, "null argument or empty shape");
  return guarded([&]() -> int {
    Rng rng(seed);
    *out = new mmk_mat{random_matrix<double>(rows, cols, rng)};
    return MMK_OK;
  });
}

void mmk_mat_free(mmk_mat* mat) { delete mat; }

int mmk_mat_dims(const mmk_mat* mat, size_t* rows, size_t* cols) {
  if (!mat || !rows || !cols) return fail(MMK_EINVAL, "null argument");
  *rows = mat->m.rows();
  *cols = mat->m.cols();
  return MMK_OK;
}

int mmk_mat_get(const mmk_mat* mat, size_t i, size_t j, double* out) {
  if (!mat || !out) return fail(MMK_EINVAL, "null argument");
  if (i >= mat->m.rows() || j >= mat->m.cols())
    return fail(MMK_EDIM, "index out of range");
  *out = mat->m(i, j);
  return MMK_OK;
}

int mmk_multiply(const mmk_alg* alg, const mmk_mat* a, const mmk_mat* b,
                 size_t cutoff, mmk_mat** out) {
  if (!alg || !a || !b || !out) return fail(MMK_EINVAL, "null argument");
  const Decomposition* d = as_exact(alg);
  if (!d)
    return fail(MMK_ERING,
                "approximate algorithms need a scale parameter; use the study "
                "interface instead");
  return guarded([&]() -> int {
    if (!d->target.is_mm())
      return fail(MMK_EDIM, "algorithm does not target a single product");
    const MmShape& s = d->target.shape();
    if (a->m.rows() == s.k && a->m.cols() == s.m && b->m.rows() == s.m &&
        b->m.cols() == s.n) {
      *out = new mmk_mat{apply(*d, a->m, b->m)};
      return MMK_OK;
    }
    if (!d->recursable())
      return fail(MMK_EDIM, "operands do not match the base case");
    if (a->m.rows() != a->m.cols() || b->m.rows() != b->m.cols() ||
        a->m.cols() != b->m.rows())
      return fail(MMK_EDIM, "recursive application needs square operands");
    *out = new mmk_mat{
        apply_recursive(*d, a->m, b->m, cutoff == 0 ? 1 : cutoff)};
    return MMK_OK;
  });
}

int mmk_run_scenario(const char* name, const char* params_json, char** out) {
  if (!name || !out) return fail(MMK_EINVAL, "null argument");
  return guarded([&]() -> int {
    std::string report = run_scenario(name, params_json ? params_json : "");
    char* buf = static_cast<char*>(std::malloc(report.size() + 1));
    if (!buf) return fail(MMK_EFAIL, "out of memory");
    std::memcpy(buf, report.c_str(), report.size() + 1);
    *out = buf;
    return MMK_OK;
  });
}

void mmk_string_free(char* s) { std::free(s); }

}  // extern "C"
