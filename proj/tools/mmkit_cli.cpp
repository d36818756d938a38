#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmkit/mmkit.h"

namespace {

using json = nlohmann::ordered_json;

int map_error(int code) {
  switch (code) {
    case MMK_EINVAL:
    case MMK_EDIM:
    case MMK_ERING:
    case MMK_EPARSE:
    case MMK_EIO:
      return 2;
    default:
      return 1;
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const json& report) {
  if (!report.contains("rows") || !report["rows"].is_array() ||
      report["rows"].empty())
    return "";
  const json& rows = report["rows"];
  std::vector<std::string> keys;
  for (const json& row : rows)
    for (auto it = row.begin(); it != row.end(); ++it) {
      bool seen = false;
      for (const std::string& k : keys)
        if (k == it.key()) seen = true;
      if (!seen) keys.push_back(it.key());
    }
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(keys[i]);
  }
  out += '\n';
  for (const json& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out += ',';
      if (!row.contains(keys[i])) continue;
      const json& v = row[keys[i]];
      out += v.is_string() ? csv_escape(v.get<std::string>()) : v.dump();
    }
    out += '\n';
  }
  return out;
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return 0;
  }
  std::ofstream f(out_path);
  if (!f) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
  return 0;
}

int run(const std::string& name, const json& params, const std::string& format,
        const std::string& out_path) {
  char* raw = nullptr;
  int rc = mmk_run_scenario(name.c_str(), params.dump().c_str(), &raw);
  if (rc != MMK_OK) {
    std::cerr << "error: " << mmk_last_error() << "\n";
    return map_error(rc);
  }
  std::string text(raw);
  mmk_string_free(raw);
  json report = json::parse(text);
  bool ok = !report.contains("ok") || report["ok"].get<bool>();
  if (format == "csv") text = to_csv(report);
  int io = emit(text, out_path);
  if (io != 0) return io;
  return ok ? 0 : 1;
}

struct Common {
  std::string format = "json";
  std::string out;
  void attach(CLI::App* sub) {
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out, "Write the report to a file");
  }
};

struct AlgPick {
  std::string alg;
  std::string file;
  CLI::App* sub = nullptr;
  void attach(CLI::App* s) {
    sub = s;
    CLI::Option* oa = s->add_option("--alg", alg, "Builtin algorithm name");
    CLI::Option* of = s->add_option("--file", file, "Algorithm file");
    oa->excludes(of);
  }
  void fill(json& p, bool default_strassen = false) const {
    if (sub->count("--file")) p["file"] = file;
    else if (sub->count("--alg")) p["alg"] = alg;
    else if (default_strassen) p["alg"] = "strassen2x2";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fast matrix multiplication algorithms: evaluation, verification, "
      "composition, and operation accounting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mmkit 1.0.0");

  int exit_code = 0;

  // multiply
  auto* mul = app.add_subcommand(
      "multiply", "Multiply random matrices with a chosen algorithm");
  Common mul_c;
  AlgPick mul_a;
  std::size_t mul_k = 0, mul_m = 0, mul_n = 0, mul_cutoff = 0, mul_points = 0;
  std::string mul_ring = "f64", mul_lambda;
  std::uint64_t mul_seed = 1;
  int mul_reps = 1;
  mul_a.attach(mul);
  mul->add_option("--k", mul_k, "Rows of the left operand");
  mul->add_option("--m", mul_m, "Shared dimension");
  mul->add_option("--n", mul_n, "Columns of the right operand (or square size)");
  mul->add_option("--cutoff", mul_cutoff,
                  "Recursion cutoff; blocks this size or smaller go straightforward");
  mul->add_option("--ring", mul_ring, "Coefficient ring")
      ->check(CLI::IsMember({"f64", "complex", "rational", "bigint"}));
  mul->add_option("--seed", mul_seed, "Random seed");
  mul->add_option("--reps", mul_reps, "Timing repetitions");
  mul->add_option("--lambda", mul_lambda,
                  "Scale parameter for approximate algorithms, e.g. 1/100");
  mul->add_option("--points", mul_points,
                  "Interpolation points for exact recovery");
  mul_c.attach(mul);
  mul->callback([&] {
    json p;
    mul_a.fill(p, true);
    if (mul->count("--k")) p["k"] = mul_k;
    if (mul->count("--m")) p["m"] = mul_m;
    if (mul->count("--n")) p["n"] = mul_n;
    if (mul->count("--cutoff")) p["cutoff"] = mul_cutoff;
    if (mul->count("--ring")) p["ring"] = mul_ring;
    if (mul->count("--seed")) p["seed"] = mul_seed;
    if (mul->count("--reps")) p["reps"] = mul_reps;
    if (mul->count("--lambda")) p["lambda"] = mul_lambda;
    if (mul->count("--points")) p["points"] = mul_points;
    exit_code = run("multiply", p, mul_c.format, mul_c.out);
  });

  // validate
  auto* val = app.add_subcommand(
      "validate", "Check an algorithm against its defining equations");
  Common val_c;
  AlgPick val_a;
  val_a.attach(val);
  val_c.attach(val);
  val->callback([&] {
    json p;
    val_a.fill(p);
    exit_code = run("validate", p, val_c.format, val_c.out);
  });

  // compose
  auto* com = app.add_subcommand(
      "compose", "Build a new algorithm from existing ones and validate it");
  Common com_c;
  AlgPick com_a;
  std::string com_op = "tensor", com_alg2, com_file2;
  std::uint64_t com_seed = 1;
  com->add_option("--op", com_op, "Composition operation")
      ->check(CLI::IsMember({"tensor", "cycle", "cycle2", "transpose", "equivalence"}));
  com_a.attach(com);
  CLI::Option* oa2 = com->add_option("--alg2", com_alg2, "Second builtin name");
  CLI::Option* of2 = com->add_option("--file2", com_file2, "Second algorithm file");
  oa2->excludes(of2);
  com->add_option("--seed", com_seed, "Seed for the equivalence maps");
  com_c.attach(com);
  com->callback([&] {
    json p;
    p["op"] = com_op;
    com_a.fill(p);
    if (com->count("--file2")) p["file2"] = com_file2;
    else if (com->count("--alg2")) p["alg2"] = com_alg2;
    if (com->count("--seed")) p["seed"] = com_seed;
    if (!com_c.out.empty()) p["save"] = com_c.out;
    exit_code = run("compose", p, com_c.format, "");
  });

  // exponent
  auto* expn = app.add_subcommand(
      "exponent", "Exponent implied by a rank bound for one product shape");
  Common exp_c;
  AlgPick exp_a;
  std::size_t exp_k = 0, exp_m = 0, exp_n = 0, exp_rank = 0;
  exp_a.attach(expn);
  expn->add_option("--k", exp_k, "Rows of the left operand");
  expn->add_option("--m", exp_m, "Shared dimension");
  expn->add_option("--n", exp_n, "Columns (or square size)");
  expn->add_option("--rank", exp_rank, "Number of products");
  exp_c.attach(expn);
  expn->callback([&] {
    json p;
    exp_a.fill(p);
    if (expn->count("--k")) p["k"] = exp_k;
    if (expn->count("--m")) p["m"] = exp_m;
    if (expn->count("--n")) p["n"] = exp_n;
    if (expn->count("--rank")) p["rank"] = exp_rank;
    exit_code = run("exponent", p, exp_c.format, exp_c.out);
  });

  // tau
  auto* tau = app.add_subcommand(
      "tau", "Exponent bound from a disjoint union of product shapes");
  Common tau_c;
  AlgPick tau_a;
  std::string tau_dims;
  std::size_t tau_rank = 0;
  tau_a.attach(tau);
  tau->add_option("--dims", tau_dims,
                  "Comma separated shapes, e.g. 7x1x7,1x7x7");
  tau->add_option("--rank", tau_rank, "Total number of products");
  tau_c.attach(tau);
  tau->callback([&] {
    json p;
    tau_a.fill(p);
    if (tau->count("--dims")) p["dims"] = tau_dims;
    if (tau->count("--rank")) p["rank"] = tau_rank;
    exit_code = run("tau", p, tau_c.format, tau_c.out);
  });

  // tables
  auto* tab = app.add_subcommand(
      "tables", "Rank formulas for feasible constructions and their exponents");
  Common tab_c;
  std::string tab_family = "all";
  long long tab_n = 0;
  tab->add_option("--family", tab_family, "Construction family")
      ->check(CLI::IsMember({"all", "1978", "1980", "1981", "1982"}));
  tab->add_option("--n", tab_n, "Evaluate the formula at this size");
  tab_c.attach(tab);
  tab->callback([&] {
    json p;
    p["family"] = tab_family;
    if (tab->count("--n")) p["n"] = tab_n;
    exit_code = run("tables", p, tab_c.format, tab_c.out);
  });

  // convolve
  auto* conv = app.add_subcommand(
      "convolve", "Polynomial product, direct versus FFT, with operation counts");
  Common conv_c;
  std::size_t conv_n = 8;
  std::uint64_t conv_seed = 1;
  conv->add_option("--n", conv_n, "Degree of both input polynomials");
  conv->add_option("--seed", conv_seed, "Random seed");
  conv_c.attach(conv);
  conv->callback([&] {
    json p;
    if (conv->count("--n")) p["n"] = conv_n;
    if (conv->count("--seed")) p["seed"] = conv_seed;
    exit_code = run("convolve", p, conv_c.format, conv_c.out);
  });

  // polymm
  auto* pmm = app.add_subcommand(
      "polymm", "Matrices of polynomials: coefficientwise FFT versus FFT of matrices");
  Common pmm_c;
  std::size_t pmm_k = 0, pmm_m = 0, pmm_n = 0, pmm_deg = 0;
  std::string pmm_method = "all";
  std::uint64_t pmm_seed = 1;
  pmm->add_option("--k", pmm_k, "Rows of the left operand");
  pmm->add_option("--m", pmm_m, "Shared dimension");
  pmm->add_option("--n", pmm_n, "Columns (or square size)");
  pmm->add_option("--degree", pmm_deg, "Degree of every entry");
  pmm->add_option("--method", pmm_method, "Method to compare")
      ->check(CLI::IsMember({"all", "straight", "coeff-fft", "matrix-coeff-fft"}));
  pmm->add_option("--seed", pmm_seed, "Random seed");
  pmm_c.attach(pmm);
  pmm->callback([&] {
    json p;
    if (pmm->count("--k")) p["k"] = pmm_k;
    if (pmm->count("--m")) p["m"] = pmm_m;
    if (pmm->count("--n")) p["n"] = pmm_n;
    if (pmm->count("--degree")) p["degree"] = pmm_deg;
    p["method"] = pmm_method;
    if (pmm->count("--seed")) p["seed"] = pmm_seed;
    exit_code = run("polymm", p, pmm_c.format, pmm_c.out);
  });

  // complexmm
  auto* cmm = app.add_subcommand(
      "complexmm", "Complex matrix product with four versus three real products");
  Common cmm_c;
  std::size_t cmm_n = 8;
  std::uint64_t cmm_seed = 1;
  cmm->add_option("--n", cmm_n, "Square size");
  cmm->add_option("--seed", cmm_seed, "Random seed");
  cmm_c.attach(cmm);
  cmm->callback([&] {
    json p;
    if (cmm->count("--n")) p["n"] = cmm_n;
    if (cmm->count("--seed")) p["seed"] = cmm_seed;
    exit_code = run("complexmm", p, cmm_c.format, cmm_c.out);
  });

  // sample
  auto* smp = app.add_subcommand(
      "sample", "Randomized column sampling approximation of a product");
  Common smp_c;
  std::size_t smp_k = 0, smp_m = 0, smp_n = 0, smp_cc = 0, smp_trials = 0;
  std::uint64_t smp_seed = 1;
  smp->add_option("--k", smp_k, "Rows of the left operand");
  smp->add_option("--m", smp_m, "Shared dimension");
  smp->add_option("--n", smp_n, "Columns (or square size)");
  smp->add_option("--c", smp_cc, "Sampled columns per trial");
  smp->add_option("--trials", smp_trials, "Independent trials");
  smp->add_option("--seed", smp_seed, "Random seed");
  smp_c.attach(smp);
  smp->callback([&] {
    json p;
    if (smp->count("--k")) p["k"] = smp_k;
    if (smp->count("--m")) p["m"] = smp_m;
    if (smp->count("--n")) p["n"] = smp_n;
    if (smp->count("--c")) p["c"] = smp_cc;
    if (smp->count("--trials")) p["trials"] = smp_trials;
    if (smp->count("--seed")) p["seed"] = smp_seed;
    exit_code = run("sample", p, smp_c.format, smp_c.out);
  });

  // crossover
  auto* cro = app.add_subcommand(
      "crossover", "Model and measure where recursion beats the straightforward method");
  Common cro_c;
  int cro_max_g = 12, cro_measure_g = 3;
  std::uint64_t cro_seed = 1;
  cro->add_option("--max-g", cro_max_g, "Model depth: sizes up to 2^g");
  cro->add_option("--measure-g", cro_measure_g, "Measure actual counts up to 2^g");
  cro->add_option("--seed", cro_seed, "Random seed");
  cro_c.attach(cro);
  cro->callback([&] {
    json p;
    if (cro->count("--max-g")) p["max_g"] = cro_max_g;
    if (cro->count("--measure-g")) p["measure_g"] = cro_measure_g;
    if (cro->count("--seed")) p["seed"] = cro_seed;
    exit_code = run("crossover", p, cro_c.format, cro_c.out);
  });

  // stability
  auto* sta = app.add_subcommand(
      "stability", "Floating point error of recursion against exact arithmetic");
  Common sta_c;
  std::string sta_sizes;
  std::size_t sta_cutoff = 0;
  std::uint64_t sta_seed = 1;
  sta->add_option("--sizes", sta_sizes, "Comma separated sizes, e.g. 32,64,128");
  sta->add_option("--cutoff", sta_cutoff, "Recursion cutoff");
  sta->add_option("--seed", sta_seed, "Random seed");
  sta_c.attach(sta);
  sta->callback([&] {
    json p;
    if (sta->count("--sizes")) p["sizes"] = sta_sizes;
    if (sta->count("--cutoff")) p["cutoff"] = sta_cutoff;
    if (sta->count("--seed")) p["seed"] = sta_seed;
    exit_code = run("stability", p, sta_c.format, sta_c.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
