#include "format.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace mmkit {

std::string rat_to_string(const Rat& q) { return q.str(); }

Rat rat_from_string(const std::string& tok) {
  if (tok.empty()) throw ParseError("empty coefficient token");
  std::size_t slash = tok.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(tok));
    BigInt num(tok.substr(0, slash));
    BigInt den(tok.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in coefficient: " + tok);
    return Rat(num, den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed coefficient: " + tok);
  }
}

std::string lpoly_to_string(const LPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t t = 0; t < p.c.size(); ++t) {
    if (t) out += ':';
    out += rat_to_string(p.c[t]);
  }
  return out;
}

LPoly lpoly_from_string(const std::string& tok) {
  LPoly p;
  std::size_t pos = 0;
  while (pos <= tok.size()) {
    std::size_t colon = tok.find(':', pos);
    std::string piece =
        tok.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
    p.c.push_back(rat_from_string(piece));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  p.trim();
  return p;
}

namespace {

void write_target(std::ostringstream& out, const Target& t) {
  if (t.is_mm()) {
    const MmShape& s = t.shape();
    out << "target mm " << s.k << " " << s.m << " " << s.n << "\n";
    return;
  }
  if (t.is_disjoint()) {
    out << "target disjoint " << t.shapes().size();
    for (const MmShape& s : t.shapes()) out << " " << s.k << " " << s.m << " " << s.n;
    out << "\n";
    return;
  }
  const Tensor3& ten = t.tensor();
  auto entries = ten.entries();
  out << "target tensor " << ten.alpha() << " " << ten.beta() << " " << ten.gamma()
      << " " << entries.size() << "\n";
  for (const TensorEntry& e : entries)
    out << e.i << " " << e.j << " " << e.h << " " << rat_to_string(e.value) << "\n";
}

template <typename T, typename ToStr>
void write_grid(std::ostringstream& out, const char* label, const Matrix<T>& m,
                ToStr to_str) {
  out << label << " " << m.rows() << " " << m.cols() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      out << to_str(m(i, j));
    }
    out << "\n";
  }
}

struct LineReader {
  std::vector<std::string> lines;
  std::size_t pos = 0;

  explicit LineReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.pop_back();
      std::size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (line[first] == '#') continue;
      lines.push_back(line.substr(first));
    }
  }

  bool done() const { return pos >= lines.size(); }

  std::vector<std::string> next(const char* what) {
    if (done()) throw ParseError(std::string("unexpected end of file, expected ") + what);
    std::istringstream in(lines[pos++]);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
  }
};

std::size_t to_size(const std::string& tok, const char* what) {
  try {
    long long v = std::stoll(tok);
    if (v < 0) throw ParseError(std::string("negative ") + what);
    return static_cast<std::size_t>(v);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(std::string("malformed ") + what + ": " + tok);
  }
}

Target read_target(LineReader& in) {
  auto toks = in.next("target line");
  if (toks.size() < 2 || toks[0] != "target") throw ParseError("expected target line");
  if (toks[1] == "mm") {
    if (toks.size() != 5) throw ParseError("target mm needs three dimensions");
    return Target::mm(to_size(toks[2], "dimension"), to_size(toks[3], "dimension"),
                      to_size(toks[4], "dimension"));
  }
  if (toks[1] == "disjoint") {
    if (toks.size() < 3) throw ParseError("target disjoint needs a shape count");
    std::size_t count = to_size(toks[2], "shape count");
    if (toks.size() != 3 + 3 * count)
      throw ParseError("target disjoint shape list has the wrong length");
    std::vector<MmShape> shapes;
    for (std::size_t p = 0; p < count; ++p)
      shapes.push_back({to_size(toks[3 + 3 * p], "dimension"),
                        to_size(toks[4 + 3 * p], "dimension"),
                        to_size(toks[5 + 3 * p], "dimension")});
    return Target::disjoint(std::move(shapes));
  }
  if (toks[1] == "tensor") {
    if (toks.size() != 6) throw ParseError("target tensor needs dims and entry count");
    Tensor3 ten(to_size(toks[2], "dimension"), to_size(toks[3], "dimension"),
                to_size(toks[4], "dimension"));
    std::size_t nnz = to_size(toks[5], "entry count");
    for (std::size_t e = 0; e < nnz; ++e) {
      auto row = in.next("tensor entry");
      if (row.size() != 4) throw ParseError("tensor entry needs i j h value");
      std::size_t i = to_size(row[0], "index"), j = to_size(row[1], "index"),
                  h = to_size(row[2], "index");
      if (i >= ten.alpha() || j >= ten.beta() || h >= ten.gamma())
        throw ParseError("tensor entry out of range");
      ten.at(i, j, h) = rat_from_string(row[3]);
    }
    return Target::raw(std::move(ten));
  }
  throw ParseError("unknown target kind: " + toks[1]);
}

template <typename T, typename FromStr>
Matrix<T> read_grid(LineReader& in, const char* label, std::size_t want_rows,
                    std::size_t want_cols, FromStr from_str) {
  auto head = in.next(label);
  if (head.size() != 3 || head[0] != label)
    throw ParseError(std::string("expected ") + label + " grid header");
  std::size_t rows = to_size(head[1], "row count");
  std::size_t cols = to_size(head[2], "column count");
  if (rows != want_rows || cols != want_cols)
    throw ParseError(std::string(label) + " grid does not match target and rank");
  Matrix<T> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    auto row = in.next("grid row");
    if (row.size() != cols)
      throw ParseError(std::string(label) + " row has the wrong number of entries");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = from_str(row[j]);
  }
  return m;
}

}  // namespace

std::string serialize(const AnyAlg& alg) {
  std::ostringstream out;
  out << "mmalg 1\n";
  out << "name " << algorithm_name(alg) << "\n";
  write_target(out, algorithm_target(alg));
  out << "rank " << algorithm_rank(alg) << "\n";
  if (const auto* apa = std::get_if<ApaAlgorithm>(&alg)) {
    out << "order " << apa->order << "\n";
    write_grid(out, "U", apa->U, lpoly_to_string);
    write_grid(out, "V", apa->V, lpoly_to_string);
    write_grid(out, "W", apa->W, lpoly_to_string);
  } else {
    const auto& d = std::get<Decomposition>(alg);
    write_grid(out, "U", d.U, rat_to_string);
    write_grid(out, "V", d.V, rat_to_string);
    write_grid(out, "W", d.W, rat_to_string);
  }
  out << "end\n";
  return out.str();
}

AnyAlg parse_algorithm(const std::string& text) {
  LineReader in(text);
  auto magic = in.next("format header");
  if (magic.size() != 2 || magic[0] != "mmalg" || magic[1] != "1")
    throw ParseError("not an algorithm file (missing mmalg 1 header)");
  auto name_line = in.next("name line");
  if (name_line.size() != 2 || name_line[0] != "name")
    throw ParseError("expected name line");
  std::string name = name_line[1];
  Target target = read_target(in);
  auto rank_line = in.next("rank line");
  if (rank_line.size() != 2 || rank_line[0] != "rank")
    throw ParseError("expected rank line");
  std::size_t rank = to_size(rank_line[1], "rank");

  bool is_apa = false;
  std::size_t order = 0;
  if (!in.done()) {
    std::istringstream peek(in.lines[in.pos]);
    std::string head;
    peek >> head;
    if (head == "order") {
      auto order_line = in.next("order line");
      if (order_line.size() != 2) throw ParseError("expected order line");
      order = to_size(order_line[1], "order");
      is_apa = true;
    }
  }

  AnyAlg out;
  if (is_apa) {
    ApaAlgorithm alg;
    alg.name = std::move(name);
    alg.target = std::move(target);
    alg.rank = rank;
    alg.order = order;
    alg.U = read_grid<LPoly>(in, "U", alg.target.alpha(), rank, lpoly_from_string);
    alg.V = read_grid<LPoly>(in, "V", alg.target.beta(), rank, lpoly_from_string);
    alg.W = read_grid<LPoly>(in, "W", alg.target.gamma(), rank, lpoly_from_string);
    out = std::move(alg);
  } else {
    Decomposition d;
    d.name = std::move(name);
    d.target = std::move(target);
    d.rank = rank;
    d.U = read_grid<Rat>(in, "U", d.target.alpha(), rank, rat_from_string);
    d.V = read_grid<Rat>(in, "V", d.target.beta(), rank, rat_from_string);
    d.W = read_grid<Rat>(in, "W", d.target.gamma(), rank, rat_from_string);
    out = std::move(d);
  }
  auto end_line = in.next("end line");
  if (end_line.size() != 1 || end_line[0] != "end")
    throw ParseError("expected end line");
  return out;
}

void save_algorithm(const AnyAlg& alg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << serialize(alg);
  if (!out) throw IoError("write failed: " + path);
}

AnyAlg load_algorithm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_algorithm(buf.str());
}

const std::string& algorithm_name(const AnyAlg& alg) {
  if (const auto* apa = std::get_if<ApaAlgorithm>(&alg)) return apa->name;
  return std::get<Decomposition>(alg).name;
}

const Target& algorithm_target(const AnyAlg& alg) {
  if (const auto* apa = std::get_if<ApaAlgorithm>(&alg)) return apa->target;
  return std::get<Decomposition>(alg).target;
}

std::size_t algorithm_rank(const AnyAlg& alg) {
  if (const auto* apa = std::get_if<ApaAlgorithm>(&alg)) return apa->rank;
  return std::get<Decomposition>(alg).rank;
}

}  // namespace mmkit
