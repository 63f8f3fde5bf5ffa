#include "pseudofin/textio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pseudofin/error.hpp"

namespace pseudofin {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::int64_t> values;
  std::vector<std::string> words;
};

// Non-blank lines with comments removed, split into tokens. Integer tokens
// go to values; a line holding a single non-numeric token keeps it in words.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    Line line{number, {}, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) {
        const std::string_view tok = raw.substr(i, j - i);
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec == std::errc() && ptr == tok.data() + tok.size()) {
          if (!line.words.empty()) {
            throw ParseError(number, "unexpected number after '" + line.words.front() + "'");
          }
          line.values.push_back(v);
        } else {
          if (!line.values.empty() || !line.words.empty()) {
            throw ParseError(number, "unexpected token '" + std::string(tok) + "'");
          }
          line.words.emplace_back(tok);
        }
      }
      i = j;
    }
    if (!line.values.empty() || !line.words.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

std::size_t last_line(std::string_view text) {
  std::size_t n = 1;
  for (char c : text) n += c == '\n';
  return n;
}

void expect_count(const Line& line, std::size_t count, const std::string& what) {
  if (!line.words.empty()) {
    throw ParseError(line.number, "expected " + what + ", found '" + line.words.front() + "'");
  }
  if (line.values.size() != count) {
    throw ParseError(line.number, "expected " + std::to_string(count) + " integers (" +
                                      what + "), found " + std::to_string(line.values.size()));
  }
}

std::size_t positive(const Line& line, std::int64_t v, const std::string& what) {
  if (v < 1) throw ParseError(line.number, what + " must be >= 1");
  return static_cast<std::size_t>(v);
}

BilinearStructure structure_from_lines(const std::vector<Line>& lines, std::size_t first,
                                       std::size_t eof_line) {
  if (first >= lines.size()) throw ParseError(eof_line, "missing header 'p n d'");
  const Line& head = lines[first];
  expect_count(head, 3, "header 'p n d'");
  const auto p = head.values[0];
  if (p < 2 || p >= 65536 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw ParseError(head.number, "p = " + std::to_string(p) + " is not a prime below 65536");
  }
  const std::size_t n = positive(head, head.values[1], "n");
  const std::size_t d = positive(head, head.values[2], "d");
  if (n > 64 || d > 64) throw ParseError(head.number, "dimensions above 64 are not supported");
  const PrimeField f(static_cast<std::uint32_t>(p));
  std::vector<Residue> gram(n * n * d);
  for (std::size_t e = 0; e < n * n; ++e) {
    const std::size_t idx = first + 1 + e;
    if (idx >= lines.size()) {
      throw ParseError(eof_line, "expected " + std::to_string(n * n) +
                                     " gram lines, found " + std::to_string(e));
    }
    expect_count(lines[idx], d, "gram entry");
    for (std::size_t c = 0; c < d; ++c) gram[e * d + c] = f.reduce(lines[idx].values[c]);
  }
  if (first + 1 + n * n != lines.size()) {
    throw ParseError(lines[first + 1 + n * n].number, "trailing content after structure");
  }
  return BilinearStructure(f, n, d, std::move(gram));
}

}  // namespace

BilinearStructure parse_structure(std::string_view text) {
  return structure_from_lines(tokenize(text), 0, last_line(text));
}

std::string format_structure(const BilinearStructure& s) {
  std::ostringstream out;
  out << s.field().p() << ' ' << s.n() << ' ' << s.d() << '\n';
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (std::size_t j = 0; j < s.n(); ++j) {
      for (std::size_t c = 0; c < s.d(); ++c) {
        out << (c ? " " : "") << s.gram_coord(i, j, c);
      }
      out << '\n';
    }
  }
  return out.str();
}

TableGroup LoadedGroup::as_table_group() const {
  if (table) return *table;
  return as_table(*class2);
}

LoadedGroup parse_group(std::string_view text) {
  const auto lines = tokenize(text);
  const std::size_t eof = last_line(text);
  if (lines.empty()) throw ParseError(eof, "empty group file");
  const Line& head = lines.front();
  if (head.words.size() != 1) {
    throw ParseError(head.number, "expected 'bilinear' or 'table' header");
  }
  LoadedGroup out;
  if (head.words.front() == "bilinear") {
    auto s = structure_from_lines(lines, 1, eof);
    try {
      out.class2.emplace(std::move(s));
    } catch (const PreconditionError& e) {
      throw ParseError(lines[1].number, e.what());
    }
    return out;
  }
  if (head.words.front() != "table") {
    throw ParseError(head.number, "unknown group kind '" + head.words.front() + "'");
  }
  if (lines.size() < 2) throw ParseError(eof, "missing table order");
  expect_count(lines[1], 1, "order");
  const std::size_t order = positive(lines[1], lines[1].values[0], "order");
  if (order > 4096) throw ParseError(lines[1].number, "table order above 4096");
  std::vector<TableGroup::Index> table;
  table.reserve(order * order);
  for (std::size_t r = 0; r < order; ++r) {
    if (2 + r >= lines.size()) {
      throw ParseError(eof, "expected " + std::to_string(order) + " table rows, found " +
                                std::to_string(r));
    }
    const Line& row = lines[2 + r];
    expect_count(row, order, "table row");
    for (auto v : row.values) {
      if (v < 0 || static_cast<std::size_t>(v) >= order) {
        throw ParseError(row.number, "entry " + std::to_string(v) + " out of range");
      }
      table.push_back(static_cast<TableGroup::Index>(v));
    }
  }
  if (2 + order != lines.size()) {
    throw ParseError(lines[2 + order].number, "trailing content after table");
  }
  try {
    out.table.emplace(TableGroup::from_cayley_table(order, std::move(table)));
  } catch (const PreconditionError& e) {
    throw ParseError(lines[1].number, e.what());
  }
  return out;
}

std::string format_group(const Class2Group& g) {
  return "bilinear\n" + format_structure(g.structure());
}

std::string format_group(const TableGroup& g) {
  const auto table = g.cayley_table();
  std::ostringstream out;
  out << "table\n" << g.order() << '\n';
  for (std::size_t a = 0; a < g.order(); ++a) {
    for (std::size_t b = 0; b < g.order(); ++b) {
      out << (b ? " " : "") << table[a * g.order() + b];
    }
    out << '\n';
  }
  return out.str();
}

std::vector<StarInstance> parse_instances(std::string_view text, const Class2Group& g) {
  const PrimeField& f = g.field();
  const std::size_t n = g.n(), d = g.d();
  std::vector<StarInstance> out;
  for (const auto& line : tokenize(text)) {
    if (!line.words.empty()) {
      throw ParseError(line.number, "unexpected token '" + line.words.front() + "'");
    }
    if (line.values.empty() || line.values[0] < 0 || line.values[0] > 16) {
      throw ParseError(line.number, "instance must start with 0 <= k <= 16");
    }
    const auto k = static_cast<std::size_t>(line.values[0]);
    const std::size_t expected = 1 + k * n + k * (n + d) + (n + d) + 1;
    if (line.values.size() != expected) {
      throw ParseError(line.number, "expected " + std::to_string(expected) +
                                        " integers for k = " + std::to_string(k) + ", found " +
                                        std::to_string(line.values.size()));
    }
    std::size_t at = 1;
    auto take = [&](std::size_t count) {
      std::vector<std::int64_t> v(line.values.begin() + static_cast<std::ptrdiff_t>(at),
                                  line.values.begin() + static_cast<std::ptrdiff_t>(at + count));
      at += count;
      return VectorFp(f, std::move(v));
    };
    std::vector<VectorFp> gens;
    for (std::size_t i = 0; i < k; ++i) gens.push_back(take(n));
    std::vector<GroupElement> alpha;
    for (std::size_t i = 0; i < k; ++i) {
      VectorFp v = take(n);
      alpha.push_back({v, take(d)});
    }
    VectorFp wv = take(n);
    GroupElement w{wv, take(d)};
    const auto r = line.values[at];
    if (r < 0 || r > 62) throw ParseError(line.number, "r out of range");
    out.push_back({std::move(gens), std::move(alpha), std::move(w), static_cast<std::size_t>(r)});
  }
  return out;
}

std::string format_instance(const StarInstance& inst) {
  std::ostringstream out;
  out << inst.generators.size();
  auto put = [&](const VectorFp& v) {
    for (auto c : v.coords()) out << ' ' << c;
  };
  for (const auto& v : inst.generators) put(v);
  for (const auto& a : inst.alpha) {
    put(a.v);
    put(a.w);
  }
  put(inst.w.v);
  put(inst.w.w);
  out << ' ' << inst.r;
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

}  // namespace pseudofin
