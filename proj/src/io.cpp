#include "tvpolar/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tvpolar {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& reason)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + reason), source_(source), line_(line) {}

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next non-blank, non-comment line split into tokens; empty at end of input.
  std::vector<std::string> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens.front().front() == '#') continue;
      return tokens;
    }
    ++line_no_;
    return {};
  }

  std::vector<std::string> expect(const char* what) {
    auto tokens = next();
    if (tokens.empty()) fail(std::string("unexpected end of input, expected ") + what);
    return tokens;
  }

  void expect_end() {
    if (!next().empty()) fail("trailing content after the last row");
  }

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(source_, line_no_, reason); }

  double number(const std::string& tok) const {
    double x = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) fail("not a number: '" + tok + "'");
    if (!std::isfinite(x)) fail("non-finite value: '" + tok + "'");
    return x;
  }

  std::size_t count(const std::string& tok, const char* what) const {
    std::size_t x = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      fail(std::string("expected a non-negative integer ") + what + ", got '" + tok + "'");
    }
    return x;
  }

  std::vector<double> row(std::size_t width, const char* what) {
    const auto tokens = expect(what);
    if (tokens.size() != width) {
      fail(std::string(what) + " has " + std::to_string(tokens.size()) + " entries, expected " +
           std::to_string(width));
    }
    std::vector<double> out;
    out.reserve(width);
    for (const auto& t : tokens) out.push_back(number(t));
    return out;
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::size_t read_side(LineReader& r) {
  const auto header = r.expect("the grid size N");
  if (header.size() != 1) r.fail("header must be the single grid size N");
  const std::size_t n = r.count(header[0], "grid size");
  if (n == 0) r.fail("grid size must be positive");
  return n;
}

void read_rows_into(LineReader& r, std::size_t n, GridImage& u) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto vals = r.row(n, "matrix row");
    for (std::size_t j = 0; j < n; ++j) u(i, j) = vals[j];
  }
}

template <class Reader>
auto with_file(const std::filesystem::path& path, Reader read) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read(in, path.string());
}

template <class Writer>
void to_file(const std::filesystem::path& path, Writer write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(out);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

void write_rows(std::ostream& out, const GridImage& u) {
  for (std::size_t i = 0; i < u.n(); ++i) {
    for (std::size_t j = 0; j < u.n(); ++j) out << (j ? " " : "") << format_exact(u(i, j));
    out << '\n';
  }
}

}  // namespace

GridImage read_matrix(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const std::size_t n = read_side(r);
  GridImage u(n);
  read_rows_into(r, n, u);
  r.expect_end();
  return u;
}

VectorField read_field(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const std::size_t n = read_side(r);
  VectorField g(n);
  read_rows_into(r, n, g.comp1);
  read_rows_into(r, n, g.comp2);
  r.expect_end();
  return g;
}

std::vector<Vec> read_polygon(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const auto header = r.expect("the header 'dim k'");
  if (header.size() != 2) r.fail("header must be 'dim k'");
  const std::size_t dim = r.count(header[0], "dimension");
  const std::size_t k = r.count(header[1], "vertex count");
  if (dim == 0) r.fail("dimension must be positive");
  if (k == 0) r.fail("vertex count must be positive");
  std::vector<Vec> pts;
  pts.reserve(k);
  for (std::size_t i = 0; i < k; ++i) pts.push_back(r.row(dim, "vertex row"));
  r.expect_end();
  return pts;
}

GridImage read_matrix_file(const std::filesystem::path& path) {
  return with_file(path, [](std::istream& in, const std::string& s) { return read_matrix(in, s); });
}

VectorField read_field_file(const std::filesystem::path& path) {
  return with_file(path, [](std::istream& in, const std::string& s) { return read_field(in, s); });
}

std::vector<Vec> read_polygon_file(const std::filesystem::path& path) {
  return with_file(path, [](std::istream& in, const std::string& s) { return read_polygon(in, s); });
}

void write_matrix(std::ostream& out, const GridImage& u) {
  out << u.n() << '\n';
  write_rows(out, u);
}

void write_field(std::ostream& out, const VectorField& g) {
  out << g.n() << '\n';
  write_rows(out, g.comp1);
  write_rows(out, g.comp2);
}

void write_polygon(std::ostream& out, const PolytopeNorm& p) {
  out << p.dim() << ' ' << p.vertices().size() << '\n';
  for (const Vec& v : p.vertices()) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_exact(v[i]);
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path& path, const GridImage& u) {
  to_file(path, [&](std::ostream& out) { write_matrix(out, u); });
}

void write_field_file(const std::filesystem::path& path, const VectorField& g) {
  to_file(path, [&](std::ostream& out) { write_field(out, g); });
}

void write_polygon_file(const std::filesystem::path& path, const PolytopeNorm& p) {
  to_file(path, [&](std::ostream& out) { write_polygon(out, p); });
}

std::string format_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::string format_point(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_short(v[i]);
  }
  return s + ")";
}

}  // namespace tvpolar
