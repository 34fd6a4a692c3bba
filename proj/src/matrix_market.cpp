#include "redamge/matrix_market.hpp"

#include "redamge/error.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace redamge::mm {

namespace {

constexpr const char* kCoordinateHeader = "%%MatrixMarket matrix coordinate real general";
constexpr const char* kArrayHeader = "%%MatrixMarket matrix array real general";

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_kinds(std::ostream& os, const std::string& row_kind, const std::string& col_kind) {
  if (!row_kind.empty() || !col_kind.empty())
    os << "% kinds: " << (row_kind.empty() ? "-" : row_kind) << ' '
       << (col_kind.empty() ? "-" : col_kind) << '\n';
}

struct Coordinate {
  index_t nrows = 0, ncols = 0;
  std::vector<Triplet> entries;
  std::string row_kind, col_kind;
};

Coordinate read_coordinate(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::io, "MatrixMarket: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kCoordinateHeader, ErrorCode::io, "MatrixMarket: unsupported header '" + line + "'");
  Coordinate c;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '%') {
      std::istringstream ks(line);
      std::string pct, tag;
      ks >> pct >> tag;
      if (tag == "kinds:") {
        ks >> c.row_kind >> c.col_kind;
        if (c.row_kind == "-") c.row_kind.clear();
        if (c.col_kind == "-") c.col_kind.clear();
      }
      continue;
    }
    break;
  }
  std::istringstream size_line(line);
  long long nnz = 0;
  require(static_cast<bool>(size_line >> c.nrows >> c.ncols >> nnz), ErrorCode::io,
          "MatrixMarket: bad size line");
  c.entries.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    require(static_cast<bool>(is >> i >> j >> v), ErrorCode::io, "MatrixMarket: truncated entries");
    require(i >= 1 && i <= c.nrows && j >= 1 && j <= c.ncols, ErrorCode::io,
            "MatrixMarket: index out of range");
    c.entries.push_back({static_cast<index_t>(i - 1), static_cast<index_t>(j - 1), v});
  }
  return c;
}

template <class T>
void write_file(const std::filesystem::path& path, const T& obj) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::io, "cannot open " + path.string() + " for writing");
  write(os, obj);
}

}  // namespace

void write(std::ostream& os, const SparseMatrix& a) {
  os << kCoordinateHeader << '\n';
  write_kinds(os, a.row_kind(), a.col_kind());
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (index_t i = 0; i < a.rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p)
      os << i + 1 << ' ' << cols[p] + 1 << ' ' << format_real(vals[p]) << '\n';
  }
}

void write(std::ostream& os, const Relation& r) { write(os, SparseMatrix::from_relation(r)); }

void write(const std::filesystem::path& path, const SparseMatrix& a) { write_file(path, a); }
void write(const std::filesystem::path& path, const Relation& r) { write_file(path, r); }

SparseMatrix read_matrix(std::istream& is) {
  auto c = read_coordinate(is);
  auto m = SparseMatrix::from_triplets(c.nrows, c.ncols, std::move(c.entries));
  m.set_kinds(c.row_kind, c.col_kind);
  return m;
}

Relation read_relation(std::istream& is) {
  auto c = read_coordinate(is);
  std::vector<std::pair<index_t, index_t>> pairs;
  for (const auto& t : c.entries)
    if (t.value != 0.0) pairs.emplace_back(t.row, t.col);
  return Relation::from_pairs(c.row_kind, c.col_kind, c.nrows, c.ncols, std::move(pairs));
}

SparseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::io, "cannot open " + path.string());
  return read_matrix(is);
}

Relation read_relation(const std::filesystem::path& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::io, "cannot open " + path.string());
  return read_relation(is);
}

void write_array(std::ostream& os, std::span<const double> v) {
  os << kArrayHeader << '\n' << v.size() << " 1\n";
  for (double x : v) os << format_real(x) << '\n';
}

void write_array(const std::filesystem::path& path, std::span<const double> v) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::io, "cannot open " + path.string() + " for writing");
  write_array(os, v);
}

std::vector<double> read_array(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::io, "MatrixMarket: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kArrayHeader, ErrorCode::io, "MatrixMarket: unsupported header '" + line + "'");
  while (std::getline(is, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream size_line(line);
  long long n = 0, m = 0;
  require(static_cast<bool>(size_line >> n >> m) && m == 1, ErrorCode::io,
          "MatrixMarket: array must be a column vector");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) require(static_cast<bool>(is >> x), ErrorCode::io, "MatrixMarket: truncated array");
  return v;
}

}  // namespace redamge::mm
