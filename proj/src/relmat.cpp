#include "redamge/relmat.hpp"

#include "redamge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace redamge {

namespace {

void check_kinds(const std::string& left_col, const std::string& right_row, const char* op) {
  if (!left_col.empty() && !right_row.empty() && left_col != right_row)
    fail(ErrorCode::kind_mismatch, std::string(op) + ": kind mismatch '" + left_col + "' vs '" +
                                       right_row + "'");
}

}  // namespace

Relation::Relation(std::string row_kind, std::string col_kind, index_t nrows, index_t ncols)
    : row_kind_(std::move(row_kind)),
      col_kind_(std::move(col_kind)),
      nrows_(nrows),
      ncols_(ncols),
      offsets_(static_cast<std::size_t>(nrows) + 1, 0) {
  require(nrows >= 0 && ncols >= 0, ErrorCode::invalid_argument, "Relation: negative size");
}

Relation Relation::from_rows(std::string row_kind, std::string col_kind, index_t ncols,
                             const std::vector<std::vector<index_t>>& rows) {
  Relation r(std::move(row_kind), std::move(col_kind), static_cast<index_t>(rows.size()), ncols);
  std::vector<index_t> buf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    buf = rows[i];
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    for (index_t c : buf) {
      require(c >= 0 && c < ncols, ErrorCode::invalid_argument, "Relation: column out of range");
      r.indices_.push_back(c);
    }
    r.offsets_[i + 1] = static_cast<index_t>(r.indices_.size());
  }
  return r;
}

Relation Relation::from_pairs(std::string row_kind, std::string col_kind, index_t nrows,
                              index_t ncols, std::vector<std::pair<index_t, index_t>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  Relation r(std::move(row_kind), std::move(col_kind), nrows, ncols);
  for (auto [i, j] : pairs) {
    require(i >= 0 && i < nrows && j >= 0 && j < ncols, ErrorCode::invalid_argument,
            "Relation: pair out of range");
    ++r.offsets_[i + 1];
    r.indices_.push_back(j);
  }
  std::partial_sum(r.offsets_.begin(), r.offsets_.end(), r.offsets_.begin());
  return r;
}

Relation Relation::from_map(std::string row_kind, std::string col_kind, index_t ncols,
                            std::span<const index_t> col) {
  Relation r(std::move(row_kind), std::move(col_kind), static_cast<index_t>(col.size()), ncols);
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (col[i] >= 0) {
      require(col[i] < ncols, ErrorCode::invalid_argument, "Relation: column out of range");
      r.indices_.push_back(col[i]);
    }
    r.offsets_[i + 1] = static_cast<index_t>(r.indices_.size());
  }
  return r;
}

Relation Relation::identity(const std::string& kind, index_t n) {
  std::vector<index_t> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  return from_map(kind, kind, n, map);
}

bool Relation::contains(index_t i, index_t j) const {
  auto r = row(i);
  return std::binary_search(r.begin(), r.end(), j);
}

Relation Relation::relabeled(std::string row_kind, std::string col_kind) const {
  Relation r = *this;
  r.row_kind_ = std::move(row_kind);
  r.col_kind_ = std::move(col_kind);
  return r;
}

bool operator==(const Relation& a, const Relation& b) {
  return a.row_kind_ == b.row_kind_ && a.col_kind_ == b.col_kind_ && a.nrows_ == b.nrows_ &&
         a.ncols_ == b.ncols_ && a.offsets_ == b.offsets_ && a.indices_ == b.indices_;
}

Relation transpose(const Relation& r) {
  std::vector<std::pair<index_t, index_t>> pairs;
  pairs.reserve(static_cast<std::size_t>(r.nnz()));
  for (index_t i = 0; i < r.rows(); ++i)
    for (index_t j : r.row(i)) pairs.emplace_back(j, i);
  return Relation::from_pairs(r.col_kind(), r.row_kind(), r.cols(), r.rows(), std::move(pairs));
}

Relation bool_multiply(const Relation& a, const Relation& b) {
  check_kinds(a.col_kind(), b.row_kind(), "bool_multiply");
  require(a.cols() == b.rows(), ErrorCode::dimension_mismatch, "bool_multiply: inner dimension");
  std::vector<std::vector<index_t>> rows(static_cast<std::size_t>(a.rows()));
  std::vector<index_t> marker(static_cast<std::size_t>(b.cols()), -1);
  for (index_t i = 0; i < a.rows(); ++i) {
    auto& out = rows[i];
    for (index_t j : a.row(i))
      for (index_t k : b.row(j))
        if (marker[k] != i) {
          marker[k] = i;
          out.push_back(k);
        }
  }
  return Relation::from_rows(a.row_kind(), b.col_kind(), b.cols(), rows);
}

std::vector<index_t> column_counts(const Relation& r) {
  std::vector<index_t> counts(static_cast<std::size_t>(r.cols()), 0);
  for (index_t c : r.indices()) ++counts[c];
  return counts;
}

bool is_partition(const Relation& r) {
  auto counts = column_counts(r);
  return std::all_of(counts.begin(), counts.end(), [](index_t c) { return c == 1; });
}

std::vector<index_t> partition_owner(const Relation& r) {
  require(is_partition(r), ErrorCode::invalid_argument,
          "partition_owner: '" + r.row_kind() + "_" + r.col_kind() + "' is not a partition");
  std::vector<index_t> owner(static_cast<std::size_t>(r.cols()), -1);
  for (index_t i = 0; i < r.rows(); ++i)
    for (index_t j : r.row(i)) owner[j] = i;
  return owner;
}

// ---------------------------------------------------------------------------

SparseMatrix::SparseMatrix(index_t nrows, index_t ncols)
    : nrows_(nrows), ncols_(ncols), offsets_(static_cast<std::size_t>(nrows) + 1, 0) {
  require(nrows >= 0 && ncols >= 0, ErrorCode::invalid_argument, "SparseMatrix: negative size");
}

SparseMatrix SparseMatrix::from_triplets(index_t nrows, index_t ncols,
                                         std::vector<Triplet> triplets) {
  SparseMatrix m(nrows, ncols);
  for (const auto& t : triplets)
    require(t.row >= 0 && t.row < nrows && t.col >= 0 && t.col < ncols,
            ErrorCode::invalid_argument, "SparseMatrix: triplet out of range");
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  for (std::size_t t = 0; t < triplets.size();) {
    const index_t i = triplets[t].row, j = triplets[t].col;
    double v = 0.0;
    for (; t < triplets.size() && triplets[t].row == i && triplets[t].col == j; ++t)
      v += triplets[t].value;
    m.indices_.push_back(j);
    m.values_.push_back(v);
    ++m.offsets_[i + 1];
  }
  std::partial_sum(m.offsets_.begin(), m.offsets_.end(), m.offsets_.begin());
  return m;
}

SparseMatrix SparseMatrix::from_relation(const Relation& r) {
  SparseMatrix m(r.rows(), r.cols());
  m.offsets_ = r.offsets();
  m.indices_ = r.indices();
  m.values_.assign(m.indices_.size(), 1.0);
  m.row_kind_ = r.row_kind();
  m.col_kind_ = r.col_kind();
  return m;
}

SparseMatrix SparseMatrix::identity(index_t n) {
  return from_relation(Relation::identity("", n));
}

SparseMatrix SparseMatrix::from_dense(index_t nrows, index_t ncols,
                                      std::span<const double> row_major, bool keep_zeros) {
  require(static_cast<std::size_t>(nrows) * static_cast<std::size_t>(ncols) == row_major.size(),
          ErrorCode::dimension_mismatch, "from_dense: size");
  SparseMatrix m(nrows, ncols);
  for (index_t i = 0; i < nrows; ++i) {
    for (index_t j = 0; j < ncols; ++j) {
      const double v = row_major[static_cast<std::size_t>(i) * ncols + j];
      if (keep_zeros || v != 0.0) {
        m.indices_.push_back(j);
        m.values_.push_back(v);
      }
    }
    m.offsets_[i + 1] = static_cast<index_t>(m.indices_.size());
  }
  return m;
}

double SparseMatrix::at(index_t i, index_t j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[offsets_[i] + (it - cols.begin())];
}

SparseMatrix& SparseMatrix::set_kinds(std::string row_kind, std::string col_kind) {
  row_kind_ = std::move(row_kind);
  col_kind_ = std::move(col_kind);
  return *this;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(nrows_) * ncols_, 0.0);
  for (index_t i = 0; i < nrows_; ++i)
    for (index_t p = offsets_[i]; p < offsets_[i + 1]; ++p)
      d[static_cast<std::size_t>(i) * ncols_ + indices_[p]] += values_[p];
  return d;
}

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
  require(static_cast<index_t>(x.size()) == ncols_, ErrorCode::dimension_mismatch,
          "SparseMatrix::apply: size");
  std::vector<double> y(static_cast<std::size_t>(nrows_), 0.0);
  for (index_t i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (index_t p = offsets_[i]; p < offsets_[i + 1]; ++p) s += values_[p] * x[indices_[p]];
    y[i] = s;
  }
  return y;
}

SparseMatrix transpose(const SparseMatrix& a) {
  SparseMatrix t(a.ncols_, a.nrows_);
  for (index_t c : a.indices_) ++t.offsets_[c + 1];
  std::partial_sum(t.offsets_.begin(), t.offsets_.end(), t.offsets_.begin());
  t.indices_.resize(a.indices_.size());
  t.values_.resize(a.values_.size());
  std::vector<index_t> fill(t.offsets_.begin(), t.offsets_.end() - 1);
  for (index_t i = 0; i < a.nrows_; ++i)
    for (index_t p = a.offsets_[i]; p < a.offsets_[i + 1]; ++p) {
      const index_t q = fill[a.indices_[p]]++;
      t.indices_[q] = i;
      t.values_[q] = a.values_[p];
    }
  t.row_kind_ = a.col_kind_;
  t.col_kind_ = a.row_kind_;
  return t;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  check_kinds(a.col_kind_, b.row_kind_, "multiply");
  require(a.ncols_ == b.nrows_, ErrorCode::dimension_mismatch,
          "multiply: inner dimension " + std::to_string(a.ncols_) + " vs " +
              std::to_string(b.nrows_));
  SparseMatrix c(a.nrows_, b.ncols_);
  std::vector<index_t> marker(static_cast<std::size_t>(b.ncols_), -1);
  std::vector<double> acc(static_cast<std::size_t>(b.ncols_), 0.0);
  std::vector<index_t> touched;
  for (index_t i = 0; i < a.nrows_; ++i) {
    touched.clear();
    for (index_t p = a.offsets_[i]; p < a.offsets_[i + 1]; ++p) {
      const index_t k = a.indices_[p];
      const double av = a.values_[p];
      for (index_t q = b.offsets_[k]; q < b.offsets_[k + 1]; ++q) {
        const index_t j = b.indices_[q];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          touched.push_back(j);
        }
        acc[j] += av * b.values_[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (index_t j : touched) {
      c.indices_.push_back(j);
      c.values_.push_back(acc[j]);
    }
    c.offsets_[i + 1] = static_cast<index_t>(c.indices_.size());
  }
  c.row_kind_ = a.row_kind_;
  c.col_kind_ = b.col_kind_;
  return c;
}

SparseMatrix num_triple_product(const SparseMatrix& left, const SparseMatrix& mid,
                                const SparseMatrix& right) {
  return multiply(multiply(left, mid), right);
}

Relation pattern(const SparseMatrix& a, std::string row_kind, std::string col_kind) {
  if (row_kind.empty()) row_kind = a.row_kind();
  if (col_kind.empty()) col_kind = a.col_kind();
  std::vector<std::vector<index_t>> rows(static_cast<std::size_t>(a.rows()));
  for (index_t i = 0; i < a.rows(); ++i) {
    auto cols = a.row_cols(i);
    rows[i].assign(cols.begin(), cols.end());
  }
  return Relation::from_rows(std::move(row_kind), std::move(col_kind), a.cols(), rows);
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::dimension_mismatch,
          "max_abs_diff: shape");
  double m = 0.0;
  for (index_t i = 0; i < a.rows(); ++i) {
    auto ca = a.row_cols(i), cb = b.row_cols(i);
    auto va = a.row_values(i), vb = b.row_values(i);
    std::size_t p = 0, q = 0;
    while (p < ca.size() || q < cb.size()) {
      if (q == cb.size() || (p < ca.size() && ca[p] < cb[q])) {
        m = std::max(m, std::abs(va[p++]));
      } else if (p == ca.size() || cb[q] < ca[p]) {
        m = std::max(m, std::abs(vb[q++]));
      } else {
        m = std::max(m, std::abs(va[p++] - vb[q++]));
      }
    }
  }
  return m;
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.offsets() == b.offsets() &&
         a.indices() == b.indices();
}

}  // namespace redamge
