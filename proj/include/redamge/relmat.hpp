#pragma once

// Boolean relation tables ("object1_object2") and the numeric sparse kernels
// built on top of them. Storage is CSR with strictly ascending column indices
// in every row; every routine here preserves that canonical order.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace redamge {

using index_t = std::int32_t;

class Relation {
public:
  Relation() = default;
  /// Empty relation of the given shape.
  Relation(std::string row_kind, std::string col_kind, index_t nrows, index_t ncols);

  /// Rows are sorted and deduplicated; out-of-range columns are rejected.
  static Relation from_rows(std::string row_kind, std::string col_kind, index_t ncols,
                            const std::vector<std::vector<index_t>>& rows);
  static Relation from_pairs(std::string row_kind, std::string col_kind, index_t nrows,
                             index_t ncols, std::vector<std::pair<index_t, index_t>> pairs);
  /// One entry per row: row i -> col[i]. Negative entries leave the row empty.
  static Relation from_map(std::string row_kind, std::string col_kind, index_t ncols,
                           std::span<const index_t> col);
  static Relation identity(const std::string& kind, index_t n);

  index_t rows() const { return nrows_; }
  index_t cols() const { return ncols_; }
  index_t nnz() const { return static_cast<index_t>(indices_.size()); }
  std::span<const index_t> row(index_t i) const {
    return {indices_.data() + offsets_[i], indices_.data() + offsets_[i + 1]};
  }
  index_t row_size(index_t i) const { return offsets_[i + 1] - offsets_[i]; }
  bool contains(index_t i, index_t j) const;

  const std::string& row_kind() const { return row_kind_; }
  const std::string& col_kind() const { return col_kind_; }
  Relation relabeled(std::string row_kind, std::string col_kind) const;

  const std::vector<index_t>& offsets() const { return offsets_; }
  const std::vector<index_t>& indices() const { return indices_; }

  /// Structural equality; entity kinds are compared too.
  friend bool operator==(const Relation& a, const Relation& b);

private:
  std::string row_kind_;
  std::string col_kind_;
  index_t nrows_ = 0;
  index_t ncols_ = 0;
  std::vector<index_t> offsets_{0};
  std::vector<index_t> indices_;
};

Relation transpose(const Relation& r);
/// (i,k) is present iff some j has (i,j) in a and (j,k) in b. Multiplicities are dropped.
Relation bool_multiply(const Relation& a, const Relation& b);
/// True iff every column holds exactly one entry.
bool is_partition(const Relation& r);
std::vector<index_t> column_counts(const Relation& r);
/// Inverse of a partition relation: child -> parent index.
std::vector<index_t> partition_owner(const Relation& r);

struct Triplet {
  index_t row;
  index_t col;
  double value;
};

/// Numeric CSR matrix. Entity-kind labels are optional; when both operands of a
/// product carry labels they must agree.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(index_t nrows, index_t ncols);

  /// Duplicate (row, col) pairs are summed in input order.
  static SparseMatrix from_triplets(index_t nrows, index_t ncols, std::vector<Triplet> triplets);
  static SparseMatrix from_relation(const Relation& r);
  static SparseMatrix identity(index_t n);
  static SparseMatrix from_dense(index_t nrows, index_t ncols, std::span<const double> row_major,
                                 bool keep_zeros = false);

  index_t rows() const { return nrows_; }
  index_t cols() const { return ncols_; }
  index_t nnz() const { return static_cast<index_t>(indices_.size()); }
  std::span<const index_t> row_cols(index_t i) const {
    return {indices_.data() + offsets_[i], indices_.data() + offsets_[i + 1]};
  }
  std::span<const double> row_values(index_t i) const {
    return {values_.data() + offsets_[i], values_.data() + offsets_[i + 1]};
  }
  /// Zero when (i,j) is not stored.
  double at(index_t i, index_t j) const;

  const std::vector<index_t>& offsets() const { return offsets_; }
  const std::vector<index_t>& indices() const { return indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  const std::string& row_kind() const { return row_kind_; }
  const std::string& col_kind() const { return col_kind_; }
  SparseMatrix& set_kinds(std::string row_kind, std::string col_kind);

  /// Row-major dense copy, for small problems and test oracles.
  std::vector<double> to_dense() const;
  std::vector<double> apply(std::span<const double> x) const;

private:
  friend SparseMatrix transpose(const SparseMatrix&);
  friend SparseMatrix multiply(const SparseMatrix&, const SparseMatrix&);

  index_t nrows_ = 0;
  index_t ncols_ = 0;
  std::vector<index_t> offsets_{0};
  std::vector<index_t> indices_;
  std::vector<double> values_;
  std::string row_kind_;
  std::string col_kind_;
};

SparseMatrix transpose(const SparseMatrix& a);
/// Gustavson product. Each output entry accumulates a(i,k)*b(k,j) over ascending k,
/// and structural zeros of the symbolic product are kept, so the pattern equals the
/// boolean product of the operand patterns.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
/// Computes left * mid * right exactly as written, as (left * mid) * right.
/// Callers pass transposes explicitly.
SparseMatrix num_triple_product(const SparseMatrix& left, const SparseMatrix& mid,
                                const SparseMatrix& right);
Relation pattern(const SparseMatrix& a, std::string row_kind = {}, std::string col_kind = {});

/// max |a_ij - b_ij| over the union of both patterns.
double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b);
double max_abs(const SparseMatrix& a);
bool same_pattern(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace redamge
