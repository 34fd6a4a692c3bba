#include "redamge/simcores.hpp"

#include "redamge/error.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

namespace redamge {

std::vector<index_t> CoreLayout::active_cores() const {
  std::vector<index_t> a;
  for (index_t c = 0; c < core_element.rows(); ++c)
    if (core_element.row_size(c) > 0) a.push_back(c);
  return a;
}

index_t CoreLayout::num_active() const { return static_cast<index_t>(active_cores().size()); }

std::vector<index_t> CoreLayout::element_owner() const { return partition_owner(core_element); }

CoreLayout initial_layout(const Relation& element_element, index_t n_cores, const PartitionSpec& spec) {
  require(n_cores >= 1 && n_cores <= element_element.rows(), ErrorCode::invalid_argument,
          "initial_layout: need 1 <= n_cores <= n_elements");
  PartitionSpec s = spec;
  s.n_parts = n_cores;
  CoreLayout l;
  l.n_cores_total = n_cores;
  l.core_element = partition_graph(element_element, s, "core");
  return l;
}

std::vector<index_t> derive_owner(const Relation& x_element, const std::vector<index_t>& element_owner) {
  std::vector<index_t> owner(x_element.rows(), -1);
  for (index_t i = 0; i < x_element.rows(); ++i) {
    index_t o = std::numeric_limits<index_t>::max();
    for (index_t e : x_element.row(i)) o = std::min(o, element_owner[e]);
    if (x_element.row_size(i) > 0) owner[i] = o;
  }
  return owner;
}

void CommLedger::append(const CommLedger& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

std::int64_t CommLedger::total_messages() const {
  std::int64_t s = 0;
  for (const auto& r : records) s += r.messages;
  return s;
}

std::int64_t CommLedger::total_volume() const {
  std::int64_t s = 0;
  for (const auto& r : records) s += r.volume;
  return s;
}

std::map<int, CommTotals> comm_summary(const std::vector<CommLedger>& ledgers) {
  std::map<int, CommTotals> out;
  for (const auto& l : ledgers)
    for (const auto& r : l.records) {
      auto& t = out[r.level];
      t.messages += r.messages;
      t.volume += r.volume;
    }
  return out;
}

namespace {

template <class RowSize>
void account(const std::vector<index_t>& a_offsets, const std::vector<index_t>& a_indices, index_t a_rows,
             const std::vector<index_t>& owner_a, const std::vector<index_t>& owner_b, RowSize row_size,
             CommLedger& ledger, int level, const std::string& op) {
  require(static_cast<index_t>(owner_a.size()) == a_rows, ErrorCode::dimension_mismatch,
          "dist product: owner_a size mismatch");
  // (src, dst) -> distinct rows of b sent
  std::map<std::pair<index_t, index_t>, std::set<index_t>> sent;
  for (index_t i = 0; i < a_rows; ++i) {
    const index_t dst = owner_a[i];
    for (index_t p = a_offsets[i]; p < a_offsets[i + 1]; ++p) {
      const index_t j = a_indices[p];
      const index_t src = owner_b[j];
      if (src < 0 || dst < 0 || src == dst) continue;
      sent[{src, dst}].insert(j);
    }
  }
  for (const auto& [key, rows] : sent) {
    std::int64_t vol = 0;
    for (index_t j : rows) vol += row_size(j);
    ledger.records.push_back({level, op, key.first, key.second, 1, vol});
  }
}

}  // namespace

Relation dist_bool_multiply(const Relation& a, const Relation& b, const std::vector<index_t>& owner_a,
                            const std::vector<index_t>& owner_b, CommLedger& ledger, int level,
                            const std::string& op) {
  require(static_cast<index_t>(owner_b.size()) == b.rows(), ErrorCode::dimension_mismatch,
          "dist_bool_multiply: owner_b size mismatch");
  auto result = bool_multiply(a, b);
  account(a.offsets(), a.indices(), a.rows(), owner_a, owner_b, [&](index_t j) { return b.row_size(j); },
          ledger, level, op);
  return result;
}

SparseMatrix dist_multiply(const SparseMatrix& a, const SparseMatrix& b, const std::vector<index_t>& owner_a,
                           const std::vector<index_t>& owner_b, CommLedger& ledger, int level,
                           const std::string& op) {
  require(static_cast<index_t>(owner_b.size()) == b.rows(), ErrorCode::dimension_mismatch,
          "dist_multiply: owner_b size mismatch");
  auto result = multiply(a, b);
  account(a.offsets(), a.indices(), a.rows(), owner_a, owner_b,
          [&](index_t j) { return static_cast<std::int64_t>(b.row_cols(j).size()); }, ledger, level, op);
  return result;
}

void write_ledger_csv(const std::filesystem::path& path, const std::vector<CommLedger>& ledgers) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::io, "cannot write " + path.string());
  os << "level,op,src,dst,messages,volume\n";
  for (const auto& l : ledgers)
    for (const auto& r : l.records)
      os << r.level << ',' << r.op << ',' << r.src << ',' << r.dst << ',' << r.messages << ',' << r.volume
         << '\n';
}

}  // namespace redamge
