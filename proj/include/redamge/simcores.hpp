#pragma once

// Simulated cores. Every row of a distributed relation lives on one core;
// products fetch the remote rows they need and the ledger counts them.

#include "redamge/partitioner.hpp"
#include "redamge/relmat.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace redamge {

struct CoreLayout {
  index_t n_cores_total = 0;
  /// core_element over all cores; rows of inactive cores are empty.
  Relation core_element;

  std::vector<index_t> active_cores() const;
  index_t num_active() const;
  std::vector<index_t> element_owner() const;
};

/// Connected per-core element sets from the element adjacency.
CoreLayout initial_layout(const Relation& element_element, index_t n_cores, const PartitionSpec& spec = {});

/// Owner of each row of x_element: the lowest owner among its elements.
std::vector<index_t> derive_owner(const Relation& x_element, const std::vector<index_t>& element_owner);

struct CommRecord {
  int level = 0;
  std::string op;
  index_t src = 0;
  index_t dst = 0;
  std::int64_t messages = 0;
  std::int64_t volume = 0;
};

struct CommLedger {
  std::vector<CommRecord> records;

  void append(const CommLedger& other);
  std::int64_t total_messages() const;
  std::int64_t total_volume() const;
};

struct CommTotals {
  std::int64_t messages = 0;
  std::int64_t volume = 0;
  friend bool operator==(const CommTotals&, const CommTotals&) = default;
};

/// Totals per level.
std::map<int, CommTotals> comm_summary(const std::vector<CommLedger>& ledgers);

/// Same result as bool_multiply. Row i of a lives on owner_a[i] and needs every row j
/// of b it references; a row j held by another core is sent once per (src, dst) pair.
/// Volume is the number of entries in the transferred rows.
Relation dist_bool_multiply(const Relation& a, const Relation& b, const std::vector<index_t>& owner_a,
                            const std::vector<index_t>& owner_b, CommLedger& ledger, int level,
                            const std::string& op);

/// Numeric analogue with the same accounting.
SparseMatrix dist_multiply(const SparseMatrix& a, const SparseMatrix& b, const std::vector<index_t>& owner_a,
                           const std::vector<index_t>& owner_b, CommLedger& ledger, int level,
                           const std::string& op);

/// CSV with columns level,op,src,dst,messages,volume.
void write_ledger_csv(const std::filesystem::path& path, const std::vector<CommLedger>& ledgers);

}  // namespace redamge
