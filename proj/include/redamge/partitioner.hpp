#pragma once

// Deterministic graph partitioner used in place of METIS: pseudo-peripheral
// seeding, BFS region growing to target sizes, then connectivity repair.

#include "redamge/relmat.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace redamge {

struct PartitionSpec {
  index_t n_parts = 1;
  /// Allowed relative deviation of a part size from the mean; only reported.
  double balance_tol = 0.1;
  /// The first region grows from a node near (seed mod n).
  std::uint64_t seed = 0;
};

/// part_node relation. Every part is nonempty and induces a connected subgraph.
/// Self-loops in the adjacency are ignored.
Relation partition_graph(const Relation& adjacency, const PartitionSpec& spec,
                         const std::string& part_kind = "part");

/// partition_graph with n_parts = ceil(n_nodes / factor).
Relation coarsen_by_factor(const Relation& adjacency, double factor, std::uint64_t seed = 0,
                           const std::string& part_kind = "part");

/// Partition of the subgraph induced by `nodes` (sorted, global ids). Parts are
/// returned as sorted lists of global ids.
std::vector<std::vector<index_t>> partition_subset(const Relation& adjacency,
                                                   std::span<const index_t> nodes, index_t n_parts,
                                                   std::uint64_t seed = 0);

/// Partitions the nodes of each group row separately into ceil(size / factor)
/// connected parts. Parts are numbered group by group; empty groups contribute none.
Relation partition_groups(const Relation& group_node, const Relation& adjacency, double factor,
                          std::uint64_t seed = 0, const std::string& part_kind = "AE");

bool is_connected_subset(const Relation& adjacency, std::span<const index_t> nodes);

/// True when every part size lies within tol of the mean size.
bool is_balanced(const Relation& part_node, double tol);

}  // namespace redamge
