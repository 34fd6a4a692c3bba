#include "redamge/partitioner.hpp"

#include "redamge/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

namespace redamge {

namespace {

// Subgraph in local numbering; local order follows ascending global id.
struct LocalGraph {
  std::vector<std::vector<index_t>> adj;

  index_t size() const { return static_cast<index_t>(adj.size()); }
};

LocalGraph induced(const Relation& adjacency, std::span<const index_t> nodes) {
  require(adjacency.rows() == adjacency.cols(), ErrorCode::invalid_argument,
          "partitioner: adjacency must be square");
  std::unordered_map<index_t, index_t> local;
  local.reserve(nodes.size() * 2);
  for (std::size_t i = 0; i < nodes.size(); ++i) local.emplace(nodes[i], static_cast<index_t>(i));
  LocalGraph g;
  g.adj.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (index_t j : adjacency.row(nodes[i])) {
      if (j == nodes[i]) continue;
      auto it = local.find(j);
      if (it != local.end()) g.adj[i].push_back(it->second);
    }
  return g;
}

// BFS distances restricted to nodes with allowed[v] true; -1 when unreached.
std::vector<index_t> bfs(const LocalGraph& g, index_t src, const std::vector<char>& allowed) {
  std::vector<index_t> dist(g.size(), -1);
  std::deque<index_t> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    index_t v = q.front();
    q.pop_front();
    for (index_t w : g.adj[v])
      if (allowed[w] && dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

// Farthest reachable node (lowest index among ties) and its distance.
std::pair<index_t, index_t> farthest(const std::vector<index_t>& dist) {
  index_t best = -1, d = -1;
  for (index_t v = 0; v < static_cast<index_t>(dist.size()); ++v)
    if (dist[v] > d) {
      d = dist[v];
      best = v;
    }
  return {best, d};
}

// George-Liu pseudo-peripheral node search inside the allowed set.
index_t pseudo_peripheral(const LocalGraph& g, index_t start, const std::vector<char>& allowed) {
  index_t v = start;
  auto [far, ecc] = farthest(bfs(g, v, allowed));
  for (int iter = 0; iter < 32; ++iter) {
    auto [far2, ecc2] = farthest(bfs(g, far, allowed));
    if (ecc2 <= ecc) break;
    v = far;
    far = far2;
    ecc = ecc2;
  }
  return v;
}

std::vector<std::vector<index_t>> components(const LocalGraph& g, const std::vector<index_t>& members,
                                             const std::vector<index_t>& part, index_t p) {
  std::vector<std::vector<index_t>> comps;
  std::vector<char> seen(g.size(), 0);
  for (index_t s : members) {
    if (seen[s]) continue;
    comps.emplace_back();
    std::deque<index_t> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      index_t v = q.front();
      q.pop_front();
      comps.back().push_back(v);
      for (index_t w : g.adj[v])
        if (!seen[w] && part[w] == p) {
          seen[w] = 1;
          q.push_back(w);
        }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  return comps;
}

std::vector<index_t> partition_local(const LocalGraph& g, index_t n_parts, std::uint64_t seed) {
  const index_t n = g.size();
  require(n_parts >= 1, ErrorCode::partition, "partitioner: n_parts must be positive");
  require(n_parts <= n, ErrorCode::partition, "partitioner: more parts than nodes");
  std::vector<char> all(n, 1);
  {
    auto d = bfs(g, 0, all);
    require(std::all_of(d.begin(), d.end(), [](index_t x) { return x >= 0; }), ErrorCode::partition,
            "partitioner: graph is disconnected");
  }

  std::vector<index_t> part(n, -1);
  std::vector<char> free(n, 1);
  index_t assigned = 0;
  const index_t base = n / n_parts;
  const index_t rem = n % n_parts;

  for (index_t p = 0; p < n_parts; ++p) {
    const index_t target = base + (p >= n_parts - rem ? 1 : 0);
    if (p == n_parts - 1) {
      for (index_t v = 0; v < n; ++v)
        if (free[v]) {
          part[v] = p;
          free[v] = 0;
        }
      break;
    }
    index_t start = -1;
    if (p == 0) {
      start = static_cast<index_t>(seed % static_cast<std::uint64_t>(n));
    } else {
      for (index_t v = 0; v < n && start < 0; ++v)
        if (free[v])
          for (index_t w : g.adj[v])
            if (!free[w]) {
              start = v;
              break;
            }
      if (start < 0)
        for (index_t v = 0; v < n; ++v)
          if (free[v]) {
            start = v;
            break;
          }
    }
    const index_t s = pseudo_peripheral(g, start, free);
    // Grow from the seed, taking the frontier node with the most neighbours already in the
    // part first (compact parts, short boundaries), then the closest to the seed.
    const auto dist = bfs(g, s, free);
    std::vector<index_t> gain(n, 0);
    std::set<std::tuple<index_t, index_t, index_t>> frontier{{0, 0, s}};
    std::vector<char> queued(n, 0);
    queued[s] = 1;
    index_t taken = 0;
    while (!frontier.empty() && taken < target) {
      const index_t v = std::get<2>(*frontier.begin());
      frontier.erase(frontier.begin());
      part[v] = p;
      free[v] = 0;
      ++taken;
      for (index_t w : g.adj[v]) {
        if (!free[w]) continue;
        if (queued[w]) frontier.erase({-gain[w], dist[w], w});
        queued[w] = 1;
        ++gain[w];
        frontier.insert({-gain[w], dist[w], w});
      }
    }
    assigned += taken;
    // Keep at least one node for each remaining part.
    require(n - assigned >= n_parts - 1 - p, ErrorCode::partition, "partitioner: region growth failed");
  }

  // Connectivity repair: detach extra components and merge them into the
  // smallest adjacent part (lowest part index on ties).
  std::vector<index_t> sizes(n_parts, 0);
  for (index_t v = 0; v < n; ++v) ++sizes[part[v]];
  bool changed = true;
  while (changed) {
    changed = false;
    for (index_t p = 0; p < n_parts; ++p) {
      std::vector<index_t> members;
      for (index_t v = 0; v < n; ++v)
        if (part[v] == p) members.push_back(v);
      auto comps = components(g, members, part, p);
      if (comps.size() <= 1) continue;
      std::size_t keep = 0;
      for (std::size_t c = 1; c < comps.size(); ++c)
        if (comps[c].size() > comps[keep].size()) keep = c;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        if (c == keep) continue;
        index_t target = -1;
        for (index_t v : comps[c])
          for (index_t w : g.adj[v]) {
            const index_t q = part[w];
            if (q == p) continue;
            if (target < 0 || sizes[q] < sizes[target] || (sizes[q] == sizes[target] && q < target))
              target = q;
          }
        require(target >= 0, ErrorCode::partition, "partitioner: isolated component");
        for (index_t v : comps[c]) part[v] = target;
        sizes[p] -= static_cast<index_t>(comps[c].size());
        sizes[target] += static_cast<index_t>(comps[c].size());
        changed = true;
      }
    }
  }
  return part;
}

}  // namespace

std::vector<std::vector<index_t>> partition_subset(const Relation& adjacency,
                                                   std::span<const index_t> nodes, index_t n_parts,
                                                   std::uint64_t seed) {
  require(std::is_sorted(nodes.begin(), nodes.end()), ErrorCode::invalid_argument,
          "partition_subset: nodes must be sorted");
  const auto g = induced(adjacency, nodes);
  const auto part = partition_local(g, n_parts, seed);
  std::vector<std::vector<index_t>> parts(n_parts);
  for (std::size_t v = 0; v < nodes.size(); ++v) parts[part[v]].push_back(nodes[v]);
  return parts;
}

Relation partition_graph(const Relation& adjacency, const PartitionSpec& spec, const std::string& part_kind) {
  std::vector<index_t> nodes(adjacency.rows());
  std::iota(nodes.begin(), nodes.end(), 0);
  auto parts = partition_subset(adjacency, nodes, spec.n_parts, spec.seed);
  return Relation::from_rows(part_kind, adjacency.row_kind(), adjacency.rows(), parts);
}

Relation coarsen_by_factor(const Relation& adjacency, double factor, std::uint64_t seed,
                           const std::string& part_kind) {
  require(factor >= 1.0, ErrorCode::invalid_argument, "coarsen_by_factor: factor must be >= 1");
  const auto n_parts = static_cast<index_t>(std::ceil(adjacency.rows() / factor));
  return partition_graph(adjacency, {std::max<index_t>(n_parts, 1), 0.1, seed}, part_kind);
}

Relation partition_groups(const Relation& group_node, const Relation& adjacency, double factor,
                          std::uint64_t seed, const std::string& part_kind) {
  require(factor >= 1.0, ErrorCode::invalid_argument, "partition_groups: factor must be >= 1");
  std::vector<std::vector<index_t>> parts;
  for (index_t g = 0; g < group_node.rows(); ++g) {
    auto nodes = group_node.row(g);
    if (nodes.empty()) continue;
    const auto n_parts = std::max<index_t>(1, static_cast<index_t>(std::ceil(nodes.size() / factor)));
    for (auto& p : partition_subset(adjacency, nodes, n_parts, seed)) parts.push_back(std::move(p));
  }
  return Relation::from_rows(part_kind, group_node.col_kind(), group_node.cols(), parts);
}

bool is_connected_subset(const Relation& adjacency, std::span<const index_t> nodes) {
  if (nodes.empty()) return true;
  std::vector<index_t> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  const auto g = induced(adjacency, sorted);
  std::vector<char> all(g.size(), 1);
  auto d = bfs(g, 0, all);
  return std::all_of(d.begin(), d.end(), [](index_t x) { return x >= 0; });
}

bool is_balanced(const Relation& part_node, double tol) {
  if (part_node.rows() == 0) return true;
  const double mean = static_cast<double>(part_node.cols()) / part_node.rows();
  for (index_t p = 0; p < part_node.rows(); ++p)
    if (std::abs(part_node.row_size(p) - mean) > tol * mean + 1e-12) return false;
  return true;
}

}  // namespace redamge
