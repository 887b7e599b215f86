#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rbma/common.hpp"

namespace rbma {

// Fixed network over which unmatched requests are routed.
//
// The physical graph may contain internal switches (leaf-spine spines,
// fat-tree edge/aggregation/core switches). Only the first endpoint_count()
// physical nodes are endpoints of the matching problem; distances are
// computed on the full graph and then restricted to those endpoints.
// Immutable after construction.
class Topology {
 public:
  // Builds a topology from an unweighted edge list. Node ids must lie in
  // [0, node_count); the graph must be connected and free of self-loops.
  // The first `endpoint_count` nodes become matching endpoints (defaults to
  // all nodes).
  static Topology from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges,
                             std::size_t endpoint_count = 0);

  static Topology star(std::size_t leaves);
  static Topology leaf_spine(std::size_t leaves, std::size_t spines);
  static Topology fat_tree(std::size_t k);

  // Number of matching endpoints (racks).
  std::size_t node_count() const { return node_count_; }

  std::uint32_t dist(NodeId u, NodeId v) const { return dist_[u * node_count_ + v]; }
  std::uint32_t dist(NodePair p) const { return dist(p.lo, p.hi); }
  std::uint32_t ell_max() const { return ell_max_; }

  // Fixed links between endpoints, i.e. exactly the endpoint pairs at distance 1.
  const std::vector<NodePair>& links() const { return links_; }

  std::size_t physical_node_count() const { return physical_nodes_; }
  const std::vector<NodePair>& physical_edges() const { return physical_edges_; }

  std::span<const std::uint32_t> dist_matrix() const { return dist_; }

 private:
  std::size_t node_count_ = 0;
  std::size_t physical_nodes_ = 0;
  std::uint32_t ell_max_ = 0;
  std::vector<std::uint32_t> dist_;
  std::vector<NodePair> links_;
  std::vector<NodePair> physical_edges_;
};

enum class TopologyKind { star, leaf_spine, fat_tree };

struct TopologyParams {
  TopologyKind kind = TopologyKind::star;
  std::size_t n = 0;       // star leaves
  std::size_t leaves = 0;  // leaf_spine
  std::size_t spines = 0;  // leaf_spine
  std::size_t k = 0;       // fat_tree arity
};

Topology generate(const TopologyParams& params);

TopologyKind parse_topology_kind(const std::string& name);

// Edge-list text format: a header line `n m [r]` followed by m lines `u v`.
// The optional `r` is the number of leading nodes that are matching
// endpoints; it is emitted only when internal switches exist.
Topology read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Topology& topo);

}  // namespace rbma
