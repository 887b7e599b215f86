#include "rbma/topology.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

namespace rbma {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

}  // namespace

Topology Topology::from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges,
                              std::size_t endpoint_count) {
  if (node_count == 0) throw Error(Errc::InvalidParams, "topology needs at least one node");
  if (endpoint_count == 0) endpoint_count = node_count;
  if (endpoint_count > node_count)
    throw Error(Errc::InvalidParams, "endpoint count exceeds node count");

  std::vector<std::vector<NodeId>> adj(node_count);
  Topology topo;
  topo.node_count_ = endpoint_count;
  topo.physical_nodes_ = node_count;
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count)
      throw Error(Errc::NodeOutOfRange,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") with " +
                      std::to_string(node_count) + " nodes");
    if (u == v) throw Error(Errc::SelfLoop, "self-loop at node " + std::to_string(u));
    adj[u].push_back(v);
    adj[v].push_back(u);
    topo.physical_edges_.emplace_back(u, v);
  }
  std::sort(topo.physical_edges_.begin(), topo.physical_edges_.end());
  topo.physical_edges_.erase(std::unique(topo.physical_edges_.begin(), topo.physical_edges_.end()),
                             topo.physical_edges_.end());

  // BFS from every endpoint over the full graph. Connectivity is checked on
  // the physical graph, so switches must be reachable too.
  topo.dist_.assign(endpoint_count * endpoint_count, 0);
  std::vector<std::uint32_t> level(node_count);
  std::queue<NodeId> frontier;
  for (NodeId src = 0; src < endpoint_count; ++src) {
    std::fill(level.begin(), level.end(), kUnreached);
    level[src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      for (NodeId v : adj[u]) {
        if (level[v] == kUnreached) {
          level[v] = level[u] + 1;
          frontier.push(v);
        }
      }
    }
    auto missing = std::find(level.begin(), level.end(), kUnreached);
    if (missing != level.end())
      throw Error(Errc::DisconnectedGraph,
                  "node " + std::to_string(missing - level.begin()) + " unreachable from node " +
                      std::to_string(src));
    std::copy_n(level.begin(), endpoint_count, topo.dist_.begin() + src * endpoint_count);
  }

  for (NodeId u = 0; u < endpoint_count; ++u) {
    for (NodeId v = u + 1; v < endpoint_count; ++v) {
      std::uint32_t d = topo.dist(u, v);
      topo.ell_max_ = std::max(topo.ell_max_, d);
      if (d == 1) topo.links_.emplace_back(u, v);
    }
  }
  return topo;
}

Topology Topology::star(std::size_t leaves) {
  if (leaves == 0) throw Error(Errc::InvalidParams, "star needs at least one leaf");
  EdgeList edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return from_edges(leaves + 1, edges);
}

Topology Topology::leaf_spine(std::size_t leaves, std::size_t spines) {
  if (leaves == 0 || spines == 0)
    throw Error(Errc::InvalidParams, "leaf_spine needs positive leaf and spine counts");
  // Leaves are the racks (ids 0..leaves-1); spines are internal switches.
  EdgeList edges;
  for (NodeId l = 0; l < leaves; ++l)
    for (std::size_t s = 0; s < spines; ++s) edges.emplace_back(l, static_cast<NodeId>(leaves + s));
  return from_edges(leaves + spines, edges, leaves);
}

Topology Topology::fat_tree(std::size_t k) {
  if (k < 2 || k % 2 != 0) throw Error(Errc::InvalidParams, "fat_tree arity must be even and >= 2");
  const std::size_t half = k / 2;
  const std::size_t racks = k * k * k / 4;
  const std::size_t edge_switches = k * half;
  const std::size_t agg_switches = k * half;
  const std::size_t cores = half * half;

  // Numbering: racks, then edge switches, aggregation switches, core switches.
  const std::size_t edge_base = racks;
  const std::size_t agg_base = edge_base + edge_switches;
  const std::size_t core_base = agg_base + agg_switches;

  EdgeList edges;
  for (std::size_t r = 0; r < racks; ++r)
    edges.emplace_back(static_cast<NodeId>(r), static_cast<NodeId>(edge_base + r / half));
  for (std::size_t pod = 0; pod < k; ++pod) {
    for (std::size_t e = 0; e < half; ++e)
      for (std::size_t a = 0; a < half; ++a)
        edges.emplace_back(static_cast<NodeId>(edge_base + pod * half + e),
                           static_cast<NodeId>(agg_base + pod * half + a));
    for (std::size_t a = 0; a < half; ++a)
      for (std::size_t c = 0; c < half; ++c)
        edges.emplace_back(static_cast<NodeId>(agg_base + pod * half + a),
                           static_cast<NodeId>(core_base + a * half + c));
  }
  return from_edges(core_base + cores, edges, racks);
}

Topology generate(const TopologyParams& params) {
  switch (params.kind) {
    case TopologyKind::star: return Topology::star(params.n);
    case TopologyKind::leaf_spine: return Topology::leaf_spine(params.leaves, params.spines);
    case TopologyKind::fat_tree: return Topology::fat_tree(params.k);
  }
  throw Error(Errc::InvalidParams, "unknown topology kind");
}

TopologyKind parse_topology_kind(const std::string& name) {
  if (name == "star") return TopologyKind::star;
  if (name == "leaf_spine") return TopologyKind::leaf_spine;
  if (name == "fat_tree") return TopologyKind::fat_tree;
  throw Error(Errc::InvalidParams, "unknown topology kind '" + name + "'");
}

Topology read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw Error(Errc::MalformedLine, "empty edge list");
  std::istringstream header(line);
  long long n = -1, m = -1, r = 0;
  if (!(header >> n >> m) || n <= 0 || m < 0)
    throw Error(Errc::MalformedLine, "line 1: expected 'n m [r]'");
  if (!(header >> r)) r = 0;

  EdgeList edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) throw Error(Errc::MalformedLine, "expected " + std::to_string(m) + " edges");
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || u < 0 || v < 0)
      throw Error(Errc::MalformedLine, "line " + std::to_string(line_no) + ": expected 'u v'");
    if (u >= n || v >= n)
      throw Error(Errc::NodeOutOfRange, "line " + std::to_string(line_no));
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return Topology::from_edges(static_cast<std::size_t>(n), edges, static_cast<std::size_t>(r));
}

void write_edge_list(std::ostream& out, const Topology& topo) {
  out << topo.physical_node_count() << ' ' << topo.physical_edges().size();
  if (topo.node_count() != topo.physical_node_count()) out << ' ' << topo.node_count();
  out << '\n';
  for (const auto& e : topo.physical_edges()) out << e.lo << ' ' << e.hi << '\n';
}

}  // namespace rbma
