#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "rbma/common.hpp"
#include "rbma/topology.hpp"
#include "rbma/trace.hpp"

namespace rbma::oracle {

// All-pairs hop distances over the physical graph by Floyd-Warshall,
// restricted to the first `endpoints` nodes.
inline std::vector<std::uint32_t> floyd_warshall(const Topology& topo) {
  const std::size_t n = topo.physical_node_count();
  const std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 4;
  std::vector<std::uint32_t> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  for (auto e : topo.physical_edges()) d[e.lo * n + e.hi] = d[e.hi * n + e.lo] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  const std::size_t r = topo.node_count();
  std::vector<std::uint32_t> out(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) out[i * r + j] = d[i * n + j];
  return out;
}

// Optimal paging fault count by exhaustive search over every reachable
// cache content (memoized on (position, cache set)); at each fault every
// possible victim is tried.
inline std::size_t exhaustive_paging_opt(const std::vector<PageId>& seq, std::size_t capacity) {
  std::vector<PageId> distinct(seq.begin(), seq.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> idx(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i)
    idx[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), seq[i]) - distinct.begin());

  std::map<std::pair<std::size_t, std::uint32_t>, std::size_t> memo;
  auto solve = [&](auto&& self, std::size_t pos, std::uint32_t cache) -> std::size_t {
    if (pos == seq.size()) return 0;
    auto key = std::make_pair(pos, cache);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::uint32_t bit = 1u << idx[pos];
    std::size_t best;
    if (cache & bit) {
      best = self(self, pos + 1, cache);
    } else if (static_cast<std::size_t>(__builtin_popcount(cache)) < capacity) {
      best = 1 + self(self, pos + 1, cache | bit);
    } else {
      best = std::numeric_limits<std::size_t>::max();
      for (std::uint32_t v = cache; v; v &= v - 1) {
        std::uint32_t victim = v & (~v + 1);
        best = std::min(best, 1 + self(self, pos + 1, (cache & ~victim) | bit));
      }
    }
    memo[key] = best;
    return best;
  };
  return solve(solve, 0, 0);
}

// Offline optimum by enumerating every sequence of configurations (one per
// request) explicitly, without dynamic programming. Only feasible for a
// handful of requests over few configurations.
inline double exhaustive_matching_opt(const Topology& topo, const Trace& trace, std::size_t a, double alpha) {
  const std::size_t n = topo.node_count();
  std::vector<NodePair> pairs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<std::set<NodePair>> configs;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<std::size_t> deg(n, 0);
    std::set<NodePair> cfg;
    bool ok = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!(mask >> i & 1u)) continue;
      cfg.insert(pairs[i]);
      if (++deg[pairs[i].lo] > a || ++deg[pairs[i].hi] > a) ok = false;
    }
    if (ok) configs.push_back(cfg);
  }
  auto sym_diff = [](const std::set<NodePair>& x, const std::set<NodePair>& y) {
    std::size_t d = 0;
    for (auto e : x) d += !y.count(e);
    for (auto e : y) d += !x.count(e);
    return d;
  };
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice(trace.size(), 0);
  // Odometer over configs^m.
  while (true) {
    double cost = 0;
    const std::set<NodePair>* prev = nullptr;
    std::set<NodePair> empty;
    prev = &empty;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const auto& cur = configs[choice[i]];
      cost += alpha * static_cast<double>(sym_diff(*prev, cur));
      cost += cur.count(trace.requests[i]) ? 1.0 : static_cast<double>(topo.dist(trace.requests[i]));
      prev = &cur;
    }
    best = std::min(best, cost);
    std::size_t pos = 0;
    while (pos < choice.size() && ++choice[pos] == configs.size()) choice[pos++] = 0;
    if (pos == choice.size()) break;
  }
  return best;
}

// Straightforward strict-mode R-BMA with deterministic marking caches,
// recomputing the matching as the cache intersection after every request.
struct ReferenceRbma {
  struct Cache {
    std::size_t capacity;
    std::set<NodePair> entries;
    std::set<NodePair> marked;
    std::size_t faults = 0;

    void request(NodePair p) {
      if (entries.count(p)) {
        marked.insert(p);
        return;
      }
      ++faults;
      if (entries.size() == capacity) {
        if (marked.size() == entries.size()) marked.clear();
        for (auto e : entries) {  // smallest unmarked
          if (!marked.count(e)) {
            entries.erase(e);
            break;
          }
        }
      }
      entries.insert(p);
      marked.insert(p);
    }
  };

  const Topology& topo;
  double alpha;
  std::vector<Cache> caches;
  std::map<NodePair, std::uint32_t> seen;
  std::set<NodePair> matching;
  double routing = 0;
  std::uint64_t insertions = 0, removals = 0;

  ReferenceRbma(const Topology& t, std::size_t b, double alpha_) : topo(t), alpha(alpha_) {
    caches.assign(t.node_count(), Cache{b, {}, {}, 0});
  }

  void process(NodePair r) {
    routing += matching.count(r) ? 1.0 : topo.dist(r);
    const auto k = static_cast<std::uint32_t>(std::ceil(alpha / topo.dist(r)));
    if (++seen[r] % k != 0) return;
    caches[r.lo].request(r);
    caches[r.hi].request(r);
    std::set<NodePair> next;
    for (const auto& c : caches)
      for (auto e : c.entries)
        if (caches[e.lo].entries.count(e) && caches[e.hi].entries.count(e)) next.insert(e);
    for (auto e : matching) removals += !next.count(e);
    for (auto e : next) insertions += !matching.count(e);
    matching = std::move(next);
  }

  double total() const { return routing + alpha * static_cast<double>(insertions + removals); }
};

}  // namespace rbma::oracle
