#include "rbma/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

namespace rbma {

double oblivious_cost(const Topology& topo, const Trace& trace) {
  double cost = 0;
  for (const auto& r : trace.requests) cost += topo.dist(r);
  return cost;
}

WeightedDemand WeightedDemand::from_trace(const Trace& trace) {
  std::map<NodePair, std::uint64_t> agg;
  for (const auto& r : trace.requests) ++agg[r];
  WeightedDemand d;
  d.node_count = trace.node_count;
  d.counts.assign(agg.begin(), agg.end());
  return d;
}

std::uint64_t WeightedDemand::count(NodePair e) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), e,
                             [](const auto& entry, NodePair key) { return entry.first < key; });
  return it != counts.end() && it->first == e ? it->second : 0;
}

std::uint64_t WeightedDemand::total() const {
  std::uint64_t sum = 0;
  for (const auto& [e, c] : counts) sum += c;
  return sum;
}

StaticMatching offline_greedy_bmatching(const WeightedDemand& demand, const Topology& topo, std::size_t b,
                                        double alpha) {
  if (b == 0) throw Error(Errc::InvalidParams, "degree bound b must be >= 1");
  if (!(alpha >= 1) || !std::isfinite(alpha)) throw Error(Errc::InvalidCost, "alpha must be >= 1");

  struct Candidate {
    double saving;
    NodePair pair;
  };
  std::vector<Candidate> candidates;
  for (const auto& [e, c] : demand.counts) {
    double saving = static_cast<double>(c) * (static_cast<double>(topo.dist(e)) - 1.0);
    if (saving > 0) candidates.push_back({saving, e});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.saving > y.saving; });

  StaticMatching result;
  std::vector<std::size_t> degree(topo.node_count(), 0);
  for (const auto& cand : candidates) {
    if (degree[cand.pair.lo] >= b || degree[cand.pair.hi] >= b) continue;
    ++degree[cand.pair.lo];
    ++degree[cand.pair.hi];
    result.edges.push_back(cand.pair);
  }
  std::sort(result.edges.begin(), result.edges.end());

  result.config_cost = alpha * static_cast<double>(result.edges.size());
  for (const auto& [e, c] : demand.counts) {
    bool matched = std::binary_search(result.edges.begin(), result.edges.end(), e);
    result.routing_cost += static_cast<double>(c) * (matched ? 1.0 : static_cast<double>(topo.dist(e)));
  }
  return result;
}

DbmaEngine::DbmaEngine(const Topology& topo, std::size_t b, double alpha)
    : topo_(&topo),
      n_(topo.node_count()),
      matching_(n_, b),
      ledger_(alpha, topo.ell_max()),
      credit_(n_ * n_, 0.0),
      incident_(n_) {}

DbmaEvents DbmaEngine::process(Request req) {
  serve(req);
  return step(req);
}

double DbmaEngine::serve(Request req) { return rbma::serve(matching_, *topo_, req, ledger_); }

DbmaEvents DbmaEngine::step(Request req) {
  DbmaEvents ev;
  double& c = credit_[index(req)];
  c += topo_->dist(req);
  if (matching_.contains(req) || c < ledger_.alpha()) return ev;

  for (NodeId v : {req.lo, req.hi})
    if (matching_.degree(v) >= matching_.b()) ev.removed.push_back(evict_weakest(v));

  matching_.insert(req);
  ledger_.record_insertion();
  incident_[req.lo].push_back(req);
  incident_[req.hi].push_back(req);
  c = 0;
  ev.inserted.push_back(req);
  return ev;
}

NodePair DbmaEngine::evict_weakest(NodeId v) {
  auto& edges = incident_[v];
  auto weakest = edges.begin();
  for (auto it = edges.begin(); it != edges.end(); ++it) {
    double cw = credit_[index(*weakest)], ci = credit_[index(*it)];
    if (ci < cw || (ci == cw && *it < *weakest)) weakest = it;
  }
  const NodePair victim = *weakest;
  auto drop = [&](NodeId w) {
    auto& list = incident_[w];
    list.erase(std::find(list.begin(), list.end(), victim));
  };
  drop(victim.lo);
  drop(victim.hi);
  matching_.remove(victim);
  ledger_.record_removal();
  credit_[index(victim)] = 0;
  return victim;
}

RunOutcome run_dbma(const Topology& topo, const Trace& trace, std::size_t b, double alpha,
                    const DbmaObserver& observer) {
  if (trace.node_count > topo.node_count())
    throw Error(Errc::NodeOutOfRange, "trace spans more nodes than the topology");
  DbmaEngine engine(topo, b, alpha);
  for (std::size_t i = 0; i < trace.requests.size(); ++i) {
    const Request req = trace.requests[i];
    if (req.hi >= topo.node_count()) throw Error(Errc::NodeOutOfRange, "request outside topology");
    engine.process(req);
    if (observer) observer(i, req, engine);
  }
  return {engine.ledger(), engine.matching()};
}

double brute_force_opt(const Topology& topo, const Trace& trace, std::size_t a, double alpha) {
  const std::size_t n = topo.node_count();
  if (n > kBruteForceMaxNodes || a > kBruteForceMaxDegree || trace.size() > kBruteForceMaxRequests)
    throw Error(Errc::InstanceTooLarge, "brute force limited to |V| <= 5, a <= 2, <= 12 requests");
  if (a == 0) throw Error(Errc::InvalidParams, "degree cap a must be >= 1");
  if (!(alpha >= 1) || !std::isfinite(alpha)) throw Error(Errc::InvalidCost, "alpha must be >= 1");

  std::vector<NodePair> pairs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);

  // Every subset of pairs with maximum degree <= a.
  std::vector<std::uint32_t> configs;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<std::size_t> degree(n, 0);
    bool ok = true;
    for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      ok = ++degree[pairs[i].lo] <= a && ++degree[pairs[i].hi] <= a;
    }
    if (ok) configs.push_back(mask);
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // cost[c]: cheapest cost of serving the prefix with configuration c in place.
  std::vector<double> cost(configs.size(), kInf), next(configs.size());
  cost[0] = 0;  // configs[0] is the empty matching
  for (const auto& req : trace.requests) {
    const std::size_t req_bit = std::find(pairs.begin(), pairs.end(), req) - pairs.begin();
    const double fixed = topo.dist(req);
    for (std::size_t j = 0; j < configs.size(); ++j) {
      double best = kInf;
      for (std::size_t i = 0; i < configs.size(); ++i) {
        if (cost[i] == kInf) continue;
        best = std::min(best, cost[i] + alpha * std::popcount(configs[i] ^ configs[j]));
      }
      next[j] = best + ((configs[j] >> req_bit & 1u) ? 1.0 : fixed);
    }
    cost.swap(next);
  }
  return *std::min_element(cost.begin(), cost.end());
}

}  // namespace rbma
