#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rbma/engine.hpp"
#include "rbma/topology.hpp"
#include "rbma/trace.hpp"

namespace rbma {

// Routing cost when every request uses the fixed network.
double oblivious_cost(const Topology& topo, const Trace& trace);

// Per-pair request counts aggregated over a trace.
struct WeightedDemand {
  std::size_t node_count = 0;
  std::vector<std::pair<NodePair, std::uint64_t>> counts;  // canonical order, counts > 0

  static WeightedDemand from_trace(const Trace& trace);
  std::uint64_t count(NodePair e) const;
  std::uint64_t total() const;
};

struct StaticMatching {
  std::vector<NodePair> edges;  // canonical order
  double config_cost = 0;       // alpha * |edges|
  double routing_cost = 0;      // demand served under the fixed matching
  double total() const { return config_cost + routing_cost; }
};

// Static offline baseline: greedily picks pairs by saved routing cost
// count * (dist - 1), descending, ties in canonical order, subject to degree b.
StaticMatching offline_greedy_bmatching(const WeightedDemand& demand, const Topology& topo, std::size_t b,
                                        double alpha);

struct DbmaEvents {
  std::vector<NodePair> inserted;
  std::vector<NodePair> removed;
};

// Deterministic credit-based online b-matching used as the comparison
// baseline. Each request to a pair adds dist(e) to its credit. An unmatched
// pair whose credit reaches alpha is inserted (credit reset); when an
// endpoint is already at degree b, its incident matching edge with the least
// credit since insertion is evicted first (ties by canonical order).
class DbmaEngine {
 public:
  DbmaEngine(const Topology& topo, std::size_t b, double alpha);

  DbmaEvents process(Request req);
  double serve(Request req);
  DbmaEvents step(Request req);

  const MatchingState& matching() const { return matching_; }
  const CostLedger& ledger() const { return ledger_; }
  double credit(NodePair e) const { return credit_[index(e)]; }

 private:
  std::size_t index(NodePair e) const { return static_cast<std::size_t>(e.lo) * n_ + e.hi; }
  NodePair evict_weakest(NodeId v);

  const Topology* topo_;
  std::size_t n_;
  MatchingState matching_;
  CostLedger ledger_;
  std::vector<double> credit_;
  std::vector<std::vector<NodePair>> incident_;
};

using DbmaObserver = std::function<void(std::size_t index, Request req, const DbmaEngine& engine)>;

RunOutcome run_dbma(const Topology& topo, const Trace& trace, std::size_t b, double alpha,
                    const DbmaObserver& observer = {});

// Guards for brute_force_opt.
inline constexpr std::size_t kBruteForceMaxNodes = 5;
inline constexpr std::size_t kBruteForceMaxDegree = 2;
inline constexpr std::size_t kBruteForceMaxRequests = 12;

// Exact offline optimum with degree cap a: dynamic program over
// (request index, matching configuration). Reconfiguring between two
// configurations costs alpha times their symmetric difference; the
// matching starts empty.
double brute_force_opt(const Topology& topo, const Trace& trace, std::size_t a, double alpha);

}  // namespace rbma
