#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "rbma/common.hpp"
#include "rbma/paging.hpp"
#include "rbma/topology.hpp"
#include "rbma/trace.hpp"

namespace rbma {

enum class RemovalMode { strict, lazy };

// Routing and reconfiguration cost accumulators. Reconfiguration is always
// alpha per inserted or removed matching edge.
class CostLedger {
 public:
  CostLedger() = default;
  CostLedger(double alpha, std::uint32_t ell_max);

  void charge_routing(double cost) { routing_ += cost; }
  void record_insertion() { ++insertions_; }
  void record_removal() { ++removals_; }

  double alpha() const { return alpha_; }
  double routing_cost() const { return routing_; }
  double reconfig_cost() const { return alpha_ * static_cast<double>(insertions_ + removals_); }
  double total() const { return routing_cost() + reconfig_cost(); }
  std::uint64_t insertions() const { return insertions_; }
  std::uint64_t removals() const { return removals_; }
  // Loss factor of the reduction to unit lengths: 1 + ell_max / alpha.
  double gamma() const { return 1.0 + static_cast<double>(ell_max_) / alpha_; }

 private:
  double alpha_ = 1.0;
  std::uint32_t ell_max_ = 0;
  double routing_ = 0.0;
  std::uint64_t insertions_ = 0;
  std::uint64_t removals_ = 0;
};

// Set of configured matching edges with per-node degrees. In lazy mode some
// edges may additionally be marked for removal; they remain physically
// present and count towards degrees.
class MatchingState {
 public:
  MatchingState() = default;
  MatchingState(std::size_t node_count, std::size_t b);

  std::size_t b() const { return b_; }
  std::size_t node_count() const { return n_; }
  std::size_t size() const { return size_; }
  std::size_t marked_count() const { return marked_; }
  std::size_t degree(NodeId v) const { return degree_[v]; }
  std::size_t max_degree() const;

  bool contains(NodePair e) const { return status_[index(e)] != kAbsent; }
  bool is_marked(NodePair e) const { return status_[index(e)] == kMarked; }

  // Canonically sorted snapshots.
  std::vector<NodePair> edges() const;
  std::vector<NodePair> marked_edges() const;

  void insert(NodePair e);
  void remove(NodePair e);
  void mark(NodePair e);
  void unmark(NodePair e);

 private:
  static constexpr std::uint8_t kAbsent = 0;
  static constexpr std::uint8_t kActive = 1;
  static constexpr std::uint8_t kMarked = 2;

  std::size_t index(NodePair e) const { return static_cast<std::size_t>(e.lo) * n_ + e.hi; }

  std::size_t n_ = 0;
  std::size_t b_ = 0;
  std::size_t size_ = 0;
  std::size_t marked_ = 0;
  std::vector<std::uint8_t> status_;
  std::vector<std::uint32_t> degree_;
};

// Number of requests to a pair per special request: ceil(alpha / ell).
std::uint32_t special_threshold(double alpha, std::uint32_t ell);

// Per-pair occurrence counters modulo k_e.
class SpecialCounters {
 public:
  SpecialCounters() = default;
  SpecialCounters(const Topology& topo, double alpha);

  // Counts one request to e; true when it is the k_e-th since the last wrap.
  bool hit(NodePair e);
  std::uint32_t count(NodePair e) const { return count_[index(e)]; }
  std::uint32_t threshold(NodePair e) const { return threshold_[index(e)]; }

 private:
  std::size_t index(NodePair e) const { return static_cast<std::size_t>(e.lo) * n_ + e.hi; }

  std::size_t n_ = 0;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> threshold_;
};

// Charges the cost of serving req under the current matching: 1 over a
// (possibly marked) matching edge, dist(req) over the fixed network.
double serve(const MatchingState& state, const Topology& topo, Request req, CostLedger& ledger);

// Seed of the paging cache at `node` for a run seeded with `run_seed`.
std::uint64_t cache_seed(std::uint64_t run_seed, NodeId node);

struct StepEvents {
  bool special = false;
  PagingEvents at_lo;
  PagingEvents at_hi;
  std::vector<NodePair> inserted;
  std::vector<NodePair> removed;
  std::vector<NodePair> marked;
};

// Randomized online b-matching: per-request serving, the special-request
// filter, one paging cache per node and the rule that a pair is matched
// exactly when it is cached at both endpoints (lazily relaxed in lazy mode).
class RbmaEngine {
 public:
  RbmaEngine(const Topology& topo, std::size_t b, double alpha, PagingPolicy policy, RemovalMode mode,
             std::uint64_t seed);

  // serve() followed by step().
  StepEvents process(Request req);
  double serve(Request req);
  // Reconfiguration after req has been served.
  StepEvents step(Request req);
  // process() without the event record.
  void advance(Request req);

  const MatchingState& matching() const { return matching_; }
  const CostLedger& ledger() const { return ledger_; }
  const SpecialCounters& counters() const { return counters_; }
  const PagingCache& cache(NodeId v) const { return caches_[v]; }
  RemovalMode mode() const { return mode_; }

  // Pairs cached at both endpoints, canonically sorted.
  std::vector<NodePair> cache_intersection() const;
  // Full recomputation of every state invariant; throws InvariantViolation.
  void check_invariants() const;

 private:
  void step_impl(Request req, StepEvents* ev);
  // Removes the longest-marked edge incident to v.
  NodePair prune(NodeId v);

  const Topology* topo_;
  RemovalMode mode_;
  MatchingState matching_;
  SpecialCounters counters_;
  CostLedger ledger_;
  std::vector<PagingCache> caches_;
  // Lazy mode: per-node queue of (mark stamp, edge); stale entries are
  // skipped when their stamp no longer matches mark_stamp_.
  std::vector<std::deque<std::pair<std::uint64_t, NodePair>>> mark_queue_;
  std::vector<std::uint64_t> mark_stamp_;
  std::uint64_t next_stamp_ = 1;
};

struct RunOutcome {
  CostLedger ledger;
  MatchingState matching;
};

using RbmaObserver = std::function<void(std::size_t index, Request req, const StepEvents& events,
                                        const RbmaEngine& engine)>;

RunOutcome run_algorithm(const Topology& topo, const Trace& trace, std::size_t b, double alpha,
                         PagingPolicy policy, RemovalMode mode, std::uint64_t seed,
                         const RbmaObserver& observer = {});

}  // namespace rbma
