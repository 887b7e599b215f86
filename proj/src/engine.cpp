#include "rbma/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rbma {

namespace {

std::string pair_str(NodePair e) {
  return "(" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ")";
}

void validate_alpha(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha))
    throw Error(Errc::InvalidCost, "alpha must be a finite real >= 1");
}

}  // namespace

CostLedger::CostLedger(double alpha, std::uint32_t ell_max) : alpha_(alpha), ell_max_(ell_max) {
  validate_alpha(alpha);
}

MatchingState::MatchingState(std::size_t node_count, std::size_t b)
    : n_(node_count), b_(b), status_(node_count * node_count, kAbsent), degree_(node_count, 0) {
  if (b == 0) throw Error(Errc::InvalidParams, "degree bound b must be >= 1");
}

std::size_t MatchingState::max_degree() const {
  return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
}

std::vector<NodePair> MatchingState::edges() const {
  std::vector<NodePair> out;
  out.reserve(size_);
  for (NodeId u = 0; u < n_; ++u)
    for (NodeId v = u + 1; v < n_; ++v)
      if (status_[index({u, v})] != kAbsent) out.emplace_back(u, v);
  return out;
}

std::vector<NodePair> MatchingState::marked_edges() const {
  std::vector<NodePair> out;
  for (NodeId u = 0; u < n_; ++u)
    for (NodeId v = u + 1; v < n_; ++v)
      if (status_[index({u, v})] == kMarked) out.emplace_back(u, v);
  return out;
}

void MatchingState::insert(NodePair e) {
  auto& s = status_[index(e)];
  if (s != kAbsent) throw Error(Errc::InvariantViolation, "insert of present edge " + pair_str(e));
  s = kActive;
  ++size_;
  ++degree_[e.lo];
  ++degree_[e.hi];
}

void MatchingState::remove(NodePair e) {
  auto& s = status_[index(e)];
  if (s == kAbsent) throw Error(Errc::InvariantViolation, "remove of absent edge " + pair_str(e));
  if (s == kMarked) --marked_;
  s = kAbsent;
  --size_;
  --degree_[e.lo];
  --degree_[e.hi];
}

void MatchingState::mark(NodePair e) {
  auto& s = status_[index(e)];
  if (s != kActive) throw Error(Errc::InvariantViolation, "mark of non-active edge " + pair_str(e));
  s = kMarked;
  ++marked_;
}

void MatchingState::unmark(NodePair e) {
  auto& s = status_[index(e)];
  if (s != kMarked) throw Error(Errc::InvariantViolation, "unmark of unmarked edge " + pair_str(e));
  s = kActive;
  --marked_;
}

std::uint32_t special_threshold(double alpha, std::uint32_t ell) {
  validate_alpha(alpha);
  if (ell < 1) throw Error(Errc::InvalidCost, "path length must be >= 1");
  return static_cast<std::uint32_t>(std::ceil(alpha / static_cast<double>(ell)));
}

SpecialCounters::SpecialCounters(const Topology& topo, double alpha)
    : n_(topo.node_count()), count_(n_ * n_, 0), threshold_(n_ * n_, 1) {
  for (NodeId u = 0; u < n_; ++u)
    for (NodeId v = u + 1; v < n_; ++v) threshold_[index({u, v})] = special_threshold(alpha, topo.dist(u, v));
}

bool SpecialCounters::hit(NodePair e) {
  auto i = index(e);
  if (++count_[i] < threshold_[i]) return false;
  count_[i] = 0;
  return true;
}

double serve(const MatchingState& state, const Topology& topo, Request req, CostLedger& ledger) {
  double cost = state.contains(req) ? 1.0 : static_cast<double>(topo.dist(req));
  ledger.charge_routing(cost);
  return cost;
}

std::uint64_t cache_seed(std::uint64_t run_seed, NodeId node) {
  return mix_seed(mix_seed(run_seed) ^ (0x5851f42d4c957f2dULL * (static_cast<std::uint64_t>(node) + 1)));
}

RbmaEngine::RbmaEngine(const Topology& topo, std::size_t b, double alpha, PagingPolicy policy,
                       RemovalMode mode, std::uint64_t seed)
    : topo_(&topo),
      mode_(mode),
      matching_(topo.node_count(), b),
      counters_(topo, alpha),
      ledger_(alpha, topo.ell_max()) {
  const std::size_t n = topo.node_count();
  caches_.reserve(n);
  for (NodeId v = 0; v < n; ++v) caches_.emplace_back(b, policy, cache_seed(seed, v));
  if (mode == RemovalMode::lazy) {
    mark_queue_.resize(n);
    mark_stamp_.assign(n * n, 0);
  }
}

StepEvents RbmaEngine::process(Request req) {
  serve(req);
  return step(req);
}

double RbmaEngine::serve(Request req) { return rbma::serve(matching_, *topo_, req, ledger_); }

StepEvents RbmaEngine::step(Request req) {
  StepEvents ev;
  step_impl(req, &ev);
  return ev;
}

void RbmaEngine::advance(Request req) {
  serve(req);
  step_impl(req, nullptr);
}

void RbmaEngine::step_impl(Request req, StepEvents* ev) {
  if (!counters_.hit(req)) return;

  const PageId page = page_of(req);
  const auto at_lo = caches_[req.lo].access(page);
  const auto at_hi = caches_[req.hi].access(page);
  if (ev) {
    ev->special = true;
    for (auto [acc, out] : {std::pair{&at_lo, &ev->at_lo}, std::pair{&at_hi, &ev->at_hi}}) {
      out->fault = acc->fault;
      if (acc->evicted) out->evicted.push_back(*acc->evicted);
      if (acc->fault) out->fetched = page;
    }
  }

  // Each marking cache evicts at most one page; handle them in canonical order.
  NodePair evicted[2];
  std::size_t n_evicted = 0;
  if (at_lo.evicted) evicted[n_evicted++] = pair_of(*at_lo.evicted);
  if (at_hi.evicted) evicted[n_evicted++] = pair_of(*at_hi.evicted);
  if (n_evicted == 2) {
    if (evicted[1] < evicted[0]) std::swap(evicted[0], evicted[1]);
    if (evicted[0] == evicted[1]) n_evicted = 1;
  }

  for (std::size_t i = 0; i < n_evicted; ++i) {
    const NodePair q = evicted[i];
    if (!matching_.contains(q) || matching_.is_marked(q)) continue;
    if (mode_ == RemovalMode::strict) {
      matching_.remove(q);
      ledger_.record_removal();
      if (ev) ev->removed.push_back(q);
    } else {
      matching_.mark(q);
      const std::uint64_t stamp = next_stamp_++;
      mark_stamp_[static_cast<std::size_t>(q.lo) * matching_.node_count() + q.hi] = stamp;
      mark_queue_[q.lo].emplace_back(stamp, q);
      mark_queue_[q.hi].emplace_back(stamp, q);
      if (ev) ev->marked.push_back(q);
    }
  }

  if (!matching_.contains(req)) {
    matching_.insert(req);
    ledger_.record_insertion();
    if (ev) ev->inserted.push_back(req);
  } else if (matching_.is_marked(req)) {
    matching_.unmark(req);
  }

  if (mode_ == RemovalMode::lazy) {
    for (NodeId v : {req.lo, req.hi}) {
      while (matching_.degree(v) > matching_.b()) {
        NodePair pruned = prune(v);
        if (ev) ev->removed.push_back(pruned);
      }
    }
  }

  if (matching_.degree(req.lo) > matching_.b() || matching_.degree(req.hi) > matching_.b())
    throw Error(Errc::InvariantViolation, "degree bound exceeded after request " + pair_str(req));
}

NodePair RbmaEngine::prune(NodeId v) {
  auto& queue = mark_queue_[v];
  const std::size_t n = matching_.node_count();
  while (!queue.empty()) {
    auto [stamp, e] = queue.front();
    queue.pop_front();
    auto& current = mark_stamp_[static_cast<std::size_t>(e.lo) * n + e.hi];
    if (current != stamp || !matching_.is_marked(e)) continue;
    current = 0;
    matching_.remove(e);
    ledger_.record_removal();
    // Drop stale entries so queues stay O(b) even on nodes that rarely prune.
    auto& other = mark_queue_[e.other(v)];
    if (other.size() > 4 * matching_.b() + 16) {
      std::erase_if(other, [&](const auto& entry) {
        return mark_stamp_[static_cast<std::size_t>(entry.second.lo) * n + entry.second.hi] != entry.first ||
               !matching_.is_marked(entry.second);
      });
    }
    return e;
  }
  throw Error(Errc::InvariantViolation, "node " + std::to_string(v) + " over degree with no marked edge");
}

std::vector<NodePair> RbmaEngine::cache_intersection() const {
  std::vector<NodePair> out;
  for (NodeId w = 0; w < caches_.size(); ++w) {
    for (PageId p : caches_[w].entries()) {
      NodePair q = pair_of(p);
      if (q.lo == w && caches_[q.hi].contains(p)) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void RbmaEngine::check_invariants() const {
  const std::size_t b = matching_.b();
  for (NodeId v = 0; v < caches_.size(); ++v) {
    if (matching_.degree(v) > b)
      throw Error(Errc::InvariantViolation, "degree of node " + std::to_string(v) + " exceeds b");
    if (caches_[v].size() > b)
      throw Error(Errc::InvariantViolation, "cache of node " + std::to_string(v) + " over capacity");
    for (PageId p : caches_[v].entries())
      if (!pair_of(p).touches(v))
        throw Error(Errc::InvariantViolation, "cache of node " + std::to_string(v) + " holds foreign pair");
  }

  auto edges = matching_.edges();
  std::vector<std::size_t> degree(caches_.size(), 0);
  for (NodePair e : edges) {
    ++degree[e.lo];
    ++degree[e.hi];
  }
  for (NodeId v = 0; v < caches_.size(); ++v)
    if (degree[v] != matching_.degree(v))
      throw Error(Errc::InvariantViolation, "degree counter of node " + std::to_string(v) + " is stale");

  auto both = cache_intersection();
  if (mode_ == RemovalMode::strict) {
    if (matching_.marked_count() != 0)
      throw Error(Errc::InvariantViolation, "strict mode holds marked edges");
    if (edges != both) throw Error(Errc::InvariantViolation, "matching differs from cache intersection");
  } else {
    std::vector<NodePair> active;
    for (NodePair e : edges)
      if (!matching_.is_marked(e)) active.push_back(e);
    if (active != both)
      throw Error(Errc::InvariantViolation, "unmarked matching edges differ from cache intersection");
  }
}

RunOutcome run_algorithm(const Topology& topo, const Trace& trace, std::size_t b, double alpha,
                         PagingPolicy policy, RemovalMode mode, std::uint64_t seed, const RbmaObserver& observer) {
  if (trace.node_count > topo.node_count())
    throw Error(Errc::NodeOutOfRange, "trace spans more nodes than the topology");
  RbmaEngine engine(topo, b, alpha, policy, mode, seed);
  for (std::size_t i = 0; i < trace.requests.size(); ++i) {
    const Request req = trace.requests[i];
    if (req.hi >= topo.node_count()) throw Error(Errc::NodeOutOfRange, "request " + pair_str(req));
    if (observer) {
      auto ev = engine.process(req);
      observer(i, req, ev, engine);
    } else {
      engine.advance(req);
    }
  }
  return {engine.ledger(), engine.matching()};
}

}  // namespace rbma
