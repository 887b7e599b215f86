#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rbma/common.hpp"
#include "rbma/topology.hpp"

namespace rbma {

// A unit communication request between two distinct nodes, canonicalized.
using Request = NodePair;

struct Trace {
  std::size_t node_count = 0;
  std::vector<Request> requests;

  std::size_t size() const { return requests.size(); }
  bool empty() const { return requests.empty(); }
  friend bool operator==(const Trace&, const Trace&) = default;
};

struct ParsedTrace {
  Trace trace;
  std::size_t skipped_self_loops = 0;
};

// Reads one request per line, `src dst` or `src,dst`; fields past the second
// are ignored. Self-loop lines are dropped and counted.
ParsedTrace parse_trace(std::istream& in, std::size_t node_count);
void write_trace(std::ostream& out, const Trace& trace);

// Row-major n x n weight matrix; the diagonal is ignored.
struct WeightMatrix {
  std::size_t n = 0;
  std::vector<double> weights;

  double at(std::size_t i, std::size_t j) const { return weights[i * n + j]; }
};

WeightMatrix read_weight_matrix(std::istream& in);

// Draws `count` requests i.i.d. from the normalized off-diagonal weights.
// Entries (i,j) and (j,i) both contribute to the unordered pair.
Trace sample_from_matrix(const WeightMatrix& matrix, std::size_t count, std::uint64_t seed);

// Ranks all node pairs in a seeded pseudorandom order and samples pair of
// rank r with probability proportional to r^-exponent.
Trace zipf_trace(std::size_t node_count, double exponent, std::size_t count, std::uint64_t seed);

// Pair ranking used by zipf_trace: element r-1 is the pair of rank r.
std::vector<NodePair> zipf_pair_ranking(std::size_t node_count, std::uint64_t seed);

struct StarInstance {
  Topology topology;
  Trace trace;
};

// Paging-to-matching reduction on a star: item i becomes leaf v_i and each
// paging request to i becomes a block of ceil(alpha) requests (v_0, v_i).
// Requires n_items > b >= a >= 1 and items in [1, n_items].
StarInstance adversarial_star_instance(std::size_t n_items, std::size_t b, std::size_t a, double alpha,
                                       std::span<const std::uint32_t> paging_sequence);

}  // namespace rbma
