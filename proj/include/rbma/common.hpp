#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace rbma {

using NodeId = std::uint32_t;

enum class Errc {
  DisconnectedGraph,
  SelfLoop,
  NodeOutOfRange,
  InvalidParams,
  MalformedLine,
  AllZeroMatrix,
  InvalidExponent,
  ItemOutOfRange,
  InvalidCost,
  InvariantViolation,
  InstanceTooLarge,
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code);

// All library failures are reported through this one exception type; the
// code identifies the failure class and what() carries the detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Unordered node pair kept in canonical order (lo < hi).
struct NodePair {
  NodeId lo = 0;
  NodeId hi = 0;

  NodePair() = default;
  NodePair(NodeId a, NodeId b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;

  bool touches(NodeId v) const { return lo == v || hi == v; }
  NodeId other(NodeId v) const { return v == lo ? hi : lo; }
};

// Opaque page identifier for the paging layer. Node pairs are packed so that
// numeric order coincides with canonical pair order.
using PageId = std::uint64_t;

inline PageId page_of(NodePair p) { return (static_cast<PageId>(p.lo) << 32) | p.hi; }

inline NodePair pair_of(PageId page) {
  return NodePair(static_cast<NodeId>(page >> 32), static_cast<NodeId>(page & 0xffffffffu));
}

// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace rbma
