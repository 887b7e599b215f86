#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "absl/container/flat_hash_map.h"
#include <vector>

#include "rbma/common.hpp"

namespace rbma {

enum class PagingPolicy { randomized_marking, deterministic_marking };

struct PagingEvents {
  bool fault = false;
  std::vector<PageId> evicted;
  std::optional<PageId> fetched;
};

// Marking-family paging cache.
//
// Requests mark pages. On a fault with a full cache, if every entry is
// marked a new phase begins and all marks are cleared; then one unmarked
// entry is evicted (uniformly at random, or the smallest page id for the
// deterministic variant) and the requested page is fetched and marked.
// Cost model: one unit per fetch, evictions free, no bypassing.
class PagingCache {
 public:
  // Allocation-free outcome of one request; marking evicts at most one page.
  struct Access {
    bool fault = false;
    std::optional<PageId> evicted;
  };

  PagingCache(std::size_t capacity, PagingPolicy policy, std::uint64_t seed);

  PagingEvents request(PageId page);
  Access access(PageId page);

  bool contains(PageId page) const { return find_slot(page) < entries_.size(); }
  bool is_marked(PageId page) const;

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t marked_count() const { return marked_; }
  std::size_t faults() const { return faults_; }
  // Number of completed phase boundaries (times all marks were cleared).
  std::size_t phases_started() const { return phases_; }
  PagingPolicy policy() const { return policy_; }

  // Current entries in unspecified order.
  std::span<const PageId> entries() const { return entries_; }

 private:
  // Index of page in entries_, or entries_.size() when absent.
  std::size_t find_slot(PageId page) const;
  void swap_slots(std::size_t i, std::size_t j);

  std::size_t capacity_;
  PagingPolicy policy_;
  std::mt19937_64 rng_;
  // entries_[0, marked_) are marked, entries_[marked_, size) are unmarked.
  std::vector<PageId> entries_;
  absl::flat_hash_map<PageId, std::uint32_t> slot_;
  std::size_t marked_ = 0;
  std::size_t faults_ = 0;
  std::size_t phases_ = 0;
};

// Fault count of the offline farthest-in-future policy (optimal paging
// without bypassing). capacity must be >= 1.
std::size_t belady_min(std::span<const PageId> sequence, std::size_t capacity);

}  // namespace rbma
