#include "rbma/paging.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace rbma {

PagingCache::PagingCache(std::size_t capacity, PagingPolicy policy, std::uint64_t seed)
    : capacity_(capacity), policy_(policy), rng_(seed) {
  if (capacity == 0) throw Error(Errc::InvalidParams, "paging capacity must be >= 1");
  entries_.reserve(capacity);
  slot_.reserve(capacity + 1);
}

std::size_t PagingCache::find_slot(PageId page) const {
  auto it = slot_.find(page);
  return it == slot_.end() ? entries_.size() : it->second;
}

void PagingCache::swap_slots(std::size_t i, std::size_t j) {
  if (i == j) return;
  std::swap(entries_[i], entries_[j]);
  slot_[entries_[i]] = static_cast<std::uint32_t>(i);
  slot_[entries_[j]] = static_cast<std::uint32_t>(j);
}

bool PagingCache::is_marked(PageId page) const { return find_slot(page) < marked_; }

PagingEvents PagingCache::request(PageId page) {
  PagingEvents ev;
  auto acc = access(page);
  ev.fault = acc.fault;
  if (acc.evicted) ev.evicted.push_back(*acc.evicted);
  if (acc.fault) ev.fetched = page;
  return ev;
}

PagingCache::Access PagingCache::access(PageId page) {
  Access ev;
  if (std::size_t slot = find_slot(page); slot < entries_.size()) {
    if (slot >= marked_) swap_slots(slot, marked_++);
    return ev;
  }

  ev.fault = true;
  ++faults_;
  if (entries_.size() == capacity_) {
    if (marked_ == entries_.size()) {
      marked_ = 0;
      ++phases_;
    }
    std::size_t victim = marked_;
    if (policy_ == PagingPolicy::randomized_marking) {
      std::uniform_int_distribution<std::size_t> pick(marked_, entries_.size() - 1);
      victim = pick(rng_);
    } else {
      for (std::size_t i = marked_ + 1; i < entries_.size(); ++i)
        if (entries_[i] < entries_[victim]) victim = i;
    }
    ev.evicted = entries_[victim];
    swap_slots(victim, entries_.size() - 1);
    slot_.erase(entries_.back());
    entries_.pop_back();
  }

  entries_.push_back(page);
  slot_[page] = static_cast<std::uint32_t>(entries_.size() - 1);
  swap_slots(entries_.size() - 1, marked_++);
  return ev;
}

std::size_t belady_min(std::span<const PageId> sequence, std::size_t capacity) {
  if (capacity == 0) throw Error(Errc::InvalidParams, "paging capacity must be >= 1");
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  const std::size_t n = sequence.size();

  std::vector<std::size_t> next_use(n, kNever);
  std::unordered_map<PageId, std::size_t> upcoming;
  for (std::size_t i = n; i-- > 0;) {
    auto it = upcoming.find(sequence[i]);
    next_use[i] = it == upcoming.end() ? kNever : it->second;
    upcoming[sequence[i]] = i;
  }

  // Cache keyed by (next use, page) so the farthest-in-future page is last.
  // Ties among never-reused pages break by page id.
  std::set<std::pair<std::size_t, PageId>> by_next;
  std::unordered_map<PageId, std::size_t> cached_next;
  std::size_t faults = 0;
  for (std::size_t i = 0; i < n; ++i) {
    PageId p = sequence[i];
    if (auto it = cached_next.find(p); it != cached_next.end()) {
      by_next.erase({it->second, p});
    } else {
      ++faults;
      if (cached_next.size() == capacity) {
        auto victim = std::prev(by_next.end());
        cached_next.erase(victim->second);
        by_next.erase(victim);
      }
    }
    cached_next[p] = next_use[i];
    by_next.insert({next_use[i], p});
  }
  return faults;
}

}  // namespace rbma
