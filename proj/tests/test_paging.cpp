#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rbma/paging.hpp"

using namespace rbma;

namespace {

constexpr PageId p = 10, q = 20, r = 30;

double harmonic(std::size_t b) {
  double h = 0;
  for (std::size_t i = 1; i <= b; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

}  // namespace

TEST_CASE("capacity 1 faults on every change") {
  for (auto policy : {PagingPolicy::randomized_marking, PagingPolicy::deterministic_marking}) {
    PagingCache c(1, policy, 7);
    auto e1 = c.request(p);
    CHECK(e1.fault);
    CHECK(e1.evicted.empty());
    CHECK(e1.fetched == p);
    CHECK(c.request(q).evicted == std::vector<PageId>{p});
    auto e3 = c.request(p);
    CHECK(e3.fault);
    CHECK(e3.evicted == std::vector<PageId>{q});
    CHECK(c.faults() == 3);
  }
}

TEST_CASE("hits mark without faulting") {
  PagingCache c(2, PagingPolicy::randomized_marking, 1);
  for (int i = 0; i < 50; ++i) {
    c.request(p);
    c.request(q);
  }
  CHECK(c.faults() == 2);
  CHECK(c.is_marked(p));
  CHECK(c.is_marked(q));
  auto hit = c.request(p);
  CHECK_FALSE(hit.fault);
  CHECK_FALSE(hit.fetched.has_value());
}

TEST_CASE("randomized marking evicts each unmarked page with equal probability") {
  const int trials = 10000;
  int evicted_p = 0;
  for (int seed = 0; seed < trials; ++seed) {
    PagingCache c(2, PagingPolicy::randomized_marking, static_cast<std::uint64_t>(seed));
    c.request(p);
    c.request(q);
    auto ev = c.request(r);
    REQUIRE(ev.evicted.size() == 1);
    CHECK(c.phases_started() == 1);
    evicted_p += ev.evicted[0] == p;
  }
  CHECK(std::abs(evicted_p / static_cast<double>(trials) - 0.5) <= 0.02);
}

TEST_CASE("deterministic marking evicts the smallest unmarked page") {
  PagingCache c(3, PagingPolicy::deterministic_marking, 0);
  c.request(30);
  c.request(10);
  c.request(20);
  CHECK(c.request(40).evicted == std::vector<PageId>{10});  // new phase
  CHECK(c.request(50).evicted == std::vector<PageId>{20});  // 40 is marked
  CHECK(c.request(60).evicted == std::vector<PageId>{30});
  CHECK(c.request(70).evicted == std::vector<PageId>{40});  // next phase
}

TEST_CASE("marking invariants over random sequences") {
  std::mt19937_64 gen(99);
  for (int round = 0; round < 200; ++round) {
    const std::size_t cap = 1 + gen() % 4;
    const std::size_t pages = cap + 1 + gen() % 4;
    PagingCache c(cap, PagingPolicy::randomized_marking, gen());
    std::set<PageId> phase_pages;
    std::size_t phase = 0;
    for (int i = 0; i < 200; ++i) {
      PageId page = gen() % pages;
      std::vector<PageId> marked_before;
      for (PageId e : c.entries())
        if (c.is_marked(e)) marked_before.push_back(e);
      auto ev = c.request(page);
      if (c.phases_started() != phase) {
        phase = c.phases_started();
        phase_pages.clear();
        marked_before.clear();  // marks were reset
      }
      phase_pages.insert(page);
      CHECK(phase_pages.size() <= cap);
      for (PageId v : ev.evicted)
        CHECK(std::find(marked_before.begin(), marked_before.end(), v) == marked_before.end());
      CHECK(c.size() <= cap);
      CHECK(c.marked_count() <= c.size());
      CHECK(c.contains(page));
      CHECK(c.is_marked(page));
      CHECK(ev.fetched.has_value() == ev.fault);
    }
  }
}

TEST_CASE("identical seed and sequence give identical event streams") {
  std::mt19937_64 gen(5);
  std::vector<PageId> seq(500);
  for (auto& x : seq) x = gen() % 9;
  PagingCache a(4, PagingPolicy::randomized_marking, 123), b(4, PagingPolicy::randomized_marking, 123);
  for (PageId x : seq) {
    auto ea = a.request(x), eb = b.request(x);
    CHECK(ea.fault == eb.fault);
    CHECK(ea.evicted == eb.evicted);
  }
}

TEST_CASE("belady_min examples") {
  std::vector<PageId> s1{p, q, p};
  CHECK(belady_min(s1, 1) == 3);
  std::vector<PageId> s2{p, q, r, p, q};
  CHECK(belady_min(s2, 2) == 4);
  CHECK(oracle::exhaustive_paging_opt(s2, 2) == 4);
  std::vector<PageId> s3{p, q, p, p, q, r, r, q};
  CHECK(belady_min(s3, 3) == 3);
  CHECK(belady_min({}, 2) == 0);
  CHECK_THROWS_AS(belady_min(s1, 0), Error);
}

TEST_CASE("belady_min matches exhaustive search") {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 300; ++i) {
    std::vector<PageId> seq(1 + gen() % 12);
    const std::size_t pages = 1 + gen() % 5;
    for (auto& x : seq) x = gen() % pages;
    const std::size_t cap = 1 + gen() % 3;
    CHECK(belady_min(seq, cap) == oracle::exhaustive_paging_opt(seq, cap));
  }
}

TEST_CASE("randomized marking stays within the 2 H_b bound on b+1 pages") {
  std::mt19937_64 gen(11);
  for (std::size_t b : {1u, 2u, 3u, 5u}) {
    std::vector<PageId> seq(300);
    for (auto& x : seq) x = gen() % (b + 1);
    const double opt = static_cast<double>(belady_min(seq, b));
    double sum = 0;
    const int trials = 400;
    for (int s = 0; s < trials; ++s) {
      PagingCache c(b, PagingPolicy::randomized_marking, static_cast<std::uint64_t>(s));
      for (PageId x : seq) c.request(x);
      sum += static_cast<double>(c.faults());
    }
    CHECK(sum / trials <= 1.1 * (2 * harmonic(b) * opt + static_cast<double>(b)));
  }
}
