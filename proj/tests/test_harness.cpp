#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rbma/harness.hpp"

using namespace rbma;

namespace {

struct Fixture {
  Topology topo = Topology::fat_tree(4);
  Trace trace = zipf_trace(16, 1.0, 4000, 2);
};

RunConfig config(Algorithm algo) {
  RunConfig c;
  c.algorithm = algo;
  c.b = 3;
  c.a = 2;
  c.alpha = 5;
  return c;
}

bool same_costs(const RunRecord& x, const RunRecord& y) {
  return x.routing_cost == y.routing_cost && x.reconfig_cost == y.reconfig_cost && x.total_cost == y.total_cost &&
         x.insertions == y.insertions && x.removals == y.removals;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "default repetitions are seeds 0..4") {
  auto c = config(Algorithm::rbma);
  CHECK(c.effective_seeds() == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
  auto res = run(c, topo, trace);
  CHECK(res.repetitions.size() == 5);
  CHECK(res.repetitions[3].seed == 3);
}

TEST_CASE_FIXTURE(Fixture, "oblivious is seed independent") {
  auto res = run(config(Algorithm::oblivious), topo, trace);
  for (const auto& r : res.repetitions) {
    CHECK(same_costs(r, res.repetitions.front()));
    CHECK(r.wall_time_s > 0);
    CHECK(r.reconfig_cost == 0);
  }
}

TEST_CASE_FIXTURE(Fixture, "rbma determinism contract") {
  auto c = config(Algorithm::rbma);
  c.seeds = {11, 12, 13};
  auto a = run(c, topo, trace), b = run(c, topo, trace);
  for (std::size_t i = 0; i < 3; ++i) CHECK(same_costs(a.repetitions[i], b.repetitions[i]));
  c.seeds = {21, 22, 23};
  auto other = run(c, topo, trace);
  bool any_diff = false;
  for (std::size_t i = 0; i < 3; ++i) any_diff |= !same_costs(a.repetitions[i], other.repetitions[i]);
  CHECK(any_diff);
}

TEST_CASE_FIXTURE(Fixture, "parallel repetitions match sequential ones in seed order") {
  auto c = config(Algorithm::rbma);
  c.seeds = {9, 3, 7, 1};
  auto seq = run(c, topo, trace);
  c.parallel = true;
  auto par = run(c, topo, trace);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(par.repetitions[i].seed == c.seeds[i]);
    CHECK(same_costs(par.repetitions[i], seq.repetitions[i]));
  }
}

TEST_CASE_FIXTURE(Fixture, "mean is the arithmetic mean") {
  auto res = run(config(Algorithm::rbma), topo, trace);
  double sum = 0;
  for (const auto& r : res.repetitions) sum += r.total_cost;
  CHECK(res.mean.total_cost == doctest::Approx(sum / 5));
}

TEST_CASE_FIXTURE(Fixture, "every algorithm runs; so_bma charges its static configuration") {
  for (auto algo : {Algorithm::rbma, Algorithm::dbma, Algorithm::so_bma, Algorithm::oblivious}) {
    auto c = config(algo);
    c.repetitions = 1;
    auto res = run(c, topo, trace);
    CHECK(res.mean.total_cost == doctest::Approx(res.mean.routing_cost + res.mean.reconfig_cost));
  }
  auto so = run(config(Algorithm::so_bma), topo, trace);
  CHECK(so.mean.removals == 0);
  CHECK(so.mean.reconfig_cost == 5 * so.mean.insertions);
  CHECK(so.notes.find("greedy") != std::string::npos);
  CHECK(run(config(Algorithm::dbma), topo, trace).notes.find("stand-in") != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "config validation") {
  auto c = config(Algorithm::rbma);
  c.a = 4;
  CHECK_THROWS_AS(run(c, topo, trace), Error);
  c = config(Algorithm::rbma);
  c.alpha = 0.5;
  CHECK_THROWS_AS(run(c, topo, trace), Error);
  Trace wide = zipf_trace(20, 1.0, 10, 0);
  CHECK_THROWS_AS(run(config(Algorithm::oblivious), topo, wide), Error);
}

TEST_CASE("csv row counts") {
  std::ostringstream empty;
  write_results_csv(empty, {});
  CHECK(empty.str() ==
        "algorithm,b,a,alpha,mode,seed,routing_cost,reconfig_cost,total_cost,insertions,removals,wall_time_s\n");

  auto topo = Topology::star(4);
  Trace t = zipf_trace(5, 1.0, 300, 1);
  auto c = config(Algorithm::rbma);
  c.b = 2;
  c.seeds = {4};
  std::vector<RunResult> one{run(c, topo, t)};
  std::ostringstream out1;
  write_results_csv(out1, one);
  std::string s1 = out1.str();
  CHECK(std::count(s1.begin(), s1.end(), '\n') == 3);
  CHECK(s1.find(",mean,") != std::string::npos);
  CHECK(same_costs(one[0].mean, one[0].repetitions[0]));

  c.seeds.clear();
  std::vector<RunResult> five{run(c, topo, t)};
  std::ostringstream out5;
  write_results_csv(out5, five);
  std::string s5 = out5.str();
  CHECK(std::count(s5.begin(), s5.end(), '\n') == 7);
}

TEST_CASE_FIXTURE(Fixture, "csv round trip recovers cost fields exactly") {
  std::vector<RunResult> results;
  for (auto algo : {Algorithm::rbma, Algorithm::dbma, Algorithm::so_bma, Algorithm::oblivious}) {
    auto c = config(algo);
    c.alpha = 2.75;
    results.push_back(run(c, topo, trace));
  }
  const auto path = std::filesystem::temp_directory_path() / "rbma_roundtrip.csv";
  write_results_csv(path.string(), results);
  std::ifstream in(path);
  auto back = read_results_csv(in);
  REQUIRE(back.size() == results.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].config.algorithm == results[i].config.algorithm);
    CHECK(back[i].config.alpha == results[i].config.alpha);
    CHECK(back[i].config.b == results[i].config.b);
    CHECK(back[i].config.seeds == results[i].config.effective_seeds());
    REQUIRE(back[i].repetitions.size() == results[i].repetitions.size());
    for (std::size_t j = 0; j < back[i].repetitions.size(); ++j) {
      CHECK(same_costs(back[i].repetitions[j], results[i].repetitions[j]));
      CHECK(back[i].repetitions[j].wall_time_s == results[i].repetitions[j].wall_time_s);
    }
    CHECK(same_costs(back[i].mean, results[i].mean));
  }
  std::filesystem::remove(path);

  std::istringstream truncated(
      "algorithm,b,a,alpha,mode,seed,routing_cost,reconfig_cost,total_cost,insertions,removals,wall_time_s\n"
      "rbma,2,1,1,lazy,0,1,2,3,4,5,6\n");
  CHECK_THROWS_AS(read_results_csv(truncated), Error);
}

TEST_CASE_FIXTURE(Fixture, "metadata echoes the configuration") {
  auto c = config(Algorithm::dbma);
  c.topology_source = "fat_tree:4";
  c.repetitions = 1;
  std::vector<RunResult> res{run(c, topo, trace)};
  std::ostringstream out;
  write_metadata_json(out, res);
  auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["version"] == kVersion);
  CHECK(doc["runs"][0]["algorithm"] == "dbma");
  CHECK(doc["runs"][0]["topology"] == "fat_tree:4");
  CHECK(doc["runs"][0]["notes"].get<std::string>().find("stand-in") != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "sweep") {
  auto c = config(Algorithm::oblivious);
  c.a = 1;
  c.repetitions = 2;
  std::vector<std::size_t> bs{6, 18};
  auto out = sweep(c, bs, topo, trace);
  REQUIRE(out.size() == 2);
  CHECK(out.at(6).config.b == 6);
  CHECK(out.at(18).mean.routing_cost == out.at(6).mean.routing_cost);
  CHECK(sweep(c, {}, topo, trace).empty());
  std::vector<std::size_t> low{1};
  c.a = 2;
  CHECK_THROWS_AS(sweep(c, low, topo, trace), Error);
}

TEST_CASE("oracle check") {
  std::vector<std::pair<NodeId, NodeId>> path{{0, 1}, {1, 2}};
  auto topo = Topology::from_edges(3, path);
  Trace t{3, std::vector<Request>(4, Request(0, 2))};

  SUBCASE("reconfiguration never pays: OPT is oblivious") {
    auto rep = oracle_check(topo, t, 1, 1, 100.0, 10);
    CHECK(rep.opt == 8.0);
    CHECK(rep.mean_total == 8.0);  // k_e = 50 > 4 requests, R-BMA never reconfigures
    CHECK_FALSE(rep.low_confidence);
  }
  SUBCASE("single trial is flagged") {
    auto rep = oracle_check(topo, t, 1, 1, 1.0, 1);
    CHECK(rep.low_confidence);
    CHECK(rep.gamma == 3.0);
    CHECK(rep.beta_allowance == 3.0 * 1.0 * 9);
  }
  SUBCASE("star instance") {
    std::mt19937_64 gen(1);
    std::vector<std::uint32_t> seq(6);
    for (auto& x : seq) x = 1 + static_cast<std::uint32_t>(gen() % 3);
    auto inst = adversarial_star_instance(3, 2, 2, 2.0, seq);
    auto rep = oracle_check(inst.topology, inst.trace, 2, 2, 2.0, 200);
    CHECK(rep.opt > 0);
    CHECK(std::isfinite(rep.ratio));
    CHECK(rep.mean_total >= rep.opt);
  }
  CHECK_THROWS_AS(oracle_check(Topology::star(6), t, 1, 1, 1.0, 3), Error);
}

TEST_CASE("source resolution") {
  CHECK(load_topology("fat_tree:4").node_count() == 16);
  CHECK(load_topology("leaf_spine:50,4").node_count() == 50);
  CHECK(load_topology("star:3").node_count() == 4);
  CHECK_THROWS_AS(load_topology("leaf_spine:5"), Error);
  CHECK_THROWS_AS(load_topology("/nonexistent/topology.txt"), Error);
  auto t = load_trace("zipf:1.2,100,7", 16);
  CHECK(t.size() == 100);
  CHECK(t == zipf_trace(16, 1.2, 100, 7));
  CHECK_THROWS_AS(load_trace("zipf:1.2,100", 16), Error);
}
