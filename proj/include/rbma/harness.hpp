#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rbma/engine.hpp"
#include "rbma/paging.hpp"
#include "rbma/topology.hpp"
#include "rbma/trace.hpp"

namespace rbma {

inline constexpr const char* kVersion = "0.1.0";

enum class Algorithm { rbma, dbma, so_bma, oblivious };

std::string_view to_string(Algorithm algo);
std::string_view to_string(RemovalMode mode);
std::string_view to_string(PagingPolicy policy);
Algorithm parse_algorithm(const std::string& name);
RemovalMode parse_mode(const std::string& name);
PagingPolicy parse_policy(const std::string& name);

struct RunConfig {
  std::string topology_source;  // echoed into metadata only
  std::string trace_source;
  Algorithm algorithm = Algorithm::rbma;
  std::size_t b = 1;
  std::size_t a = 1;
  double alpha = 1.0;
  RemovalMode mode = RemovalMode::lazy;
  PagingPolicy policy = PagingPolicy::randomized_marking;
  std::vector<std::uint64_t> seeds;  // empty: 0 .. repetitions-1
  std::size_t repetitions = 5;
  bool parallel = false;

  // Throws ConfigError.
  void validate() const;
  std::vector<std::uint64_t> effective_seeds() const;
};

struct RunRecord {
  std::uint64_t seed = 0;
  double routing_cost = 0;
  double reconfig_cost = 0;
  double total_cost = 0;
  double insertions = 0;  // integral per repetition, fractional in means
  double removals = 0;
  double wall_time_s = 0;
};

struct RunResult {
  RunConfig config;
  std::vector<RunRecord> repetitions;  // ordered by seed position in the config
  RunRecord mean;
  std::string notes;
};

// Executes config.algorithm once per seed. Only the request-processing loop
// is timed.
RunResult run(const RunConfig& config, const Topology& topo, const Trace& trace);

// One run() per b value, keyed by b.
std::map<std::size_t, RunResult> sweep(const RunConfig& config, std::span<const std::size_t> b_values,
                                       const Topology& topo, const Trace& trace);

// CSV with header
// algorithm,b,a,alpha,mode,seed,routing_cost,reconfig_cost,total_cost,insertions,removals,wall_time_s
// and one row per repetition followed by a `mean` row per result. Numbers
// use shortest round-trip formatting.
void write_results_csv(std::ostream& out, std::span<const RunResult> results);
void write_results_csv(const std::string& path, std::span<const RunResult> results);
std::vector<RunResult> read_results_csv(std::istream& in);

// Config echo, version and per-algorithm notes as JSON.
void write_metadata_json(std::ostream& out, std::span<const RunResult> results);

struct OracleReport {
  std::size_t trials = 0;
  double mean_total = 0;
  double opt = 0;
  double gamma = 0;
  double beta_allowance = 0;  // gamma * alpha * |V|^2
  double ratio = 0;           // (mean_total - beta_allowance) / opt
  bool low_confidence = false;
};

// Mean R-BMA total cost over `trials` seeds (0 .. trials-1) against the
// exact offline optimum with cap a. The instance must satisfy the
// brute-force guards.
OracleReport oracle_check(const Topology& topo, const Trace& trace, std::size_t b, std::size_t a, double alpha,
                          std::size_t trials, RemovalMode mode = RemovalMode::strict,
                          PagingPolicy policy = PagingPolicy::randomized_marking);

// Resolves `star:N`, `leaf_spine:L,S`, `fat_tree:K`, or an edge-list path.
Topology load_topology(const std::string& source);
// Resolves `zipf:EXP,COUNT,SEED`, `matrix:PATH,COUNT,SEED`, or a trace path.
Trace load_trace(const std::string& source, std::size_t node_count);

}  // namespace rbma
