#include "rbma/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rbma/baselines.hpp"

namespace rbma {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double x = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw Error(Errc::MalformedLine, "line " + std::to_string(line_no) + ": bad number '" + std::string(tok) + "'");
  return x;
}

std::uint64_t parse_u64(std::string_view tok, const std::string& what) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
    throw Error(Errc::ConfigError, "bad " + what + " '" + std::string(tok) + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

RunRecord execute_once(const RunConfig& cfg, const Topology& topo, const Trace& trace, std::uint64_t seed) {
  RunRecord rec;
  rec.seed = seed;
  CostLedger ledger;
  Clock::time_point start, stop;
  switch (cfg.algorithm) {
    case Algorithm::rbma: {
      RbmaEngine engine(topo, cfg.b, cfg.alpha, cfg.policy, cfg.mode, seed);
      start = Clock::now();
      for (const auto& r : trace.requests) engine.advance(r);
      stop = Clock::now();
      ledger = engine.ledger();
      break;
    }
    case Algorithm::dbma: {
      DbmaEngine engine(topo, cfg.b, cfg.alpha);
      start = Clock::now();
      for (const auto& r : trace.requests) engine.process(r);
      stop = Clock::now();
      ledger = engine.ledger();
      break;
    }
    case Algorithm::so_bma: {
      start = Clock::now();
      auto sm = offline_greedy_bmatching(WeightedDemand::from_trace(trace), topo, cfg.b, cfg.alpha);
      stop = Clock::now();
      ledger = CostLedger(cfg.alpha, topo.ell_max());
      ledger.charge_routing(sm.routing_cost);
      for (std::size_t i = 0; i < sm.edges.size(); ++i) ledger.record_insertion();
      break;
    }
    case Algorithm::oblivious: {
      start = Clock::now();
      double cost = oblivious_cost(topo, trace);
      stop = Clock::now();
      ledger = CostLedger(cfg.alpha, topo.ell_max());
      ledger.charge_routing(cost);
      break;
    }
  }
  rec.routing_cost = ledger.routing_cost();
  rec.reconfig_cost = ledger.reconfig_cost();
  rec.total_cost = ledger.total();
  rec.insertions = static_cast<double>(ledger.insertions());
  rec.removals = static_cast<double>(ledger.removals());
  rec.wall_time_s = std::chrono::duration<double>(stop - start).count();
  return rec;
}

RunRecord mean_of(const std::vector<RunRecord>& reps) {
  RunRecord m;
  if (reps.empty()) return m;
  for (const auto& r : reps) {
    m.routing_cost += r.routing_cost;
    m.reconfig_cost += r.reconfig_cost;
    m.total_cost += r.total_cost;
    m.insertions += r.insertions;
    m.removals += r.removals;
    m.wall_time_s += r.wall_time_s;
  }
  const double k = static_cast<double>(reps.size());
  m.routing_cost /= k;
  m.reconfig_cost /= k;
  m.total_cost /= k;
  m.insertions /= k;
  m.removals /= k;
  m.wall_time_s /= k;
  return m;
}

std::string notes_for(Algorithm algo) {
  switch (algo) {
    case Algorithm::dbma: return "stand-in baseline: credit-based deterministic online b-matching";
    case Algorithm::so_bma: return "static greedy b-matching over the whole trace (1/2-approximation of max weight)";
    case Algorithm::oblivious: return "fixed network only";
    case Algorithm::rbma: return "";
  }
  return "";
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::rbma: return "rbma";
    case Algorithm::dbma: return "dbma";
    case Algorithm::so_bma: return "so_bma";
    case Algorithm::oblivious: return "oblivious";
  }
  return "?";
}

std::string_view to_string(RemovalMode mode) { return mode == RemovalMode::strict ? "strict" : "lazy"; }

std::string_view to_string(PagingPolicy policy) {
  return policy == PagingPolicy::randomized_marking ? "randomized_marking" : "deterministic_marking";
}

Algorithm parse_algorithm(const std::string& name) {
  for (auto a : {Algorithm::rbma, Algorithm::dbma, Algorithm::so_bma, Algorithm::oblivious})
    if (name == to_string(a)) return a;
  throw Error(Errc::ConfigError, "unknown algorithm '" + name + "'");
}

RemovalMode parse_mode(const std::string& name) {
  if (name == "strict") return RemovalMode::strict;
  if (name == "lazy") return RemovalMode::lazy;
  throw Error(Errc::ConfigError, "unknown mode '" + name + "'");
}

PagingPolicy parse_policy(const std::string& name) {
  if (name == "randomized_marking" || name == "randomized") return PagingPolicy::randomized_marking;
  if (name == "deterministic_marking" || name == "deterministic") return PagingPolicy::deterministic_marking;
  throw Error(Errc::ConfigError, "unknown paging policy '" + name + "'");
}

void RunConfig::validate() const {
  if (a < 1 || a > b) throw Error(Errc::ConfigError, "need 1 <= a <= b");
  if (!(alpha >= 1) || !std::isfinite(alpha)) throw Error(Errc::ConfigError, "alpha must be a finite real >= 1");
  if (seeds.empty() && repetitions == 0) throw Error(Errc::ConfigError, "repetitions must be >= 1");
}

std::vector<std::uint64_t> RunConfig::effective_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out(repetitions);
  for (std::size_t i = 0; i < repetitions; ++i) out[i] = i;
  return out;
}

RunResult run(const RunConfig& config, const Topology& topo, const Trace& trace) {
  config.validate();
  if (trace.node_count > topo.node_count())
    throw Error(Errc::ConfigError, "trace has " + std::to_string(trace.node_count) + " nodes, topology " +
                                       std::to_string(topo.node_count()));
  for (const auto& r : trace.requests)
    if (r.hi >= topo.node_count()) throw Error(Errc::NodeOutOfRange, "request outside topology");

  RunResult result;
  result.config = config;
  result.notes = notes_for(config.algorithm);
  const auto seeds = config.effective_seeds();
  result.repetitions.resize(seeds.size());
  if (config.parallel && seeds.size() > 1) {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          result.repetitions[i] = execute_once(config, topo, trace, seeds[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t i = 0; i < seeds.size(); ++i) result.repetitions[i] = execute_once(config, topo, trace, seeds[i]);
  }
  result.mean = mean_of(result.repetitions);
  return result;
}

std::map<std::size_t, RunResult> sweep(const RunConfig& config, std::span<const std::size_t> b_values,
                                       const Topology& topo, const Trace& trace) {
  for (std::size_t b : b_values)
    if (b < config.a) throw Error(Errc::ConfigError, "sweep value b=" + std::to_string(b) + " below a");
  std::map<std::size_t, RunResult> out;
  for (std::size_t b : b_values) {
    RunConfig cfg = config;
    cfg.b = b;
    out.emplace(b, run(cfg, topo, trace));
  }
  return out;
}

void write_results_csv(std::ostream& out, std::span<const RunResult> results) {
  out << "algorithm,b,a,alpha,mode,seed,routing_cost,reconfig_cost,total_cost,insertions,removals,wall_time_s\n";
  auto row = [&](const RunResult& res, const std::string& seed, const RunRecord& rec) {
    const auto& c = res.config;
    out << to_string(c.algorithm) << ',' << c.b << ',' << c.a << ',' << fmt_double(c.alpha) << ','
        << to_string(c.mode) << ',' << seed << ',' << fmt_double(rec.routing_cost) << ','
        << fmt_double(rec.reconfig_cost) << ',' << fmt_double(rec.total_cost) << ',' << fmt_double(rec.insertions)
        << ',' << fmt_double(rec.removals) << ',' << fmt_double(rec.wall_time_s) << '\n';
  };
  for (const auto& res : results) {
    if (res.repetitions.empty()) continue;
    for (const auto& rec : res.repetitions) row(res, std::to_string(rec.seed), rec);
    row(res, "mean", res.mean);
  }
}

void write_results_csv(const std::string& path, std::span<const RunResult> results) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  write_results_csv(out, results);
  if (!out) throw Error(Errc::IoError, "write to '" + path + "' failed");
}

std::vector<RunResult> read_results_csv(std::istream& in) {
  std::vector<RunResult> results;
  std::string line;
  std::size_t line_no = 0;
  RunResult current;
  bool open = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line.rfind("algorithm,", 0) != 0) throw Error(Errc::MalformedLine, "missing results header");
      continue;
    }
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 12) throw Error(Errc::MalformedLine, "line " + std::to_string(line_no) + ": expected 12 fields");
    RunRecord rec;
    rec.routing_cost = parse_double(f[6], line_no);
    rec.reconfig_cost = parse_double(f[7], line_no);
    rec.total_cost = parse_double(f[8], line_no);
    rec.insertions = parse_double(f[9], line_no);
    rec.removals = parse_double(f[10], line_no);
    rec.wall_time_s = parse_double(f[11], line_no);
    if (!open) {
      current = RunResult{};
      current.config.algorithm = parse_algorithm(f[0]);
      current.config.b = static_cast<std::size_t>(parse_double(f[1], line_no));
      current.config.a = static_cast<std::size_t>(parse_double(f[2], line_no));
      current.config.alpha = parse_double(f[3], line_no);
      current.config.mode = parse_mode(f[4]);
      current.notes = notes_for(current.config.algorithm);
      open = true;
    }
    if (f[5] == "mean") {
      current.mean = rec;
      for (const auto& r : current.repetitions) current.config.seeds.push_back(r.seed);
      current.config.repetitions = current.repetitions.size();
      results.push_back(std::move(current));
      open = false;
    } else {
      rec.seed = parse_u64(f[5], "seed");
      current.repetitions.push_back(rec);
    }
  }
  if (open) throw Error(Errc::MalformedLine, "results file ends without a mean row");
  return results;
}

void write_metadata_json(std::ostream& out, std::span<const RunResult> results) {
  nlohmann::json doc;
  doc["version"] = kVersion;
  doc["runs"] = nlohmann::json::array();
  for (const auto& res : results) {
    const auto& c = res.config;
    nlohmann::json run = {
        {"algorithm", to_string(c.algorithm)},
        {"topology", c.topology_source},
        {"trace", c.trace_source},
        {"b", c.b},
        {"a", c.a},
        {"alpha", c.alpha},
        {"mode", to_string(c.mode)},
        {"policy", to_string(c.policy)},
        {"seeds", c.effective_seeds()},
        {"parallel", c.parallel},
    };
    if (!res.notes.empty()) run["notes"] = res.notes;
    doc["runs"].push_back(std::move(run));
  }
  out << doc.dump(2) << '\n';
}

OracleReport oracle_check(const Topology& topo, const Trace& trace, std::size_t b, std::size_t a, double alpha,
                          std::size_t trials, RemovalMode mode, PagingPolicy policy) {
  if (trials == 0) throw Error(Errc::ConfigError, "oracle needs at least one trial");
  if (a < 1 || a > b) throw Error(Errc::ConfigError, "need 1 <= a <= b");
  OracleReport rep;
  rep.opt = brute_force_opt(topo, trace, a, alpha);
  rep.trials = trials;
  double sum = 0;
  for (std::uint64_t seed = 0; seed < trials; ++seed)
    sum += run_algorithm(topo, trace, b, alpha, policy, mode, seed).ledger.total();
  rep.mean_total = sum / static_cast<double>(trials);
  const double n = static_cast<double>(topo.node_count());
  rep.gamma = 1.0 + static_cast<double>(topo.ell_max()) / alpha;
  rep.beta_allowance = rep.gamma * alpha * n * n;
  rep.ratio = rep.opt > 0 ? (rep.mean_total - rep.beta_allowance) / rep.opt : 0.0;
  rep.low_confidence = trials < 2;
  return rep;
}

Topology load_topology(const std::string& source) {
  auto colon = source.find(':');
  if (colon != std::string::npos) {
    const std::string kind = source.substr(0, colon);
    if (kind == "star" || kind == "leaf_spine" || kind == "fat_tree") {
      auto args = split(source.substr(colon + 1), ',');
      TopologyParams p;
      p.kind = parse_topology_kind(kind);
      if (p.kind == TopologyKind::leaf_spine) {
        if (args.size() != 2) throw Error(Errc::ConfigError, "leaf_spine expects 'leaf_spine:L,S'");
        p.leaves = parse_u64(args[0], "leaf count");
        p.spines = parse_u64(args[1], "spine count");
      } else {
        if (args.size() != 1) throw Error(Errc::ConfigError, kind + " expects one parameter");
        (p.kind == TopologyKind::star ? p.n : p.k) = parse_u64(args[0], kind + " parameter");
      }
      return generate(p);
    }
  }
  std::ifstream in(source);
  if (!in) throw Error(Errc::IoError, "cannot open topology '" + source + "'");
  return read_edge_list(in);
}

Trace load_trace(const std::string& source, std::size_t node_count) {
  auto colon = source.find(':');
  if (colon != std::string::npos) {
    const std::string kind = source.substr(0, colon);
    auto args = split(source.substr(colon + 1), ',');
    if (kind == "zipf") {
      if (args.size() != 3) throw Error(Errc::ConfigError, "zipf expects 'zipf:EXP,COUNT,SEED'");
      double exponent = 0;
      auto [ptr, ec] = std::from_chars(args[0].data(), args[0].data() + args[0].size(), exponent);
      if (ec != std::errc() || ptr != args[0].data() + args[0].size())
        throw Error(Errc::ConfigError, "bad zipf exponent '" + args[0] + "'");
      return zipf_trace(node_count, exponent, parse_u64(args[1], "count"), parse_u64(args[2], "seed"));
    }
    if (kind == "matrix") {
      if (args.size() != 3) throw Error(Errc::ConfigError, "matrix expects 'matrix:PATH,COUNT,SEED'");
      std::ifstream in(args[0]);
      if (!in) throw Error(Errc::IoError, "cannot open matrix '" + args[0] + "'");
      auto m = read_weight_matrix(in);
      if (m.n > node_count) throw Error(Errc::ConfigError, "matrix larger than topology");
      auto trace = sample_from_matrix(m, parse_u64(args[1], "count"), parse_u64(args[2], "seed"));
      trace.node_count = node_count;
      return trace;
    }
  }
  std::ifstream in(source);
  if (!in) throw Error(Errc::IoError, "cannot open trace '" + source + "'");
  return parse_trace(in, node_count).trace;
}

}  // namespace rbma
