// rbma: command-line front end for the b-matching simulator.
//
//   rbma simulate --topology=fat_tree:4 --trace=zipf:1.2,100000,1 --algo=rbma --b=6 --alpha=10
//   rbma sweep    --topology=leaf_spine:50,4 --trace=trace.txt --algo=dbma --b-values=6,18
//   rbma gen-topology --kind=fat_tree --k=4 --out=ft4.txt
//   rbma gen-trace --kind=zipf --nodes=16 --exponent=1.2 --count=1000 --seed=3 --out=t.txt
//   rbma oracle   --topology=star:3 --trace=t.txt --b=2 --a=2 --alpha=2 --trials=200

#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbma/baselines.hpp"
#include "rbma/harness.hpp"

using namespace rbma;

namespace {

struct RunFlags {
  std::string topology;
  std::string trace;
  std::string algo = "rbma";
  std::size_t b = 1;
  std::size_t a = 0;  // 0: same as b
  double alpha = 1.0;
  std::string mode = "lazy";
  std::string policy = "randomized_marking";
  std::vector<std::uint64_t> seeds;
  std::size_t repetitions = 5;
  std::string parallel = "off";
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--topology", f.topology, "edge-list path or star:N | leaf_spine:L,S | fat_tree:K")->required();
  cmd->add_option("--trace", f.trace, "trace path or zipf:EXP,COUNT,SEED | matrix:PATH,COUNT,SEED")->required();
  cmd->add_option("--algo", f.algo, "rbma | dbma | so_bma | oblivious");
  cmd->add_option("--b", f.b, "degree bound of the online algorithm");
  cmd->add_option("--a", f.a, "degree bound of the offline adversary (default b)");
  cmd->add_option("--alpha", f.alpha, "reconfiguration cost per edge change");
  cmd->add_option("--mode", f.mode, "strict | lazy");
  cmd->add_option("--policy", f.policy, "randomized_marking | deterministic_marking");
  cmd->add_option("--seeds", f.seeds, "comma-separated seed list")->delimiter(',');
  cmd->add_option("--repetitions", f.repetitions, "repetitions when --seeds is omitted");
  cmd->add_option("--parallel", f.parallel, "on | off")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--out", f.out, "results CSV (stdout when omitted)");
}

RunConfig to_config(const RunFlags& f) {
  RunConfig c;
  c.topology_source = f.topology;
  c.trace_source = f.trace;
  c.algorithm = parse_algorithm(f.algo);
  c.b = f.b;
  c.a = f.a == 0 ? f.b : f.a;
  c.alpha = f.alpha;
  c.mode = parse_mode(f.mode);
  c.policy = parse_policy(f.policy);
  c.seeds = f.seeds;
  c.repetitions = f.repetitions;
  c.parallel = f.parallel == "on";
  return c;
}

void emit(const std::vector<RunResult>& results, const std::string& out) {
  if (out.empty()) {
    write_results_csv(std::cout, results);
    return;
  }
  write_results_csv(out, results);
  std::ofstream meta(out + ".meta.json");
  if (!meta) throw Error(Errc::IoError, "cannot write metadata next to '" + out + "'");
  write_metadata_json(meta, results);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online (b,a)-matching simulator for reconfigurable datacenter networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunFlags sim;
  auto* simulate = app.add_subcommand("simulate", "run one algorithm over a trace");
  add_run_flags(simulate, sim);

  RunFlags sw;
  std::vector<std::size_t> b_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "run one algorithm for several b values");
  add_run_flags(sweep_cmd, sw);
  sweep_cmd->add_option("--b-values", b_values, "comma-separated b values")->delimiter(',')->required();

  std::string topo_kind, topo_out;
  std::size_t star_n = 0, leaves = 0, spines = 0, arity = 0;
  auto* gen_topo = app.add_subcommand("gen-topology", "write a generated topology as an edge list");
  gen_topo->add_option("--kind", topo_kind, "star | leaf_spine | fat_tree")->required();
  gen_topo->add_option("--n", star_n, "star leaves");
  gen_topo->add_option("--leaves", leaves, "leaf_spine leaves");
  gen_topo->add_option("--spines", spines, "leaf_spine spines");
  gen_topo->add_option("--k", arity, "fat_tree arity");
  gen_topo->add_option("--out", topo_out, "output path")->required();

  std::string trace_kind, trace_out, matrix_path, star_topo_out;
  std::uint64_t trace_seed = 0;
  std::size_t count = 0, nodes = 0, items = 0, adv_b = 1, adv_a = 0;
  double exponent = 1.0, adv_alpha = 1.0;
  auto* gen_trace = app.add_subcommand("gen-trace", "write a synthetic trace");
  gen_trace->add_option("--kind", trace_kind, "matrix | zipf | star-adversary")
      ->required()
      ->check(CLI::IsMember({"matrix", "zipf", "star-adversary"}));
  gen_trace->add_option("--seed", trace_seed, "generator seed");
  gen_trace->add_option("--count", count, "requests (paging requests for star-adversary)")->required();
  gen_trace->add_option("--out", trace_out, "output path")->required();
  gen_trace->add_option("--matrix", matrix_path, "n x n whitespace-separated weight matrix");
  gen_trace->add_option("--nodes", nodes, "zipf node count");
  gen_trace->add_option("--exponent", exponent, "zipf exponent");
  gen_trace->add_option("--items", items, "star-adversary item count");
  gen_trace->add_option("--b", adv_b, "star-adversary online cache size");
  gen_trace->add_option("--a", adv_a, "star-adversary offline cache size (default b)");
  gen_trace->add_option("--alpha", adv_alpha, "star-adversary block length");
  gen_trace->add_option("--topology-out", star_topo_out, "also write the star topology here");

  std::string o_topology, o_trace, o_mode = "strict";
  std::size_t o_b = 1, o_a = 0, trials = 100;
  double o_alpha = 1.0;
  auto* oracle_cmd = app.add_subcommand("oracle", "compare R-BMA with the exact offline optimum");
  oracle_cmd->add_option("--topology", o_topology, "topology source")->required();
  oracle_cmd->add_option("--trace", o_trace, "trace source")->required();
  oracle_cmd->add_option("--b", o_b, "online degree bound");
  oracle_cmd->add_option("--a", o_a, "offline degree bound (default b)");
  oracle_cmd->add_option("--alpha", o_alpha, "reconfiguration cost");
  oracle_cmd->add_option("--mode", o_mode, "strict | lazy");
  oracle_cmd->add_option("--trials", trials, "number of seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: ConfigError: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*simulate) {
      auto topo = load_topology(sim.topology);
      auto trace = load_trace(sim.trace, topo.node_count());
      emit({run(to_config(sim), topo, trace)}, sim.out);
    } else if (*sweep_cmd) {
      auto topo = load_topology(sw.topology);
      auto trace = load_trace(sw.trace, topo.node_count());
      auto cfg = to_config(sw);
      if (sw.a == 0) cfg.a = 1;
      std::vector<RunResult> results;
      for (auto& [b, res] : sweep(cfg, b_values, topo, trace)) results.push_back(std::move(res));
      emit(results, sw.out);
    } else if (*gen_topo) {
      TopologyParams p{parse_topology_kind(topo_kind), star_n, leaves, spines, arity};
      auto out = open_out(topo_out);
      write_edge_list(out, generate(p));
    } else if (*gen_trace) {
      Trace trace;
      if (trace_kind == "zipf") {
        trace = zipf_trace(nodes, exponent, count, trace_seed);
      } else if (trace_kind == "matrix") {
        std::ifstream in(matrix_path);
        if (!in) throw Error(Errc::IoError, "cannot open matrix '" + matrix_path + "'");
        trace = sample_from_matrix(read_weight_matrix(in), count, trace_seed);
      } else {
        if (items == 0) throw Error(Errc::ConfigError, "star-adversary needs --items");
        std::mt19937_64 rng(trace_seed);
        std::uniform_int_distribution<std::uint32_t> pick(1, static_cast<std::uint32_t>(items));
        std::vector<std::uint32_t> paging(count);
        for (auto& x : paging) x = pick(rng);
        auto inst = adversarial_star_instance(items, adv_b, adv_a == 0 ? adv_b : adv_a, adv_alpha, paging);
        if (!star_topo_out.empty()) {
          auto tout = open_out(star_topo_out);
          write_edge_list(tout, inst.topology);
        }
        trace = std::move(inst.trace);
      }
      auto out = open_out(trace_out);
      write_trace(out, trace);
    } else if (*oracle_cmd) {
      auto topo = load_topology(o_topology);
      auto trace = load_trace(o_trace, topo.node_count());
      auto rep = oracle_check(topo, trace, o_b, o_a == 0 ? o_b : o_a, o_alpha, trials, parse_mode(o_mode));
      nlohmann::json doc = {{"trials", rep.trials},
                            {"mean_total", rep.mean_total},
                            {"opt", rep.opt},
                            {"gamma", rep.gamma},
                            {"beta_allowance", rep.beta_allowance},
                            {"ratio", rep.ratio},
                            {"low_confidence", rep.low_confidence}};
      std::cout << doc.dump() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
