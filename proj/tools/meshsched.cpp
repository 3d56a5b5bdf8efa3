#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "meshsched/conflict.hpp"
#include "meshsched/errors.hpp"
#include "meshsched/harness.hpp"
#include "meshsched/metrics.hpp"
#include "meshsched/oracle.hpp"
#include "meshsched/routing.hpp"
#include "meshsched/ser.hpp"
#include "meshsched/sera.hpp"
#include "meshsched/serialize.hpp"
#include "meshsched/topology.hpp"

namespace {

using namespace meshsched;
using nlohmann::json;

int cmd_gen(int n, int delta, uint64_t seed, const std::string& out) {
  MeshNetwork net = generate_network(n, delta, seed);
  save_json_file(out, network_to_json(net));
  std::cout << "network: n=" << n << " delta=" << delta << " radius=" << net.radius
            << " -> " << out << "\n";
  return 0;
}

int cmd_paths(const std::string& net_file, int groups, uint64_t seed,
              const std::string& out) {
  MeshNetwork net = network_from_json(load_json_file(net_file));
  auto gs = generate_path_groups(net, groups, seed);
  json jg = json::array();
  for (const auto& g : gs) jg.push_back(group_to_json(g));
  save_json_file(out, json{{"kind", "path-group-file"},
                           {"n", net.n()},
                           {"delta", net.delta_max},
                           {"network_id", 0},
                           {"groups", std::move(jg)}});
  std::cout << "groups: " << gs.size() << " x " << net.n() / 2 << " paths -> " << out
            << "\n";
  return 0;
}

int cmd_build(const std::string& net_file, const std::string& paths_file, int group,
              int path_count, const std::string& out) {
  MeshNetwork net = network_from_json(load_json_file(net_file));
  json j = load_json_file(paths_file);
  const auto& jgroups = j.at("groups");
  if (group < 0 || group >= (int)jgroups.size())
    throw Error(errc::bad_input, "group index out of range");
  PathGroup pg = group_from_json(jgroups[group]);
  if (path_count <= 0) path_count = pg.max_sets();
  if (path_count > pg.max_sets())
    throw Error(errc::bad_input, "group holds only " +
                                     std::to_string(pg.max_sets()) + " paths");
  PathSet ps = pg.prefix(path_count);
  Multigraph d = build_multigraph(net, ps);
  ConflictGraph g = build_conflict_graph(net, d);
  save_json_file(out, graph_to_json(g));
  std::cout << "graph: N=" << g.node_count() << " E=" << g.edge_count()
            << " P=" << g.path_count << " rho=" << rho(g).to_decimal(6) << " -> "
            << out << "\n";
  return 0;
}

void write_run_csv(std::ostream& out, const std::string& alg, const std::string& scheme,
                   const std::string& mode, const ConflictGraph& g, const Rational& t,
                   long long period, long long delivered, long long iterations,
                   const std::vector<long long>& terminal_m, int buffers) {
  out << "alg,scheme,mode,N,P,B,T,p,delivered,iterations,m_i\n";
  out << alg << ',' << scheme << ',' << mode << ',' << g.node_count() << ','
      << g.path_count << ',';
  if (buffers > 0) out << buffers;
  out << ',' << t.to_decimal(9) << ',';
  if (period > 0) out << period;
  out << ',';
  if (period > 0) out << delivered;
  out << ',' << iterations << ',';
  if (!terminal_m.empty()) {
    out << '"' << json(terminal_m).dump() << '"';
  }
  out << '\n';
}

int cmd_run(const std::string& graph_file, const std::string& alg,
            const std::string& numbering, int buffers, const std::string& mode,
            long long max_iters, long long t_max, const std::string& tol_text,
            const std::string& out_file) {
  ConflictGraph g = graph_from_json(load_json_file(graph_file));
  NumberingScheme scheme = scheme_from_name(numbering);
  Rational tol = parse_decimal(tol_text);

  Rational t;
  long long period = 0, delivered = 0, iterations = 0;
  std::vector<long long> terminal_m;
  if (mode == "period") {
    if (alg == "ser") {
      SerResult r = run_ser(g, scheme, max_iters);
      t = r.throughput;
      period = r.period.p;
      delivered = (long long)g.path_count * r.m;
      iterations = r.iterations;
      for (int v : g.terminals) terminal_m.push_back(r.period.sink_counts[v]);
    } else if (alg == "sera") {
      SeraReport r = run_sera(g, path_set_of(g), scheme, buffers, max_iters);
      t = r.throughput;
      period = r.p;
      delivered = r.delivered;
      iterations = r.iterations;
      for (int v : g.terminals) terminal_m.push_back(r.sink_counts[v]);
    } else {
      throw Error(errc::bad_input, "unknown alg: " + alg);
    }
  } else if (mode == "estimate") {
    auto estimate = [&](auto& dyn) {
      auto next = [&dyn] {
        long long c = dyn.terminal_sink_count();
        dyn.step();
        return c;
      };
      EstimatorResult r = streaming_estimator(next, g.node_count(), tol, t_max);
      t = r.estimate;
      iterations = r.t_plus + 1;
    };
    if (alg == "ser") {
      SerDynamics dyn(g, initial_orientation(g, scheme));
      estimate(dyn);
    } else if (alg == "sera") {
      SeraDynamics dyn(g, initial_orientation(g, scheme), buffers);
      estimate(dyn);
    } else {
      throw Error(errc::bad_input, "unknown alg: " + alg);
    }
  } else {
    throw Error(errc::bad_input, "mode must be period or estimate");
  }

  int b_col = alg == "sera" ? buffers : 0;
  if (out_file.empty()) {
    write_run_csv(std::cout, alg, numbering, mode, g, t, period, delivered,
                  iterations, terminal_m, b_col);
  } else {
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw Error(errc::bad_input, "cannot write " + out_file);
    write_run_csv(out, alg, numbering, mode, g, t, period, delivered, iterations,
                  terminal_m, b_col);
    std::cout << "T=" << t.to_string() << " (" << t.to_decimal(6) << ") -> "
              << out_file << "\n";
  }
  return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (quoted) {
      if (c == '"')
        quoted = false;
      else
        cur.push_back(c);
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

int cmd_stats(const std::string& in_file, const std::string& group_by, double level,
              const std::string& out_file) {
  std::ifstream in(in_file);
  if (!in) throw Error(errc::bad_input, "cannot open " + in_file);
  std::string line;
  if (!std::getline(in, line)) throw Error(errc::bad_input, "empty results file");
  auto header = split_csv_line(line);
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

  std::vector<std::string> keys;
  {
    std::stringstream ss(group_by);
    std::string k;
    while (std::getline(ss, k, ','))
      if (!k.empty()) {
        if (!col.count(k)) throw Error(errc::bad_input, "no such column: " + k);
        keys.push_back(k);
      }
  }
  if (keys.empty()) throw Error(errc::bad_input, "empty group-by list");

  size_t c_status = col.at("status"), c_t = col.at("T"), c_rho = col.at("rho");
  size_t c_net = col.at("network_id"), c_grp = col.at("group_id"), c_p = col.at("P");
  size_t c_n = col.at("n"), c_d = col.at("delta");

  struct Bucket {
    std::vector<double> t;
    std::vector<double> rho;
    std::set<std::string> rho_seen;  // one rho sample per instance
  };
  std::map<std::string, Bucket> buckets;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw Error(errc::bad_input, "ragged csv row");
    if (cells[c_status] != "ok") continue;
    std::string key;
    for (const auto& k : keys) key += cells[col[k]] + ",";
    Bucket& b = buckets[key];
    if (!cells[c_t].empty()) b.t.push_back(std::stod(cells[c_t]));
    if (!cells[c_rho].empty()) {
      std::string inst = cells[c_n] + "|" + cells[c_d] + "|" + cells[c_net] + "|" +
                         cells[c_grp] + "|" + cells[c_p];
      if (b.rho_seen.insert(inst).second) b.rho.push_back(std::stod(cells[c_rho]));
    }
  }

  std::ostream* out = &std::cout;
  std::ofstream f;
  if (!out_file.empty()) {
    f.open(out_file, std::ios::binary);
    if (!f) throw Error(errc::bad_input, "cannot write " + out_file);
    out = &f;
  }
  for (const auto& k : keys) *out << k << ',';
  *out << "count,mean_T,ci_T,count_rho,mean_rho,ci_rho\n";
  for (const auto& [key, b] : buckets) {
    *out << key << b.t.size() << ',';
    if (b.t.size() >= 2) {
      Summary s = summarize(b.t, level);
      *out << s.mean << ',' << s.half_width;
    } else {
      *out << ',';
    }
    *out << ',' << b.rho.size() << ',';
    if (b.rho.size() >= 2) {
      Summary s = summarize(b.rho, level);
      *out << s.mean << ',' << s.half_width;
    } else {
      *out << ',';
    }
    *out << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& cfg_file, const std::string& out_dir_override,
              int threads_override) {
  SweepConfig cfg = config_from_json(load_json_file(cfg_file));
  if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
  if (threads_override > 0) cfg.threads = threads_override;
  std::filesystem::create_directories(cfg.out_dir);

  SweepResult res = run_sweep(cfg);
  write_results_csv(cfg.out_dir + "/results.csv", res.rows);
  write_timings_csv(cfg.out_dir + "/timings.csv", res.rows);
  if (cfg.save_artifacts) emit_distributions(cfg.out_dir);

  long long failed = 0;
  for (const auto& r : res.rows)
    if (r.status != "ok") ++failed;
  std::cout << "rows: " << res.rows.size() << " (" << failed << " censored) -> "
            << cfg.out_dir << "/results.csv\n";
  return 0;
}

int cmd_oracle(const std::string& graph_file, int l_max, int buffers) {
  ConflictGraph g = graph_from_json(load_json_file(graph_file));
  TinyInstance inst{g, path_set_of(g), buffers};
  BruteForceResult r = brute_force_best_schedule(inst, l_max);
  std::cout << "best T = " << r.best.to_string() << " (" << r.best.to_decimal(6)
            << ") over " << r.schedule.length() << " slots\n";
  for (int s = 0; s < r.schedule.length(); ++s) {
    std::cout << "  slot " << s << ":";
    for (int v : r.schedule.slots[s]) std::cout << ' ' << v;
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wireless mesh link-scheduling experiments"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a random mesh network");
  int gen_n = 80, gen_delta = 4;
  uint64_t gen_seed = 1;
  std::string gen_out = "network.json";
  gen->add_option("--n", gen_n, "number of nodes")->check(CLI::PositiveNumber);
  gen->add_option("--delta", gen_delta, "degree cap")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output file");

  auto* paths = app.add_subcommand("paths", "draw nested path groups on a network");
  std::string paths_net = "network.json", paths_out = "paths.json";
  int paths_groups = 1;
  uint64_t paths_seed = 1;
  paths->add_option("--network", paths_net, "network file")->required();
  paths->add_option("--groups", paths_groups, "number of groups")
      ->check(CLI::PositiveNumber);
  paths->add_option("--seed", paths_seed, "random seed");
  paths->add_option("--out", paths_out, "output file");

  auto* build = app.add_subcommand("build", "build the conflict graph of a path set");
  std::string build_net, build_paths, build_out = "graph.json";
  int build_group = 0, build_p = 0;
  build->add_option("--network", build_net, "network file")->required();
  build->add_option("--paths", build_paths, "path groups file")->required();
  build->add_option("--group", build_group, "group index");
  build->add_option("--P", build_p, "paths to take from the group (0 = all)");
  build->add_option("--out", build_out, "output file");

  auto* run = app.add_subcommand("run", "run a scheduling engine on a graph");
  std::string run_graph, run_alg = "ser", run_numbering = "nd-bf";
  std::string run_mode = "period", run_tol = "0.001", run_out;
  int run_buffers = 1;
  long long run_max_iters = 1'000'000, run_t_max = 1'000'000;
  run->add_option("--graph", run_graph, "conflict graph file")->required();
  run->add_option("--alg", run_alg, "ser or sera");
  run->add_option("--numbering", run_numbering, "nd-bf, nd-df, ni-bf or ni-df");
  run->add_option("--buffers", run_buffers, "per-hop buffer capacity (sera)")
      ->check(CLI::PositiveNumber);
  run->add_option("--mode", run_mode, "period or estimate");
  run->add_option("--max-iters", run_max_iters, "period-detection cap");
  run->add_option("--t-max", run_t_max, "estimator slot cap");
  run->add_option("--tol", run_tol, "estimator relative tolerance");
  run->add_option("--out", run_out, "output CSV (default stdout)");

  auto* stats = app.add_subcommand("stats", "summarize a results table");
  std::string stats_in, stats_group = "n,delta,P", stats_out;
  double stats_level = 0.95;
  stats->add_option("--in", stats_in, "results.csv")->required();
  stats->add_option("--group-by", stats_group, "comma-separated key columns");
  stats->add_option("--level", stats_level, "confidence level");
  stats->add_option("--out", stats_out, "output CSV (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "run a full experimental sweep");
  std::string sweep_cfg, sweep_out_dir;
  int sweep_threads = 0;
  sweep->add_option("--config", sweep_cfg, "sweep config JSON")->required();
  sweep->add_option("--out-dir", sweep_out_dir, "override the config output dir");
  sweep->add_option("--threads", sweep_threads, "override the config worker count");

  auto* oracle = app.add_subcommand("oracle", "exhaustive best schedule (tiny graphs)");
  std::string oracle_graph;
  int oracle_lmax = 6, oracle_buffers = 1;
  oracle->add_option("--graph", oracle_graph, "conflict graph file")->required();
  oracle->add_option("--lmax", oracle_lmax, "max schedule length");
  oracle->add_option("--buffers", oracle_buffers, "buffer capacity");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_n, gen_delta, gen_seed, gen_out);
    if (paths->parsed()) return cmd_paths(paths_net, paths_groups, paths_seed, paths_out);
    if (build->parsed())
      return cmd_build(build_net, build_paths, build_group, build_p, build_out);
    if (run->parsed())
      return cmd_run(run_graph, run_alg, run_numbering, run_buffers, run_mode,
                     run_max_iters, run_t_max, run_tol, run_out);
    if (stats->parsed()) return cmd_stats(stats_in, stats_group, stats_level, stats_out);
    if (sweep->parsed()) return cmd_sweep(sweep_cfg, sweep_out_dir, sweep_threads);
    if (oracle->parsed()) return cmd_oracle(oracle_graph, oracle_lmax, oracle_buffers);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
