#include "meshsched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "meshsched/conflict.hpp"
#include "meshsched/errors.hpp"
#include "meshsched/metrics.hpp"
#include "meshsched/rng.hpp"
#include "meshsched/routing.hpp"
#include "meshsched/ser.hpp"
#include "meshsched/sera.hpp"
#include "meshsched/serialize.hpp"
#include "meshsched/topology.hpp"

namespace meshsched {

namespace fs = std::filesystem;
using nlohmann::json;

SweepConfig SweepConfig::paper_preset() {
  SweepConfig c;
  c.n_values = {60, 80, 100, 120};
  c.delta_values = {4, 8, 16, 32};
  c.networks_per_cell = 100;
  c.groups_per_network = 100;
  c.schemes = {NumberingScheme::nd_bf, NumberingScheme::nd_df};
  c.algs = {"ser", "sera"};
  c.b_values = {1};
  c.threads = 8;
  return c;
}

SweepConfig SweepConfig::desk_preset() {
  SweepConfig c;
  c.n_values = {60};
  c.delta_values = {4, 8, 32};
  c.networks_per_cell = 20;
  c.groups_per_network = 20;
  c.schemes = {NumberingScheme::nd_bf};
  c.algs = {"ser", "sera"};
  c.b_values = {1};
  c.mode = "period";  // exact throughputs; estimation is for larger grids
  c.p_values = {3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  c.threads = 8;
  return c;
}

json config_to_json(const SweepConfig& c) {
  json j;
  j["n_values"] = c.n_values;
  j["delta_values"] = c.delta_values;
  j["networks_per_cell"] = c.networks_per_cell;
  j["groups_per_network"] = c.groups_per_network;
  json schemes = json::array();
  for (auto s : c.schemes) schemes.push_back(scheme_name(s));
  j["schemes"] = std::move(schemes);
  j["algs"] = c.algs;
  j["b_values"] = c.b_values;
  j["mode"] = c.mode;
  j["seed"] = c.seed;
  j["max_iters"] = c.max_iters;
  j["t_max"] = c.t_max;
  j["tol"] = c.tol.to_string();
  j["p_values"] = c.p_values;
  j["out_dir"] = c.out_dir;
  j["threads"] = c.threads;
  j["save_artifacts"] = c.save_artifacts;
  return j;
}

SweepConfig config_from_json(const json& j) {
  try {
    SweepConfig c;
    if (auto it = j.find("preset"); it != j.end()) {
      std::string p = it->get<std::string>();
      if (p == "paper")
        c = SweepConfig::paper_preset();
      else if (p == "desk")
        c = SweepConfig::desk_preset();
      else
        throw Error(errc::bad_input, "unknown preset: " + p);
    }
    if (j.contains("n_values")) c.n_values = j["n_values"].get<std::vector<int>>();
    if (j.contains("delta_values"))
      c.delta_values = j["delta_values"].get<std::vector<int>>();
    if (j.contains("networks_per_cell"))
      c.networks_per_cell = j["networks_per_cell"].get<int>();
    if (j.contains("groups_per_network"))
      c.groups_per_network = j["groups_per_network"].get<int>();
    if (j.contains("schemes")) {
      c.schemes.clear();
      for (const auto& s : j["schemes"])
        c.schemes.push_back(scheme_from_name(s.get<std::string>()));
    }
    if (j.contains("algs")) c.algs = j["algs"].get<std::vector<std::string>>();
    if (j.contains("b_values")) c.b_values = j["b_values"].get<std::vector<int>>();
    if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
    if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<long long>();
    if (j.contains("t_max")) c.t_max = j["t_max"].get<long long>();
    if (j.contains("tol")) {
      const auto& t = j["tol"];
      std::string s = t.is_string() ? t.get<std::string>() : t.dump();
      // Accept both the decimal form users write and the num/den form
      // config_to_json emits.
      if (auto slash = s.find('/'); slash != std::string::npos)
        c.tol = Rational(std::stoll(s.substr(0, slash)),
                         std::stoll(s.substr(slash + 1)));
      else
        c.tol = parse_decimal(s);
    }
    if (j.contains("p_values")) c.p_values = j["p_values"].get<std::vector<int>>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("save_artifacts")) c.save_artifacts = j["save_artifacts"].get<bool>();

    if (c.mode != "estimate" && c.mode != "period")
      throw Error(errc::bad_input, "mode must be estimate or period");
    for (const auto& a : c.algs)
      if (a != "ser" && a != "sera") throw Error(errc::bad_input, "unknown alg: " + a);
    if (c.networks_per_cell < 1 || c.groups_per_network < 1 || c.threads < 1)
      throw Error(errc::bad_input, "counts must be >= 1");
    return c;
  } catch (const json::exception& e) {
    throw Error(errc::bad_input, std::string("sweep config: ") + e.what());
  }
}

namespace {

std::vector<int> p_list(const SweepConfig& cfg, int n) {
  std::vector<int> ps;
  if (cfg.p_values.empty()) {
    for (int p = 1; p <= n / 2; ++p) ps.push_back(p);
  } else {
    for (int p : cfg.p_values)
      if (p >= 1 && p <= n / 2) ps.push_back(p);
  }
  return ps;
}

long long run_engine(const SweepConfig& cfg, const ConflictGraph& g, const PathSet& ps,
                     NumberingScheme scheme, int b, ResultRow& row) {
  // Returns slots consumed; fills throughput and period fields.
  if (cfg.mode == "period") {
    if (row.alg == "ser") {
      SerResult r = run_ser(g, scheme, cfg.max_iters);
      row.throughput = r.throughput;
      row.period = r.period.p;
      row.delivered = (long long)g.path_count * r.m;
      return r.iterations;
    }
    SeraReport r = run_sera(g, ps, scheme, b, cfg.max_iters);
    row.throughput = r.throughput;
    row.period = r.p;
    row.delivered = r.delivered;
    return r.iterations;
  }
  long long w = g.node_count();
  if (row.alg == "ser") {
    SerDynamics dyn(g, initial_orientation(g, scheme));
    auto next = [&dyn] {
      long long c = dyn.terminal_sink_count();
      dyn.step();
      return c;
    };
    EstimatorResult r = streaming_estimator(next, w, cfg.tol, cfg.t_max);
    row.throughput = r.estimate;
    return r.t_plus + 1;
  }
  SeraDynamics dyn(g, initial_orientation(g, scheme), b);
  auto next = [&dyn] {
    long long c = dyn.terminal_sink_count();
    dyn.step();
    return c;
  };
  EstimatorResult r = streaming_estimator(next, w, cfg.tol, cfg.t_max);
  row.throughput = r.estimate;
  return r.t_plus + 1;
}

struct Job {
  int n, delta, network_id;
};

void run_job(const SweepConfig& cfg, const Job& job, std::vector<ResultRow>& out) {
  ResultRow base;
  base.n = job.n;
  base.delta = job.delta;
  base.network_id = job.network_id;

  MeshNetwork net;
  std::vector<PathGroup> groups;
  try {
    net = generate_network(job.n, job.delta,
                           derive_seed(cfg.seed, {1, (uint64_t)job.n, (uint64_t)job.delta,
                                                  (uint64_t)job.network_id}));
    groups = generate_path_groups(net, cfg.groups_per_network,
                                  derive_seed(cfg.seed, {2, (uint64_t)job.n,
                                                         (uint64_t)job.delta,
                                                         (uint64_t)job.network_id}));
  } catch (const Error& e) {
    ResultRow row = base;
    row.group_id = -1;
    row.alg = "none";
    row.status = errc_name(e.code());
    out.push_back(std::move(row));
    return;
  }

  if (cfg.save_artifacts) {
    std::string tag = "n" + std::to_string(job.n) + "-d" + std::to_string(job.delta) +
                      "-i" + std::to_string(job.network_id);
    save_json_file(cfg.out_dir + "/networks/" + tag + ".json", network_to_json(net));
    json jg = json::array();
    for (const auto& g : groups) jg.push_back(group_to_json(g));
    save_json_file(cfg.out_dir + "/paths/" + tag + ".json",
                   json{{"kind", "path-group-file"},
                        {"n", job.n},
                        {"delta", job.delta},
                        {"network_id", job.network_id},
                        {"groups", std::move(jg)}});
  }

  for (int gid = 0; gid < (int)groups.size(); ++gid) {
    for (int P : p_list(cfg, job.n)) {
      PathSet ps = groups[gid].prefix(P);
      ResultRow inst = base;
      inst.group_id = gid;
      inst.path_count = P;

      ConflictGraph g;
      auto built_at = std::chrono::steady_clock::now();
      try {
        Multigraph d = build_multigraph(net, ps);
        g = build_conflict_graph(net, d);
      } catch (const Error& e) {
        inst.alg = "none";
        inst.status = errc_name(e.code());
        out.push_back(std::move(inst));
        continue;
      }
      inst.has_graph = true;
      inst.rho = rho(g);

      if (cfg.algs.empty()) {
        ResultRow row = inst;
        row.alg = "none";
        row.status = "ok";
        row.wall_micros = std::chrono::duration_cast<std::chrono::microseconds>(
                              std::chrono::steady_clock::now() - built_at)
                              .count();
        out.push_back(std::move(row));
        continue;
      }
      for (const auto& alg : cfg.algs) {
        for (auto scheme : cfg.schemes) {
          std::vector<int> bs = alg == "sera" ? cfg.b_values : std::vector<int>{0};
          for (int b : bs) {
            ResultRow row = inst;
            row.alg = alg;
            row.scheme = scheme_name(scheme);
            row.buffer_capacity = b;
            auto start = std::chrono::steady_clock::now();
            try {
              row.iterations = run_engine(cfg, g, ps, scheme, b, row);
              row.status = "ok";
            } catch (const Error& e) {
              row.status = errc_name(e.code());
            }
            row.wall_micros = std::chrono::duration_cast<std::chrono::microseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            out.push_back(std::move(row));
          }
        }
      }
    }
  }
}

bool row_key_less(const ResultRow& a, const ResultRow& b) {
  auto key = [](const ResultRow& r) {
    return std::tuple(r.n, r.delta, r.network_id, r.group_id, r.path_count, r.alg,
                      r.scheme, r.buffer_capacity);
  };
  return key(a) < key(b);
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.save_artifacts) {
    fs::create_directories(cfg.out_dir + "/networks");
    fs::create_directories(cfg.out_dir + "/paths");
  }
  std::vector<Job> jobs;
  for (int n : cfg.n_values)
    for (int delta : cfg.delta_values)
      for (int i = 0; i < cfg.networks_per_cell; ++i) jobs.push_back({n, delta, i});

  SweepResult result;
  std::atomic<size_t> cursor{0};
  std::mutex sink;
  std::exception_ptr failure;

  auto worker = [&] {
    std::vector<ResultRow> local;
    try {
      for (;;) {
        size_t k = cursor.fetch_add(1);
        if (k >= jobs.size()) break;
        run_job(cfg, jobs[k], local);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(sink);
      if (!failure) failure = std::current_exception();
      return;
    }
    std::lock_guard<std::mutex> lock(sink);
    result.rows.insert(result.rows.end(), std::make_move_iterator(local.begin()),
                       std::make_move_iterator(local.end()));
  };

  int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(result.rows.begin(), result.rows.end(), row_key_less);
  return result;
}

namespace {

std::string csv_decimal(const Rational& r) { return r.to_decimal(9); }

}  // namespace

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::bad_input, "cannot write " + path);
  out << "n,delta,network_id,group_id,P,P_prime,alg,scheme,B,status,T,p,delivered,"
         "rho,iterations\n";
  for (const auto& r : rows) {
    bool ok = r.status == "ok";
    out << r.n << ',' << r.delta << ',' << r.network_id << ',' << r.group_id << ','
        << r.path_count << ',';
    if (r.path_count > 0) out << csv_decimal(r.p_prime());
    out << ',' << r.alg << ',' << r.scheme << ',' << r.buffer_capacity << ','
        << r.status << ',';
    if (ok && r.alg != "none") out << csv_decimal(r.throughput);
    out << ',';
    if (r.period > 0) out << r.period;
    out << ',';
    if (r.period > 0) out << r.delivered;
    out << ',';
    if (r.has_graph) out << csv_decimal(r.rho);
    out << ',' << r.iterations << '\n';
  }
}

void write_timings_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::bad_input, "cannot write " + path);
  out << "n,delta,network_id,group_id,P,alg,scheme,B,wall_micros\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.delta << ',' << r.network_id << ',' << r.group_id << ','
        << r.path_count << ',' << r.alg << ',' << r.scheme << ','
        << r.buffer_capacity << ',' << r.wall_micros << '\n';
}

void emit_distributions(const std::string& out_dir) {
  std::vector<std::string> net_files, path_files;
  auto list = [](const std::string& dir, std::vector<std::string>& out) {
    if (!fs::is_directory(dir)) return;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".json")
        out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
  };
  list(out_dir + "/networks", net_files);
  list(out_dir + "/paths", path_files);
  if (net_files.empty() || path_files.empty())
    throw Error(errc::missing_artifacts, "no sweep artifacts under " + out_dir);

  std::map<std::tuple<int, int, int>, long long> degree_hist;  // (n, delta, degree)
  for (const auto& f : net_files) {
    MeshNetwork net = network_from_json(load_json_file(f));
    int n = (int)net.sites.size();
    for (const auto& nbrs : neighbor_lists(net))
      ++degree_hist[{n, net.delta_max, (int)nbrs.size()}];
  }

  std::map<std::tuple<int, int, int>, long long> size_hist;  // (n, delta, hops)
  for (const auto& f : path_files) {
    json j = load_json_file(f);
    int n = j.at("n").get<int>();
    int delta = j.at("delta").get<int>();
    for (const auto& jg : j.at("groups")) {
      PathGroup g = group_from_json(jg);
      for (const auto& p : g.paths) ++size_hist[{n, delta, p.hops()}];
    }
  }

  auto dump = [&](const std::string& path, const char* header,
                  const std::map<std::tuple<int, int, int>, long long>& hist) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::bad_input, "cannot write " + path);
    out << header;
    for (const auto& [key, count] : hist) {
      auto [n, delta, value] = key;
      out << n << ',' << delta << ',' << value << ',' << count << '\n';
    }
  };
  dump(out_dir + "/degree_dist.csv", "n,delta,degree,count\n", degree_hist);
  dump(out_dir + "/path_size_dist.csv", "n,delta,hops,count\n", size_hist);
}

}  // namespace meshsched
