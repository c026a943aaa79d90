#include "cqaoa/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace cqaoa {

namespace fs = std::filesystem;

int ExperimentConfig::k_for(int n) const {
  if (k_rule == "half") {
    if (n % 2 != 0)
      throw std::invalid_argument("k_rule half requires even n");
    return n / 2;
  }
  return std::stoi(k_rule);
}

int ExperimentConfig::p_cap_for(std::size_t dim) const {
  if (p_cap > 0) return p_cap;
  return static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(dim))));
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  nlohmann::json kinds = nlohmann::json::array();
  for (auto k : c.kinds) kinds.push_back(to_string(k));
  nlohmann::json variants = nlohmann::json::array();
  for (const auto& v : c.variants) variants.push_back(to_string(v));
  j = nlohmann::json{{"schema_version", c.schema_version},
                     {"kinds", kinds},
                     {"ns", c.ns},
                     {"k_rule", c.k_rule},
                     {"edge_probability", c.edge_probability},
                     {"instances_per_n", c.instances_per_n},
                     {"exhaustive_n4", c.exhaustive_n4},
                     {"variants", variants},
                     {"targets", c.targets},
                     {"p_cap", c.p_cap},
                     {"angle_strategy", to_string(c.angle_strategy)},
                     {"tuner", c.tuner},
                     {"master_seed", c.master_seed},
                     {"out_dir", c.out_dir},
                     {"jobs", c.jobs}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  c = ExperimentConfig{};
  if (j.contains("schema_version")) j.at("schema_version").get_to(c.schema_version);
  if (c.schema_version != 1)
    throw std::invalid_argument("unsupported config schema_version");
  if (j.contains("kinds")) {
    c.kinds.clear();
    for (const auto& k : j.at("kinds"))
      c.kinds.push_back(problem_kind_from_string(k.get<std::string>()));
  }
  if (j.contains("ns")) j.at("ns").get_to(c.ns);
  if (j.contains("k_rule")) j.at("k_rule").get_to(c.k_rule);
  if (j.contains("edge_probability")) j.at("edge_probability").get_to(c.edge_probability);
  if (j.contains("instances_per_n")) j.at("instances_per_n").get_to(c.instances_per_n);
  if (j.contains("exhaustive_n4")) j.at("exhaustive_n4").get_to(c.exhaustive_n4);
  if (j.contains("variants")) {
    c.variants.clear();
    for (const auto& v : j.at("variants"))
      c.variants.push_back(variant_from_string(v.get<std::string>()));
  }
  if (j.contains("targets")) j.at("targets").get_to(c.targets);
  if (j.contains("p_cap")) j.at("p_cap").get_to(c.p_cap);
  if (j.contains("angle_strategy"))
    c.angle_strategy = angle_strategy_from_string(j.at("angle_strategy").get<std::string>());
  if (j.contains("tuner")) j.at("tuner").get_to(c.tuner);
  if (j.contains("master_seed")) j.at("master_seed").get_to(c.master_seed);
  if (j.contains("out_dir")) j.at("out_dir").get_to(c.out_dir);
  if (j.contains("jobs")) j.at("jobs").get_to(c.jobs);
  for (double t : c.targets)
    if (t <= 0.0 || t > 1.0)
      throw std::invalid_argument("targets must lie in (0, 1]");
}

std::string config_hash(const ExperimentConfig& c) {
  nlohmann::json j = c;
  const std::string dump = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_target(double target) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", target);
  return buf;
}

std::string ExperimentRecord::key() const {
  std::ostringstream os;
  os << n << '/' << k << '/' << to_string(kind) << '/' << seed << '/' << variant;
  return os.str();
}

ProblemInstance ExperimentRecord::instance() const {
  return ProblemInstance(Graph(n, edges), kind, k, seed);
}

void to_json(nlohmann::json& j, const ExperimentRecord& r) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : r.edges) edges.push_back({u, v});
  j = nlohmann::json{{"n", r.n},
                     {"k", r.k},
                     {"kind", to_string(r.kind)},
                     {"seed", r.seed},
                     {"edges", edges},
                     {"variant", r.variant},
                     {"rounds", r.rounds},
                     {"rounds_to_target", r.rounds_to_target},
                     {"wall_ms", r.wall_ms}};
}

void from_json(const nlohmann::json& j, ExperimentRecord& r) {
  r = ExperimentRecord{};
  j.at("n").get_to(r.n);
  j.at("k").get_to(r.k);
  r.kind = problem_kind_from_string(j.at("kind").get<std::string>());
  j.at("seed").get_to(r.seed);
  for (const auto& e : j.at("edges"))
    r.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  j.at("variant").get_to(r.variant);
  j.at("rounds").get_to(r.rounds);
  j.at("rounds_to_target").get_to(r.rounds_to_target);
  if (j.contains("wall_ms")) j.at("wall_ms").get_to(r.wall_ms);
}

ExperimentRecord rounds_to_target(const ProblemInstance& instance,
                                  const VariantSpec& variant,
                                  AngleStrategy strategy,
                                  const std::vector<double>& targets,
                                  const TunerConfig& tuner_config, int p_cap) {
  for (double t : targets)
    if (t <= 0.0 || t > 1.0)
      throw std::invalid_argument("rounds_to_target: target must be in (0, 1]");
  ExperimentRecord record;
  record.n = instance.n();
  record.k = instance.k;
  record.kind = instance.kind;
  record.seed = instance.seed.value_or(0);
  record.edges = instance.graph.edges;
  record.variant = to_string(variant);

  QaoaContext ctx(instance, variant);
  const double dicke_ratio =
      expectation_and_ratio(dicke_state(ctx.index), ctx.cost).second;
  std::set<std::string> pending;
  for (double t : targets) {
    const std::string key = format_target(t);
    if (dicke_ratio >= t) record.rounds_to_target[key] = 0;
    else pending.insert(key);
  }

  InductiveTuner tuner(ctx, strategy, tuner_config);
  for (int p = 1; !pending.empty() && p <= p_cap; ++p) {
    const auto start = std::chrono::steady_clock::now();
    const TunedRound& round = tuner.next_round();
    record.wall_ms.push_back(
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start).count());
    record.rounds.push_back(round);
    for (double t : targets) {
      const std::string key = format_target(t);
      if (pending.count(key) && round.approx_ratio >= t) {
        record.rounds_to_target[key] = p;
        pending.erase(key);
      }
    }
  }
  for (const auto& key : pending) record.rounds_to_target[key] = -1;
  return record;
}

std::vector<EnsembleStat> ensemble_stats(
    const std::vector<ExperimentRecord>& records, const std::string& variant,
    double target) {
  const std::string key = format_target(target);
  std::map<int, std::vector<int>> by_n;
  for (const auto& r : records) {
    if (r.variant != variant) continue;
    auto it = r.rounds_to_target.find(key);
    if (it == r.rounds_to_target.end() || it->second < 0) continue;
    by_n[r.n].push_back(it->second);
  }
  std::vector<EnsembleStat> stats;
  for (const auto& [n, vals] : by_n) {
    if (vals.size() < 2)
      throw std::invalid_argument("ensemble_stats: need >= 2 records per n");
    double mean = 0;
    for (int v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0;
    for (int v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size() - 1);
    stats.push_back({n, mean, std::sqrt(var), static_cast<int>(vals.size())});
  }
  return stats;
}

std::map<std::string, std::vector<double>> round_by_round_table(
    const std::vector<ProblemInstance>& instances,
    const std::vector<VariantSpec>& variants, int p_max, AngleStrategy strategy,
    const TunerConfig& tuner_config) {
  std::map<std::string, std::vector<double>> table;
  for (const auto& variant : variants) {
    std::vector<double> mean(p_max + 1, 0.0);
    for (const auto& instance : instances) {
      QaoaContext ctx(instance, variant);
      mean[0] += expectation_and_ratio(dicke_state(ctx.index), ctx.cost).second;
      InductiveTuner tuner(ctx, strategy, tuner_config);
      for (int p = 1; p <= p_max; ++p) mean[p] += tuner.next_round().approx_ratio;
    }
    for (auto& m : mean) m /= static_cast<double>(instances.size());
    table[to_string(variant)] = std::move(mean);
  }
  return table;
}

std::vector<ProblemInstance> config_instances(const ExperimentConfig& config,
                                              ProblemKind kind, int n) {
  const int k = config.k_for(n);
  std::vector<ProblemInstance> instances;
  if (n == 4 && config.exhaustive_n4) {
    std::uint64_t mask = 0;
    for (auto& g : all_four_vertex_graphs())
      instances.emplace_back(std::move(g), kind, k, mask++);
    return instances;
  }
  const auto kind_idx = static_cast<std::uint64_t>(kind);
  for (int i = 0; i < config.instances_per_n; ++i) {
    const std::uint64_t seed = derive_seed(
        config.master_seed,
        (kind_idx << 32) | (static_cast<std::uint64_t>(n) << 16) |
            static_cast<std::uint64_t>(i));
    instances.emplace_back(generate_erdos_renyi(n, config.edge_probability, seed),
                           kind, k, seed);
  }
  return instances;
}

std::vector<ExperimentRecord> read_records_jsonl(const std::string& path) {
  std::vector<ExperimentRecord> records;
  std::ifstream in(path);
  if (!in) return records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    records.push_back(nlohmann::json::parse(line).get<ExperimentRecord>());
  }
  return records;
}

void write_records_jsonl(const std::string& path,
                         const std::vector<ExperimentRecord>& records,
                         const std::string& hash, std::uint64_t master_seed) {
  std::ofstream out(path);
  out << "# config_hash=" << hash << " master_seed=" << master_seed << '\n';
  for (const auto& r : records) out << nlohmann::json(r).dump() << '\n';
}

namespace {

void write_summary_csv(const std::string& path,
                       const std::vector<ExperimentRecord>& records,
                       const ExperimentConfig& config, const std::string& hash) {
  std::ofstream out(path);
  out << "# config_hash=" << hash << " master_seed=" << config.master_seed << '\n';
  out << "n,variant,target,mean,stddev,count\n";
  for (const auto& variant : config.variants) {
    for (double target : config.targets) {
      std::vector<EnsembleStat> stats;
      try {
        stats = ensemble_stats(records, to_string(variant), target);
      } catch (const std::invalid_argument&) {
        continue;  // partial results; not enough records yet
      }
      for (const auto& s : stats) {
        out << s.n << ',' << to_string(variant) << ',' << format_target(target)
            << ',' << s.mean << ',' << s.stddev << ',' << s.count << '\n';
      }
    }
  }
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  fs::create_directories(config.out_dir);
  const std::string records_path = config.out_dir + "/records.jsonl";
  const std::string hash = config_hash(config);

  std::vector<ExperimentRecord> existing = read_records_jsonl(records_path);
  std::set<std::string> done;
  for (const auto& r : existing) done.insert(r.key());

  struct WorkItem {
    ProblemInstance instance;
    VariantSpec variant;
  };
  std::vector<WorkItem> work;
  for (auto kind : config.kinds) {
    for (int n : config.ns) {
      for (auto& instance : config_instances(config, kind, n)) {
        for (const auto& variant : config.variants) {
          ExperimentRecord probe;
          probe.n = instance.n();
          probe.k = instance.k;
          probe.kind = instance.kind;
          probe.seed = instance.seed.value_or(0);
          probe.variant = to_string(variant);
          if (!done.count(probe.key())) work.push_back({instance, variant});
        }
      }
    }
  }

  std::vector<ExperimentRecord> fresh(work.size());
  std::atomic<std::size_t> next{0};
  const unsigned jobs = config.jobs > 0
                            ? static_cast<unsigned>(config.jobs)
                            : std::max(1u, std::thread::hardware_concurrency());
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const auto& item = work[i];
      const SubspaceIndex index(item.instance.n(), item.instance.k);
      fresh[i] = rounds_to_target(item.instance, item.variant,
                                  config.angle_strategy, config.targets,
                                  config.tuner, config.p_cap_for(index.dim()));
    }
  };
  {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, std::max<std::size_t>(work.size(), 1)); ++t)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<ExperimentRecord> all = std::move(existing);
  all.insert(all.end(), std::make_move_iterator(fresh.begin()),
             std::make_move_iterator(fresh.end()));
  std::sort(all.begin(), all.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) {
              return std::tie(a.n, a.seed, a.variant, a.kind) <
                     std::tie(b.n, b.seed, b.variant, b.kind);
            });

  write_records_jsonl(records_path, all, hash, config.master_seed);
  write_summary_csv(config.out_dir + "/summary.csv", all, config, hash);

  nlohmann::json manifest{
      {"config", nlohmann::json(config)},
      {"config_hash", hash},
      {"master_seed", config.master_seed},
      {"record_count", all.size()},
      {"code_version", "cqaoa 1.0"},
      {"finished_unix_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(
           std::chrono::system_clock::now().time_since_epoch()).count()}};
  std::ofstream(config.out_dir + "/manifest.json") << manifest.dump(2) << '\n';
  return all;
}

}  // namespace cqaoa
