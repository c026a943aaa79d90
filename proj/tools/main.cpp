#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cqaoa/experiment.hpp"
#include "cqaoa/oracle.hpp"

using namespace cqaoa;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

std::vector<double> parse_angle_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int cmd_gen_instances(const std::string& out_dir, int n, int k,
                      const std::string& kind_s, int count, double p,
                      std::uint64_t seed, bool exhaustive4) {
  std::filesystem::create_directories(out_dir);
  const ProblemKind kind = problem_kind_from_string(kind_s);
  std::vector<ProblemInstance> instances;
  if (exhaustive4) {
    std::uint64_t mask = 0;
    for (auto& g : all_four_vertex_graphs())
      instances.emplace_back(std::move(g), kind, k, mask++);
  } else {
    for (int i = 0; i < count; ++i) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
      instances.emplace_back(generate_erdos_renyi(n, p, s), kind, k, s);
    }
  }
  int idx = 0;
  for (const auto& inst : instances) {
    std::ostringstream name;
    name << out_dir << "/instance_" << std::setw(4) << std::setfill('0') << idx++
         << ".json";
    std::ofstream(name.str()) << json(inst).dump(2) << '\n';
  }
  std::cout << "wrote " << instances.size() << " instances to " << out_dir << '\n';
  return kExitOk;
}

int cmd_run(const std::string& instance_path, const std::string& variant_s,
            const std::string& betas_s, const std::string& gammas_s,
            int threshold, bool has_threshold, const std::string& state_out) {
  const ProblemInstance instance = load_json(instance_path).get<ProblemInstance>();
  const VariantSpec variant = variant_from_string(variant_s);
  if (variant.separator == SeparatorKind::Threshold && !has_threshold)
    throw std::invalid_argument(
        "variant " + variant_s + " needs --threshold");
  AngleSchedule schedule(parse_angle_list(betas_s), parse_angle_list(gammas_s));
  QaoaContext ctx(instance, variant);
  const RunResult result = run_qaoa(
      ctx, schedule,
      has_threshold ? std::optional<int>(threshold) : std::nullopt);
  std::cout << "expectation " << std::setprecision(12) << result.expectation
            << "\napprox_ratio " << result.approx_ratio << "\nper_round_ratios";
  for (double r : result.per_round_ratios) std::cout << ' ' << r;
  std::cout << '\n';
  if (!state_out.empty()) {
    std::ofstream out(state_out);
    out << "rank,bitstring,prob,phase\n";
    for (Eigen::Index r = 0; r < result.final_state.amplitudes.size(); ++r) {
      const auto amp = result.final_state.amplitudes[r];
      const std::uint64_t x = ctx.index.unrank(static_cast<std::size_t>(r));
      out << r << ',';
      for (int b = ctx.index.n() - 1; b >= 0; --b) out << ((x >> b) & 1u);
      out << ',' << std::norm(amp) << ',' << std::arg(amp) << '\n';
    }
  }
  return kExitOk;
}

int cmd_tune(const std::string& instance_path, const std::string& variant_s,
             int p_max, const std::string& strategy_s, std::uint64_t seed,
             const std::string& out_path) {
  const ProblemInstance instance = load_json(instance_path).get<ProblemInstance>();
  const VariantSpec variant = variant_from_string(variant_s);
  TunerConfig cfg;
  cfg.seed = seed;
  QaoaContext ctx(instance, variant);
  InductiveTuner tuner(ctx, angle_strategy_from_string(strategy_s), cfg);
  std::cout << "p expectation ratio threshold\n";
  for (int p = 1; p <= p_max; ++p) {
    const TunedRound& round = tuner.next_round();
    std::cout << p << ' ' << std::setprecision(10) << round.expectation << ' '
              << round.approx_ratio << ' '
              << (round.threshold ? std::to_string(*round.threshold) : "-")
              << '\n';
  }
  if (!out_path.empty())
    std::ofstream(out_path) << json(tuner.rounds()).dump(2) << '\n';
  return kExitOk;
}

int cmd_experiment(const std::string& config_path, int jobs,
                   std::uint64_t seed, bool has_seed,
                   const std::string& out_dir) {
  ExperimentConfig config = load_json(config_path).get<ExperimentConfig>();
  if (jobs > 0) config.jobs = jobs;
  if (has_seed) config.master_seed = seed;
  if (!out_dir.empty()) config.out_dir = out_dir;
  const auto records = run_experiment(config);
  std::cout << "records: " << records.size() << "\nout_dir: " << config.out_dir
            << "\nconfig_hash: " << config_hash(config) << '\n';
  return kExitOk;
}

struct SummaryRow {
  int n;
  std::string variant, target;
  double mean, stddev;
  int count;
};

std::pair<std::string, std::vector<SummaryRow>> read_summary(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line, hash;
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.rfind("# config_hash=", 0) == 0) {
      hash = line.substr(14, line.find(' ', 14) - 14);
      continue;
    }
    if (line.empty() || line.rfind("n,", 0) == 0) continue;
    SummaryRow row;
    std::stringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ','); row.n = std::stoi(tok);
    std::getline(ss, row.variant, ',');
    std::getline(ss, row.target, ',');
    std::getline(ss, tok, ','); row.mean = std::stod(tok);
    std::getline(ss, tok, ','); row.stddev = std::stod(tok);
    std::getline(ss, tok, ','); row.count = std::stoi(tok);
    rows.push_back(row);
  }
  return {hash, rows};
}

int cmd_fit(const std::string& summary_path, const std::string& variant,
            const std::string& target, const std::string& ansatz_s,
            const std::string& expect_hash, const std::string& out_path) {
  auto [hash, rows] = read_summary(summary_path);
  if (!expect_hash.empty() && hash != expect_hash)
    throw std::invalid_argument("config hash mismatch: summary has " + hash);
  std::vector<double> xs, means, stds;
  for (const auto& r : rows) {
    if (r.variant != variant || r.target != target) continue;
    xs.push_back(r.n);
    means.push_back(r.mean);
    stds.push_back(r.stddev);
  }
  const ScalingFit fit = fit_scaling(xs, means, stds, ansatz_from_string(ansatz_s));
  json out = fit;
  out["config_hash"] = hash;
  out["variant"] = variant;
  out["target"] = target;
  const std::string dump = out.dump(2);
  std::cout << dump << '\n';
  if (!out_path.empty()) std::ofstream(out_path) << dump << '\n';
  return kExitOk;
}

int cmd_plot_data(const std::string& summary_path, const std::string& fit_path,
                  const std::string& out_path) {
  auto [hash, rows] = read_summary(summary_path);
  std::optional<ScalingFit> fit;
  std::string fit_variant, fit_target;
  if (!fit_path.empty()) {
    const json fj = load_json(fit_path);
    if (fj.value("config_hash", hash) != hash)
      throw std::invalid_argument("plot-data: fit/summary config hash mismatch");
    fit = fj.get<ScalingFit>();
    fit_variant = fj.value("variant", "");
    fit_target = fj.value("target", "");
  }
  std::ofstream out(out_path);
  out << "# config_hash=" << hash << '\n';
  out << "n,variant,target,mean,stddev,fit_curve_value\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.variant << ',' << r.target << ',' << r.mean << ','
        << r.stddev << ',';
    if (fit && r.variant == fit_variant && r.target == fit_target)
      out << fit_eval(*fit, r.n);
    out << '\n';
  }
  std::cout << "wrote " << out_path << '\n';
  return kExitOk;
}

// Oracle agreement suite: subspace evolution vs full-space Pauli-built
// evolution on random instances/angles, n <= 8. The sign-error flag is a
// negative control that corrupts the fast path's mixer angle.
int cmd_validate(bool inject_mixer_sign_error) {
  std::mt19937_64 rng(2024);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  bool all_ok = true;
  std::cout << "variant      max_deviation  status\n";
  for (const auto& variant : all_variants()) {
    double max_dev = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      const int n = 4 + 2 * (trial % 3);
      const ProblemInstance instance(generate_erdos_renyi(n, 0.5, rng()),
                                     ProblemKind::DensestSubgraph, n / 2);
      QaoaContext ctx(instance, variant);
      const int p = 1 + static_cast<int>(trial / 3);
      std::vector<double> betas(p), gammas(p);
      for (auto& b : betas) b = uni() * 2 * M_PI;
      for (auto& g : gammas) g = uni() * 2 * M_PI;
      std::optional<int> th;
      if (variant.separator == SeparatorKind::Threshold)
        th = ctx.cost.c_max > 0 ? ctx.cost.c_max / 2 : 0;
      AngleSchedule schedule(betas, gammas);
      AngleSchedule fast_schedule = schedule;
      if (inject_mixer_sign_error)
        for (auto& b : fast_schedule.betas) b = -b;
      const RunResult fast = run_qaoa(ctx, fast_schedule, th);
      const Eigen::VectorXcd full =
          oracle::full_space_run(instance, variant, schedule, th);
      for (Eigen::Index r = 0;
           r < static_cast<Eigen::Index>(ctx.index.dim()); ++r) {
        const auto x = ctx.index.unrank(static_cast<std::size_t>(r));
        max_dev = std::max(max_dev,
                           std::abs(fast.final_state.amplitudes[r] -
                                    full[static_cast<Eigen::Index>(x)]));
      }
    }
    const bool ok = max_dev < 1e-10;
    all_ok = all_ok && ok;
    std::cout << std::left << std::setw(13) << to_string(variant)
              << std::scientific << std::setprecision(3) << max_dev << "      "
              << (ok ? "pass" : "FAIL") << '\n';
  }
  return all_ok ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-preserving QAOA simulator and benchmark harness"};
  app.require_subcommand(1);

  // gen-instances
  auto* gen = app.add_subcommand("gen-instances", "Generate problem instances");
  std::string gen_out = "instances", gen_kind = "densest";
  int gen_n = 8, gen_k = 4, gen_count = 12;
  double gen_p = 0.5;
  std::uint64_t gen_seed = 1;
  bool gen_exhaustive4 = false;
  gen->add_option("--out-dir", gen_out)->envname("CQAOA_OUT_DIR");
  gen->add_option("--n", gen_n)->envname("CQAOA_N");
  gen->add_option("--k", gen_k)->envname("CQAOA_K");
  gen->add_option("--kind", gen_kind)->envname("CQAOA_KIND");
  gen->add_option("--count", gen_count);
  gen->add_option("--edge-probability", gen_p);
  gen->add_option("--seed", gen_seed)->envname("CQAOA_SEED");
  gen->add_flag("--exhaustive-n4", gen_exhaustive4);

  // run
  auto* run = app.add_subcommand("run", "Run one QAOA evolution");
  std::string run_instance, run_variant = "Clique-Obj", run_betas = "",
              run_gammas = "", run_state_out;
  int run_threshold = 0;
  run->add_option("--instance", run_instance)->required();
  run->add_option("--variant", run_variant)->envname("CQAOA_VARIANT");
  run->add_option("--betas", run_betas);
  run->add_option("--gammas", run_gammas);
  auto* th_opt = run->add_option("--threshold", run_threshold);
  run->add_option("--state-out", run_state_out);

  // tune
  auto* tune = app.add_subcommand("tune", "Tune angles/thresholds per round");
  std::string tune_instance, tune_variant = "Clique-Obj",
              tune_strategy = "extrapolated-gd", tune_out;
  int tune_pmax = 5;
  std::uint64_t tune_seed = 1;
  tune->add_option("--instance", tune_instance)->required();
  tune->add_option("--variant", tune_variant)->envname("CQAOA_VARIANT");
  tune->add_option("--p-max", tune_pmax)->envname("CQAOA_P_MAX");
  tune->add_option("--strategy", tune_strategy);
  tune->add_option("--seed", tune_seed)->envname("CQAOA_SEED");
  tune->add_option("--out", tune_out);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an ensemble experiment");
  std::string exp_config, exp_out;
  int exp_jobs = 0;
  std::uint64_t exp_seed = 0;
  exp->add_option("--config", exp_config)->required()->envname("CQAOA_CONFIG");
  exp->add_option("--jobs", exp_jobs)->envname("CQAOA_JOBS");
  auto* exp_seed_opt = exp->add_option("--seed", exp_seed)->envname("CQAOA_SEED");
  exp->add_option("--out-dir", exp_out)->envname("CQAOA_OUT_DIR");

  // fit
  auto* fit = app.add_subcommand("fit", "Weighted scaling fit of a summary");
  std::string fit_summary, fit_variant = "Grover-Th", fit_target = "0.99",
              fit_ansatz = "power", fit_hash, fit_out;
  fit->add_option("--summary", fit_summary)->required();
  fit->add_option("--variant", fit_variant)->envname("CQAOA_VARIANT");
  fit->add_option("--target", fit_target)->envname("CQAOA_TARGET");
  fit->add_option("--ansatz", fit_ansatz);
  fit->add_option("--expect-hash", fit_hash);
  fit->add_option("--out", fit_out);

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "Emit tidy plot CSV");
  std::string plot_summary, plot_fit, plot_out = "plot.csv";
  plot->add_option("--summary", plot_summary)->required();
  plot->add_option("--fit", plot_fit);
  plot->add_option("--out", plot_out);

  // validate
  auto* validate = app.add_subcommand("validate", "Run oracle agreement checks");
  bool val_corrupt = false;
  validate->add_flag("--inject-mixer-sign-error", val_corrupt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (gen->parsed())
      return cmd_gen_instances(gen_out, gen_n, gen_k, gen_kind, gen_count,
                               gen_p, gen_seed, gen_exhaustive4);
    if (run->parsed())
      return cmd_run(run_instance, run_variant, run_betas, run_gammas,
                     run_threshold, th_opt->count() > 0, run_state_out);
    if (tune->parsed())
      return cmd_tune(tune_instance, tune_variant, tune_pmax, tune_strategy,
                      tune_seed, tune_out);
    if (exp->parsed())
      return cmd_experiment(exp_config, exp_jobs, exp_seed,
                            exp_seed_opt->count() > 0, exp_out);
    if (fit->parsed())
      return cmd_fit(fit_summary, fit_variant, fit_target, fit_ansatz, fit_hash,
                     fit_out);
    if (plot->parsed()) return cmd_plot_data(plot_summary, plot_fit, plot_out);
    if (validate->parsed()) return cmd_validate(val_corrupt);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}
