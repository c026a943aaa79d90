#include "cqaoa/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "cqaoa/oracle.hpp"

namespace cqaoa {

void to_json(nlohmann::json& j, const TunerConfig& c) {
  j = nlohmann::json{{"bh_iterations", c.bh_iterations},
                     {"bh_step_size", c.bh_step_size},
                     {"bh_temperature", c.bh_temperature},
                     {"bh_local_tol", c.bh_local_tol},
                     {"bh_local_max_iterations", c.bh_local_max_iterations},
                     {"gd_fd_step", c.gd_fd_step},
                     {"gd_initial_step", c.gd_initial_step},
                     {"gd_convergence_tol", c.gd_convergence_tol},
                     {"max_gd_iterations", c.max_gd_iterations},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TunerConfig& c) {
  c = TunerConfig{};
  if (j.contains("bh_iterations")) j.at("bh_iterations").get_to(c.bh_iterations);
  if (j.contains("bh_step_size")) j.at("bh_step_size").get_to(c.bh_step_size);
  if (j.contains("bh_temperature")) j.at("bh_temperature").get_to(c.bh_temperature);
  if (j.contains("bh_local_tol")) j.at("bh_local_tol").get_to(c.bh_local_tol);
  if (j.contains("bh_local_max_iterations"))
    j.at("bh_local_max_iterations").get_to(c.bh_local_max_iterations);
  if (j.contains("gd_fd_step")) j.at("gd_fd_step").get_to(c.gd_fd_step);
  if (j.contains("gd_initial_step")) j.at("gd_initial_step").get_to(c.gd_initial_step);
  if (j.contains("gd_convergence_tol"))
    j.at("gd_convergence_tol").get_to(c.gd_convergence_tol);
  if (j.contains("max_gd_iterations"))
    j.at("max_gd_iterations").get_to(c.max_gd_iterations);
  if (j.contains("seed")) j.at("seed").get_to(c.seed);
  if (c.bh_iterations <= 0 || c.bh_local_max_iterations <= 0 ||
      c.max_gd_iterations <= 0 || c.bh_step_size <= 0 || c.bh_local_tol <= 0 ||
      c.gd_fd_step <= 0 || c.gd_initial_step <= 0 || c.gd_convergence_tol <= 0)
    throw std::invalid_argument("TunerConfig: counts and tolerances must be positive");
}

void to_json(nlohmann::json& j, const TunedRound& r) {
  j = nlohmann::json{{"p", r.p},
                     {"betas", r.schedule.betas},
                     {"gammas", r.schedule.gammas},
                     {"expectation", r.expectation},
                     {"approx_ratio", r.approx_ratio},
                     {"converged", r.converged}};
  if (r.threshold) j["threshold"] = *r.threshold;
  if (r.p_star) j["p_star"] = *r.p_star;
}

void from_json(const nlohmann::json& j, TunedRound& r) {
  r = TunedRound{};
  j.at("p").get_to(r.p);
  r.schedule = AngleSchedule(j.at("betas").get<std::vector<double>>(),
                             j.at("gammas").get<std::vector<double>>());
  j.at("expectation").get_to(r.expectation);
  j.at("approx_ratio").get_to(r.approx_ratio);
  j.at("converged").get_to(r.converged);
  if (j.contains("threshold")) r.threshold = j.at("threshold").get<int>();
  if (j.contains("p_star")) r.p_star = j.at("p_star").get<int>();
}

std::string to_string(AngleStrategy s) {
  switch (s) {
    case AngleStrategy::ExtrapolatedGd: return "extrapolated-gd";
    case AngleStrategy::ExtrapolatedBasinHopping: return "extrapolated-bh";
    case AngleStrategy::RandomBasinHopping: return "random-bh";
  }
  throw std::logic_error("unknown AngleStrategy");
}

AngleStrategy angle_strategy_from_string(const std::string& s) {
  if (s == "extrapolated-gd") return AngleStrategy::ExtrapolatedGd;
  if (s == "extrapolated-bh") return AngleStrategy::ExtrapolatedBasinHopping;
  if (s == "random-bh") return AngleStrategy::RandomBasinHopping;
  throw std::invalid_argument("unknown angle strategy: " + s);
}

AngleSchedule extrapolate_angles(const AngleSchedule& prev) {
  if (prev.rounds() < 1)
    throw std::invalid_argument("extrapolate_angles: empty schedule");
  std::vector<double> betas = prev.betas;
  std::vector<double> gammas = prev.gammas;
  betas.push_back(betas.back());
  gammas.push_back(gammas.back());
  return AngleSchedule(std::move(betas), std::move(gammas));
}

std::vector<double> fd_gradient(const ScalarFn& fn, const std::vector<double>& x,
                                double h) {
  std::vector<double> g(x.size());
  std::vector<double> xp = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double fp = fn(xp);
    xp[i] = x[i] - h;
    const double fm = fn(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

std::vector<double> fd_gradient_5point(const ScalarFn& fn,
                                       const std::vector<double>& x, double h) {
  std::vector<double> g(x.size());
  std::vector<double> xp = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = x[i];
    xp[i] = c + 2 * h;
    const double f2p = fn(xp);
    xp[i] = c + h;
    const double f1p = fn(xp);
    xp[i] = c - h;
    const double f1m = fn(xp);
    xp[i] = c - 2 * h;
    const double f2m = fn(xp);
    xp[i] = c;
    g[i] = (-f2p + 8 * f1p - 8 * f1m + f2m) / (12.0 * h);
  }
  return g;
}

namespace {
double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace

AscentResult gradient_ascent(const ScalarFn& fn, std::vector<double> x0,
                             double fd_h, double initial_step, double tol,
                             int max_iter) {
  AscentResult res;
  res.x = std::move(x0);
  res.value = fn(res.x);
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    const std::vector<double> g = fd_gradient(fn, res.x, fd_h);
    const double gn = norm2(g);
    if (gn < tol) {
      res.converged = true;
      return res;
    }
    // Armijo backtracking along the gradient.
    double alpha = initial_step;
    bool stepped = false;
    std::vector<double> cand(res.x.size());
    for (int bt = 0; bt < 40; ++bt) {
      for (std::size_t i = 0; i < res.x.size(); ++i) cand[i] = res.x[i] + alpha * g[i];
      const double fc = fn(cand);
      if (fc >= res.value + 1e-4 * alpha * gn * gn) {
        res.x = cand;
        res.value = fc;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      // No ascent direction resolvable at this scale; numerically stationary.
      res.converged = gn < tol;
      return res;
    }
  }
  res.converged = norm2(fd_gradient(fn, res.x, fd_h)) < tol;
  return res;
}

double schedule_expectation(const QaoaContext& ctx,
                            const std::vector<double>& flat_angles,
                            std::optional<int> threshold) {
  const std::size_t p = flat_angles.size() / 2;
  AngleSchedule schedule(
      std::vector<double>(flat_angles.begin(), flat_angles.begin() + p),
      std::vector<double>(flat_angles.begin() + p, flat_angles.end()));
  return run_qaoa(ctx, schedule, threshold).expectation;
}

namespace {

std::vector<double> flatten(const AngleSchedule& s) {
  std::vector<double> x = s.betas;
  x.insert(x.end(), s.gammas.begin(), s.gammas.end());
  return x;
}

AngleSchedule unflatten(const std::vector<double>& x) {
  const std::size_t p = x.size() / 2;
  return AngleSchedule(std::vector<double>(x.begin(), x.begin() + p),
                       std::vector<double>(x.begin() + p, x.end()));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Finalize a TunedRound by re-running the stored schedule, so the persisted
// expectation always matches run_qaoa on the stored angles.
TunedRound make_round(const QaoaContext& ctx, int p, AngleSchedule schedule,
                      std::optional<int> threshold, std::optional<int> p_star,
                      bool converged) {
  TunedRound r;
  r.p = p;
  r.schedule = std::move(schedule);
  r.threshold = threshold;
  r.p_star = p_star;
  r.converged = converged;
  const RunResult rr = run_qaoa(ctx, r.schedule, threshold);
  r.expectation = rr.expectation;
  r.approx_ratio = rr.approx_ratio;
  return r;
}

}  // namespace

TunedRound optimize_angles_gd(const QaoaContext& ctx, int p,
                              std::optional<int> threshold,
                              const AngleSchedule& start,
                              const TunerConfig& config) {
  if (start.rounds() != p)
    throw std::invalid_argument("optimize_angles_gd: start has wrong round count");
  const ScalarFn fn = [&](const std::vector<double>& x) {
    return schedule_expectation(ctx, x, threshold);
  };
  const AscentResult res =
      gradient_ascent(fn, flatten(start), config.gd_fd_step,
                      config.gd_initial_step, config.gd_convergence_tol,
                      config.max_gd_iterations);
  return make_round(ctx, p, unflatten(res.x), threshold, std::nullopt,
                    res.converged);
}

TunedRound optimize_angles_basinhopping(const QaoaContext& ctx, int p,
                                        std::optional<int> threshold,
                                        const std::optional<AngleSchedule>& start,
                                        const TunerConfig& config,
                                        std::uint64_t seed_salt) {
  const ScalarFn fn = [&](const std::vector<double>& x) {
    return schedule_expectation(ctx, x, threshold);
  };
  std::mt19937_64 rng(derive_seed(config.seed, seed_salt));
  std::vector<double> x0;
  if (start) {
    if (start->rounds() != p)
      throw std::invalid_argument("optimize_angles_basinhopping: bad start length");
    x0 = flatten(*start);
  } else {
    x0.resize(2 * static_cast<std::size_t>(p));
    for (auto& v : x0) v = uniform01(rng) * 2.0 * std::numbers::pi;
  }
  auto refine = [&](std::vector<double> x) {
    return gradient_ascent(fn, std::move(x), config.gd_fd_step,
                           config.gd_initial_step, config.bh_local_tol,
                           config.bh_local_max_iterations);
  };
  AscentResult current = refine(std::move(x0));
  AscentResult best = current;
  std::vector<double> cand(current.x.size());
  for (int it = 0; it < config.bh_iterations; ++it) {
    for (std::size_t i = 0; i < cand.size(); ++i)
      cand[i] = current.x[i] +
                (2.0 * uniform01(rng) - 1.0) * config.bh_step_size;
    AscentResult trial = refine(cand);
    const double delta = trial.value - current.value;
    if (delta > 0 ||
        uniform01(rng) < std::exp(delta / config.bh_temperature)) {
      current = std::move(trial);
    }
    if (current.value > best.value) best = current;
  }
  // Polish the best basin with the full GD tolerances.
  const AscentResult polished =
      gradient_ascent(fn, best.x, config.gd_fd_step, config.gd_initial_step,
                      config.gd_convergence_tol, config.max_gd_iterations);
  return make_round(ctx, p, unflatten(polished.x), threshold, std::nullopt,
                    polished.converged);
}

double grover_pi_expectation(const CostVector& cost, int threshold, int applied) {
  const std::uint64_t N = cost.dim();
  std::uint64_t M = 0;
  double sum_marked = 0.0, sum_all = 0.0;
  for (int c : cost.values) {
    sum_all += c;
    if (c > threshold) {
      ++M;
      sum_marked += c;
    }
  }
  const double prob =
      oracle::amplitude_amplification_probability(N, M, applied);
  const double mean_marked = M ? sum_marked / static_cast<double>(M) : 0.0;
  const double mean_unmarked =
      (N - M) ? (sum_all - sum_marked) / static_cast<double>(N - M) : 0.0;
  return prob * mean_marked + (1.0 - prob) * mean_unmarked;
}

namespace {

// Best (expectation, p_star) at a fixed threshold; smaller p_star on ties.
std::pair<double, int> best_grover_prefix(const CostVector& cost, int threshold,
                                          int p) {
  double best = -1.0;
  int best_j = 0;
  for (int j = 0; j <= p; ++j) {
    const double e = grover_pi_expectation(cost, threshold, j);
    if (e > best + 1e-15) {
      best = e;
      best_j = j;
    }
  }
  return {best, best_j};
}

}  // namespace

TunedRound find_threshold_grover(const QaoaContext& ctx, int p,
                                 int prev_threshold) {
  const CostVector& cost = ctx.cost;
  // Thresholds producing distinct marked sets: prev_threshold plus every
  // distinct cost value in (prev_threshold, c_max-1].
  std::set<int> cand_set{prev_threshold};
  for (int c : cost.values)
    if (c > prev_threshold && c <= cost.c_max - 1) cand_set.insert(c);
  const std::vector<int> candidates(cand_set.begin(), cand_set.end());

  std::map<int, std::pair<double, int>> memo;
  auto eval = [&](int idx) -> const std::pair<double, int>& {
    auto it = memo.find(idx);
    if (it == memo.end())
      it = memo.emplace(idx, best_grover_prefix(cost, candidates[idx], p)).first;
    return it->second;
  };

  int lo = 0, hi = static_cast<int>(candidates.size()) - 1;
  while (hi - lo > 4) {
    const int m1 = lo + (hi - lo) / 3;
    const int m2 = hi - (hi - lo) / 3;
    const double f1 = eval(m1).first;
    const double f2 = eval(m2).first;
    if (f1 < f2) lo = m1 + 1;
    else if (f1 > f2) hi = m2 - 1;
    else { lo = m1; hi = m2; }
  }
  for (int i = lo; i <= hi; ++i) eval(i);

  int best_idx = -1;
  for (const auto& [idx, val] : memo) {
    if (best_idx < 0 || val.first > memo[best_idx].first + 1e-15 ||
        (std::abs(val.first - memo[best_idx].first) <= 1e-15 &&
         candidates[idx] < candidates[best_idx]))
      best_idx = idx;
  }
  const int th = candidates[best_idx];
  const int p_star = memo[best_idx].second;
  return make_round(ctx, p, grover_th_schedule(p, p_star), th, p_star, true);
}

TunedRound find_threshold_exhaustive(
    const QaoaContext& ctx, int p, int prev_threshold, AngleStrategy strategy,
    const TunerConfig& config,
    const std::map<int, AngleSchedule>& prev_by_threshold,
    const std::optional<AngleSchedule>& incumbent_prev,
    std::map<int, AngleSchedule>* history_out) {
  const int th_hi = std::max(prev_threshold, ctx.cost.c_max - 1);
  std::optional<TunedRound> best;
  for (int th = prev_threshold; th <= th_hi; ++th) {
    std::optional<AngleSchedule> start;
    if (p > 1) {
      auto it = prev_by_threshold.find(th);
      if (it != prev_by_threshold.end()) start = extrapolate_angles(it->second);
      else if (incumbent_prev) start = extrapolate_angles(*incumbent_prev);
    }
    const std::uint64_t salt =
        splitmix64(static_cast<std::uint64_t>(p) * 1000003ull +
                   static_cast<std::uint64_t>(th + 2));
    TunedRound round;
    if (strategy == AngleStrategy::ExtrapolatedGd && start) {
      round = optimize_angles_gd(ctx, p, th, *start, config);
    } else if (strategy == AngleStrategy::RandomBasinHopping) {
      round = optimize_angles_basinhopping(ctx, p, th, std::nullopt, config, salt);
    } else {
      round = optimize_angles_basinhopping(ctx, p, th, start, config, salt);
    }
    if (history_out) (*history_out)[th] = round.schedule;
    if (!best || round.expectation > best->expectation + 1e-15) best = round;
  }
  return *best;
}

InductiveTuner::InductiveTuner(const QaoaContext& ctx, AngleStrategy strategy,
                               TunerConfig config)
    : ctx_(ctx), strategy_(strategy), config_(std::move(config)) {}

const TunedRound& InductiveTuner::next_round() {
  const int p = static_cast<int>(rounds_.size()) + 1;
  const TunedRound* prev = rounds_.empty() ? nullptr : &rounds_.back();
  TunedRound round;

  if (ctx_.variant.separator == SeparatorKind::Threshold &&
      ctx_.variant.mixer == MixerKind::Grover) {
    round = find_threshold_grover(ctx_, p, prev ? *prev->threshold : -1);
  } else if (ctx_.variant.separator == SeparatorKind::Threshold) {
    std::map<int, AngleSchedule> next_history;
    round = find_threshold_exhaustive(
        ctx_, p, prev ? *prev->threshold : -1, strategy_, config_,
        threshold_history_,
        prev ? std::optional<AngleSchedule>(prev->schedule) : std::nullopt,
        &next_history);
    threshold_history_ = std::move(next_history);
  } else {
    const std::uint64_t salt = splitmix64(static_cast<std::uint64_t>(p));
    if (!prev || strategy_ == AngleStrategy::RandomBasinHopping) {
      round = optimize_angles_basinhopping(ctx_, p, std::nullopt, std::nullopt,
                                           config_, salt);
    } else if (strategy_ == AngleStrategy::ExtrapolatedBasinHopping) {
      round = optimize_angles_basinhopping(
          ctx_, p, std::nullopt, extrapolate_angles(prev->schedule), config_, salt);
    } else {
      round = optimize_angles_gd(ctx_, p, std::nullopt,
                                 extrapolate_angles(prev->schedule), config_);
    }
  }

  // Monotone-quality floor: round p must reach at least the round p-1 value.
  // The padded schedule (previous angles plus a zero round) reproduces it
  // exactly, and gradient ascent from there can only go up.
  if (prev && round.expectation < prev->expectation) {
    AngleSchedule padded = prev->schedule;
    padded.betas.push_back(0.0);
    padded.gammas.push_back(0.0);
    const TunedRound fallback =
        optimize_angles_gd(ctx_, p, prev->threshold, padded, config_);
    if (fallback.expectation > round.expectation) round = fallback;
  }

  rounds_.push_back(std::move(round));
  return rounds_.back();
}

}  // namespace cqaoa
