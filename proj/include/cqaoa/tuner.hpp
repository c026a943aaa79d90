#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cqaoa/qaoa.hpp"

namespace cqaoa {

struct TunerConfig {
  int bh_iterations = 100;
  double bh_step_size = 0.5;          // uniform perturbation half-width
  double bh_temperature = 1.0;        // Metropolis acceptance temperature
  double bh_local_tol = 1e-6;         // gradient tolerance inside BH refinement
  int bh_local_max_iterations = 150;
  double gd_fd_step = 1e-6;           // central-difference step
  double gd_initial_step = 0.1;       // Armijo backtracking start
  double gd_convergence_tol = 1e-8;   // gradient-norm stopping tolerance
  int max_gd_iterations = 500;
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const TunerConfig& c);
void from_json(const nlohmann::json& j, TunerConfig& c);

struct TunedRound {
  int p = 0;
  AngleSchedule schedule;
  std::optional<int> threshold;
  std::optional<int> p_star;  // Grover-Th overshoot guard prefix
  double expectation = 0.0;
  double approx_ratio = 0.0;
  bool converged = true;
};

void to_json(nlohmann::json& j, const TunedRound& r);
void from_json(const nlohmann::json& j, TunedRound& r);

enum class AngleStrategy { ExtrapolatedGd, ExtrapolatedBasinHopping, RandomBasinHopping };

std::string to_string(AngleStrategy s);
AngleStrategy angle_strategy_from_string(const std::string& s);

/// Duplicate the last angle pair of a (p-1)-round schedule to seed round p.
AngleSchedule extrapolate_angles(const AngleSchedule& prev);

/// ascent on a scalar function of the flat angle vector
struct AscentResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

using ScalarFn = std::function<double(const std::vector<double>&)>;

/// Central finite-difference gradient (2-point per coordinate).
std::vector<double> fd_gradient(const ScalarFn& fn, const std::vector<double>& x,
                                double h);

/// 5-point-stencil gradient, used for self-consistency checks.
std::vector<double> fd_gradient_5point(const ScalarFn& fn,
                                       const std::vector<double>& x, double h);

/// Gradient ascent with Armijo backtracking; stops when the gradient norm
/// drops below tol, no ascent step can be found, or max_iter is reached.
AscentResult gradient_ascent(const ScalarFn& fn, std::vector<double> x0,
                             double fd_h, double initial_step, double tol,
                             int max_iter);

/// <H_C> as a function of a p-round schedule, flattened (beta_1..beta_p,
/// gamma_1..gamma_p).
double schedule_expectation(const QaoaContext& ctx,
                            const std::vector<double>& flat_angles,
                            std::optional<int> threshold);

TunedRound optimize_angles_gd(const QaoaContext& ctx, int p,
                              std::optional<int> threshold,
                              const AngleSchedule& start,
                              const TunerConfig& config);

/// Basin-hopping from a given start (random when absent). Deterministic for
/// a fixed (config.seed, seed_salt).
TunedRound optimize_angles_basinhopping(const QaoaContext& ctx, int p,
                                        std::optional<int> threshold,
                                        const std::optional<AngleSchedule>& start,
                                        const TunerConfig& config,
                                        std::uint64_t seed_salt = 0);

/// Exhaustive threshold sweep over [prev_threshold, c_max-1] for Clique-Th /
/// Ring-Th, re-optimizing angles per candidate. `prev_by_threshold` carries
/// each threshold's round-(p-1) schedule; tuned schedules for round p are
/// written back through `history_out` when non-null.
TunedRound find_threshold_exhaustive(
    const QaoaContext& ctx, int p, int prev_threshold, AngleStrategy strategy,
    const TunerConfig& config,
    const std::map<int, AngleSchedule>& prev_by_threshold = {},
    const std::optional<AngleSchedule>& incumbent_prev = std::nullopt,
    std::map<int, AngleSchedule>* history_out = nullptr);

/// Peak search over the unimodal ratio-vs-threshold profile for Grover-Th
/// with pi angles; p_star scanned exhaustively in [0, p] per candidate.
TunedRound find_threshold_grover(const QaoaContext& ctx, int p,
                                 int prev_threshold);

/// Closed-form <H_C> for Grover-Th with `applied` pi-rounds at threshold th
/// (amplitudes stay uniform within the marked/unmarked sets).
double grover_pi_expectation(const CostVector& cost, int threshold, int applied);

/// Drives the per-round inductive tuning for one (instance, variant) pair,
/// enforcing the monotone-quality floor across rounds.
class InductiveTuner {
 public:
  InductiveTuner(const QaoaContext& ctx, AngleStrategy strategy,
                 TunerConfig config);

  const TunedRound& next_round();
  const std::vector<TunedRound>& rounds() const { return rounds_; }

 private:
  const QaoaContext& ctx_;
  AngleStrategy strategy_;
  TunerConfig config_;
  std::vector<TunedRound> rounds_;
  std::map<int, AngleSchedule> threshold_history_;
};

}  // namespace cqaoa
