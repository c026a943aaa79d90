#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cqaoa/operators.hpp"

namespace cqaoa {

/// One of the six mixer/separator combinations, e.g. "Clique-Obj".
struct VariantSpec {
  MixerKind mixer = MixerKind::Clique;
  SeparatorKind separator = SeparatorKind::Objective;
};

std::string to_string(const VariantSpec& v);
VariantSpec variant_from_string(const std::string& s);
bool operator==(const VariantSpec& a, const VariantSpec& b);

/// The six named variants in the canonical comparison order.
std::vector<VariantSpec> all_variants();

/// Per-round angle arrays. Angles are normalized into [0, 2*pi).
struct AngleSchedule {
  std::vector<double> betas;
  std::vector<double> gammas;

  AngleSchedule() = default;
  AngleSchedule(std::vector<double> betas_, std::vector<double> gammas_);

  int rounds() const { return static_cast<int>(betas.size()); }
};

/// beta_i = gamma_i = pi for the first p_star rounds, 0 afterwards (the
/// Grover schedule with the overshoot guard already applied).
AngleSchedule grover_th_schedule(int p, int p_star);

struct RunResult {
  SubspaceState final_state;
  double expectation = 0.0;
  double approx_ratio = 0.0;
  std::vector<double> per_round_ratios;  // length p+1, [0] = Dicke state
};

/// (expectation, ratio) with the 0/0 convention ratio = 1 when c_max = 0.
std::pair<double, double> expectation_and_ratio(const SubspaceState& state,
                                                const CostVector& cost);

/// Precomputed per-instance context: subspace index, cost vector and the
/// (cached) mixer. Immutable; cheap to share between runs.
struct QaoaContext {
  ProblemInstance instance;
  VariantSpec variant;
  SubspaceIndex index;
  CostVector cost;
  std::shared_ptr<const MixerOperator> mixer;

  QaoaContext(ProblemInstance inst, VariantSpec var,
              MixerCache& cache = MixerCache::global());
};

/// The alternating evolution: from the Dicke state, apply the phase separator
/// then the mixer for rounds 1..p and record the ratio after every round.
RunResult run_qaoa(const QaoaContext& ctx, const AngleSchedule& schedule,
                   std::optional<int> threshold = std::nullopt);

/// Convenience overload building the context from scratch.
RunResult run_qaoa(const ProblemInstance& instance, const VariantSpec& variant,
                   const AngleSchedule& schedule,
                   std::optional<int> threshold = std::nullopt);

}  // namespace cqaoa
