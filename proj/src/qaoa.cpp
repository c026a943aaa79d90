#include "cqaoa/qaoa.hpp"

#include <cmath>
#include <numbers>

namespace cqaoa {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}
}  // namespace

std::string to_string(const VariantSpec& v) {
  return to_string(v.mixer) + "-" + to_string(v.separator);
}

VariantSpec variant_from_string(const std::string& s) {
  const auto dash = s.find('-');
  if (dash == std::string::npos)
    throw std::invalid_argument("variant must look like Clique-Obj: " + s);
  VariantSpec v;
  v.mixer = mixer_kind_from_string(s.substr(0, dash));
  const std::string sep = s.substr(dash + 1);
  if (sep == "Obj") v.separator = SeparatorKind::Objective;
  else if (sep == "Th") v.separator = SeparatorKind::Threshold;
  else throw std::invalid_argument("unknown separator: " + sep);
  return v;
}

bool operator==(const VariantSpec& a, const VariantSpec& b) {
  return a.mixer == b.mixer && a.separator == b.separator;
}

std::vector<VariantSpec> all_variants() {
  return {{MixerKind::Clique, SeparatorKind::Objective},
          {MixerKind::Clique, SeparatorKind::Threshold},
          {MixerKind::Ring, SeparatorKind::Objective},
          {MixerKind::Ring, SeparatorKind::Threshold},
          {MixerKind::Grover, SeparatorKind::Objective},
          {MixerKind::Grover, SeparatorKind::Threshold}};
}

AngleSchedule::AngleSchedule(std::vector<double> betas_, std::vector<double> gammas_)
    : betas(std::move(betas_)), gammas(std::move(gammas_)) {
  if (betas.size() != gammas.size())
    throw std::invalid_argument("AngleSchedule: beta/gamma length mismatch");
  for (auto& b : betas) b = normalize_angle(b);
  for (auto& g : gammas) g = normalize_angle(g);
}

AngleSchedule grover_th_schedule(int p, int p_star) {
  if (p_star < 0 || p_star > p)
    throw std::invalid_argument("grover_th_schedule: need 0 <= p_star <= p");
  std::vector<double> betas(p, 0.0), gammas(p, 0.0);
  for (int i = 0; i < p_star; ++i) betas[i] = gammas[i] = std::numbers::pi;
  return AngleSchedule(std::move(betas), std::move(gammas));
}

std::pair<double, double> expectation_and_ratio(const SubspaceState& state,
                                                const CostVector& cost) {
  if (state.amplitudes.size() != static_cast<Eigen::Index>(cost.dim()))
    throw std::invalid_argument("expectation_and_ratio: dimension mismatch");
  double e = 0.0;
  for (Eigen::Index r = 0; r < state.amplitudes.size(); ++r)
    e += cost.values[r] * std::norm(state.amplitudes[r]);
  const double ratio = cost.c_max == 0 ? 1.0 : e / cost.c_max;
  return {e, ratio};
}

QaoaContext::QaoaContext(ProblemInstance inst, VariantSpec var, MixerCache& cache)
    : instance(std::move(inst)),
      variant(var),
      index(instance.n(), instance.k),
      cost(build_cost_vector(instance, index)),
      mixer(cache.get(var.mixer, index)) {}

RunResult run_qaoa(const QaoaContext& ctx, const AngleSchedule& schedule,
                   std::optional<int> threshold) {
  if (ctx.variant.separator == SeparatorKind::Threshold && !threshold)
    throw std::invalid_argument("run_qaoa: threshold separator needs a threshold");
  RunResult result;
  SubspaceState state = dicke_state(ctx.index);
  result.per_round_ratios.reserve(schedule.rounds() + 1);
  result.per_round_ratios.push_back(expectation_and_ratio(state, ctx.cost).second);
  for (int i = 0; i < schedule.rounds(); ++i) {
    apply_phase_separator(state, ctx.variant.separator, ctx.cost,
                          schedule.gammas[i], threshold);
    apply_mixer(state, *ctx.mixer, schedule.betas[i]);
    result.per_round_ratios.push_back(expectation_and_ratio(state, ctx.cost).second);
  }
  std::tie(result.expectation, result.approx_ratio) =
      expectation_and_ratio(state, ctx.cost);
  result.final_state = std::move(state);
  return result;
}

RunResult run_qaoa(const ProblemInstance& instance, const VariantSpec& variant,
                   const AngleSchedule& schedule, std::optional<int> threshold) {
  QaoaContext ctx(instance, variant);
  return run_qaoa(ctx, schedule, threshold);
}

}  // namespace cqaoa
