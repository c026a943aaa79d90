#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace cqaoa {

enum class Ansatz { Log, Power };  // a*log(b*x + c)  |  a*x^b + c

std::string to_string(Ansatz a);
Ansatz ansatz_from_string(const std::string& s);

struct ScalingFit {
  Ansatz ansatz = Ansatz::Log;
  double a = 0.0, b = 0.0, c = 0.0;
  double residual = 0.0;  // weighted sum of squared residuals
  std::optional<std::pair<double, double>> b_ci;  // 95% CI (Power only)
  bool converged = false;
};

void to_json(nlohmann::json& j, const ScalingFit& f);
void from_json(const nlohmann::json& j, ScalingFit& f);

double fit_eval(const ScalingFit& fit, double x);

/// Weighted least squares (w = 1/stddev^2) via Levenberg-Marquardt from 20
/// seeded random starts; the best residual wins. Stddevs of 0 are floored at
/// 0.5 so weights stay finite.
ScalingFit fit_scaling(const std::vector<double>& xs,
                       const std::vector<double>& means,
                       const std::vector<double>& stddevs, Ansatz ansatz,
                       std::uint64_t seed = 12345);

}  // namespace cqaoa
