#include "cqaoa/fit.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "cqaoa/graph.hpp"

namespace cqaoa {

std::string to_string(Ansatz a) {
  return a == Ansatz::Log ? "log" : "power";
}

Ansatz ansatz_from_string(const std::string& s) {
  if (s == "log") return Ansatz::Log;
  if (s == "power") return Ansatz::Power;
  throw std::invalid_argument("unknown ansatz: " + s);
}

void to_json(nlohmann::json& j, const ScalingFit& f) {
  j = nlohmann::json{{"ansatz", to_string(f.ansatz)}, {"a", f.a},  {"b", f.b},
                     {"c", f.c},                      {"residual", f.residual},
                     {"converged", f.converged}};
  if (f.b_ci) j["b_ci"] = {f.b_ci->first, f.b_ci->second};
}

void from_json(const nlohmann::json& j, ScalingFit& f) {
  f = ScalingFit{};
  f.ansatz = ansatz_from_string(j.at("ansatz").get<std::string>());
  j.at("a").get_to(f.a);
  j.at("b").get_to(f.b);
  j.at("c").get_to(f.c);
  j.at("residual").get_to(f.residual);
  j.at("converged").get_to(f.converged);
  if (j.contains("b_ci"))
    f.b_ci = std::make_pair(j["b_ci"][0].get<double>(), j["b_ci"][1].get<double>());
}

namespace {

bool valid_params(Ansatz ansatz, const Eigen::Vector3d& t,
                  const std::vector<double>& xs) {
  if (ansatz == Ansatz::Log) {
    for (double x : xs)
      if (t[1] * x + t[2] <= 1e-12) return false;
  }
  return std::isfinite(t[0]) && std::isfinite(t[1]) && std::isfinite(t[2]);
}

double model(Ansatz ansatz, const Eigen::Vector3d& t, double x) {
  return ansatz == Ansatz::Log ? t[0] * std::log(t[1] * x + t[2])
                               : t[0] * std::pow(x, t[1]) + t[2];
}

Eigen::Vector3d model_grad(Ansatz ansatz, const Eigen::Vector3d& t, double x) {
  Eigen::Vector3d g;
  if (ansatz == Ansatz::Log) {
    const double u = t[1] * x + t[2];
    g << std::log(u), t[0] * x / u, t[0] / u;
  } else {
    const double xb = std::pow(x, t[1]);
    g << xb, t[0] * xb * std::log(x), 1.0;
  }
  return g;
}

double weighted_ssr(Ansatz ansatz, const Eigen::Vector3d& t,
                    const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& ws) {
  if (!valid_params(ansatz, t, xs)) return std::numeric_limits<double>::infinity();
  double s = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - model(ansatz, t, xs[i]);
    s += ws[i] * r * r;
  }
  return s;
}

struct LmResult {
  Eigen::Vector3d theta;
  double ssr;
  bool converged;
};

LmResult levenberg_marquardt(Ansatz ansatz, Eigen::Vector3d theta,
                             const std::vector<double>& xs,
                             const std::vector<double>& ys,
                             const std::vector<double>& ws) {
  double ssr = weighted_ssr(ansatz, theta, xs, ys, ws);
  if (!std::isfinite(ssr)) return {theta, ssr, false};
  double lambda = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Eigen::Vector3d g = model_grad(ansatz, theta, xs[i]);
      const double r = ys[i] - model(ansatz, theta, xs[i]);
      jtj += ws[i] * g * g.transpose();
      jtr += ws[i] * r * g;
    }
    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::Matrix3d lhs = jtj;
      lhs.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::Vector3d delta = lhs.ldlt().solve(jtr);
      const Eigen::Vector3d cand = theta + delta;
      const double cand_ssr = weighted_ssr(ansatz, cand, xs, ys, ws);
      if (cand_ssr < ssr) {
        if (ssr - cand_ssr < 1e-14 * (1.0 + ssr) && delta.norm() < 1e-10)
          converged = true;
        theta = cand;
        ssr = cand_ssr;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) {
      converged = true;
      break;
    }
    if (converged) break;
  }
  return {theta, ssr, converged};
}

}  // namespace

double fit_eval(const ScalingFit& fit, double x) {
  return model(fit.ansatz, Eigen::Vector3d(fit.a, fit.b, fit.c), x);
}

ScalingFit fit_scaling(const std::vector<double>& xs,
                       const std::vector<double>& means,
                       const std::vector<double>& stddevs, Ansatz ansatz,
                       std::uint64_t seed) {
  if (xs.size() < 4 || xs.size() != means.size() || xs.size() != stddevs.size())
    throw std::invalid_argument("fit_scaling: need >= 4 aligned data points");
  std::vector<double> ws(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double s = std::max(stddevs[i], 0.5);  // weight floor
    ws[i] = 1.0 / (s * s);
  }

  std::mt19937_64 rng(splitmix64(seed));
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };

  LmResult best{Eigen::Vector3d::Zero(), std::numeric_limits<double>::infinity(),
                false};
  for (int s = 0; s < 20; ++s) {
    Eigen::Vector3d start;
    if (ansatz == Ansatz::Log)
      start << uni(0.1, 20.0), uni(0.1, 10.0), uni(0.5, 20.0);
    else
      start << uni(0.01, 20.0), uni(0.01, 3.0), uni(-10.0, 10.0);
    const LmResult r = levenberg_marquardt(ansatz, start, xs, means, ws);
    if (r.ssr < best.ssr) best = r;
  }

  ScalingFit fit;
  fit.ansatz = ansatz;
  fit.a = best.theta[0];
  fit.b = best.theta[1];
  fit.c = best.theta[2];
  fit.residual = best.ssr;
  fit.converged = best.converged && std::isfinite(best.ssr);
  if (ansatz == Ansatz::Power && xs.size() > 3) {
    // Linearized covariance at the optimum; normal 95% interval on b.
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Eigen::Vector3d g = model_grad(ansatz, best.theta, xs[i]);
      jtj += ws[i] * g * g.transpose();
    }
    const double sigma2 =
        best.ssr / static_cast<double>(xs.size() - 3);
    const Eigen::Matrix3d cov = sigma2 * jtj.inverse();
    const double half = 1.959963984540054 * std::sqrt(std::max(cov(1, 1), 0.0));
    fit.b_ci = std::make_pair(fit.b - half, fit.b + half);
  }
  return fit;
}

}  // namespace cqaoa
