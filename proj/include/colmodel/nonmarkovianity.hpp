// nonmarkovianity.hpp
// BLP measure of a model trajectory and bisection search for the coupling
// strength at which memory effects switch on.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "colmodel/errors.hpp"
#include "colmodel/gates.hpp"
#include "colmodel/measures.hpp"
#include "colmodel/models.hpp"

namespace colmodel {

inline NmResult blp_measure(const Trajectory& traj) {
  std::vector<double> d;
  d.reserve(traj.records.size());
  for (const auto& r : traj.records) d.push_back(r.D);
  const std::size_t first = traj.records.empty() ? 0 : traj.records.front().n;
  NmResult res = blp_measure(d, first, traj.converged);
  res.n_used = traj.steps_run;
  return res;
}

inline double nonmarkovianity(const ModelConfig& cfg) { return blp_measure(run_model(cfg)).N; }

enum class Strength { J, Omega, kappa };

inline std::string_view to_string(Strength s) {
  switch (s) {
    case Strength::J: return "J";
    case Strength::Omega: return "Omega";
    case Strength::kappa: return "kappa";
  }
  return "?";
}

inline std::optional<Strength> strength_from_string(std::string_view name) {
  if (name == "J") return Strength::J;
  if (name == "Omega") return Strength::Omega;
  if (name == "kappa") return Strength::kappa;
  return std::nullopt;
}

// Copy of cfg with one collision strength replaced.
inline ModelConfig with_strength(ModelConfig cfg, Strength which, double value) {
  const SwapStrength s(value);
  if (auto* d = std::get_if<DirectConfig>(&cfg)) {
    switch (which) {
      case Strength::J: d->J = s; break;
      case Strength::Omega: d->Omega = s; break;
      case Strength::kappa: throw domain_error("the direct model has no kappa");
    }
  } else {
    auto& i = std::get<IndirectConfig>(cfg);
    switch (which) {
      case Strength::J: i.J = s; break;
      case Strength::Omega: i.Omega = s; break;
      case Strength::kappa: i.kappa = s; break;
    }
  }
  return cfg;
}

inline ModelConfig with_temperature(ModelConfig cfg, double temperature) {
  std::visit([&](auto& c) { c.thermal = ThermalSpec(temperature, c.thermal.omega_ratio()); }, cfg);
  return cfg;
}

struct ThresholdResult {
  std::string param_name;
  double threshold = std::numeric_limits<double>::quiet_NaN();  // NaN when unresolved
  double lo = 0.0;
  double hi = 0.0;
  bool resolved = false;
};

inline constexpr double default_threshold_resolution = 1e-3;

// Bisects on the indicator N > eps_nm. Requires N(lo) <= eps_nm and
// N(hi) > eps_nm; otherwise the result is unresolved and carries the input
// bracket. The indicator is assumed monotone inside the bracket only.
inline ThresholdResult find_threshold(const ModelConfig& base, Strength param, double lo,
                                      double hi,
                                      double resolution = default_threshold_resolution) {
  if (!(resolution > 0.0)) throw domain_error("find_threshold: resolution must be > 0");
  if (!(lo <= hi)) throw domain_error("find_threshold: bracket has lo > hi");
  // Validates both ends against [0, pi/2] and the model's parameter set.
  (void)with_strength(base, param, lo);
  (void)with_strength(base, param, hi);

  ThresholdResult res{std::string(to_string(param)), std::numeric_limits<double>::quiet_NaN(),
                      lo, hi, false};
  if (lo == hi) return res;
  auto active = [&](double x) { return nonmarkovianity(with_strength(base, param, x)) > eps_nm; };
  if (active(lo) || !active(hi)) return res;

  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (active(mid))
      hi = mid;
    else
      lo = mid;
  }
  res.lo = lo;
  res.hi = hi;
  res.threshold = 0.5 * (lo + hi);
  res.resolved = true;
  return res;
}

}  // namespace colmodel
