// models.hpp
// Direct and indirect qubit collision models, evolved for the antipodal
// pair of initial system states, plus a brute-force full-chain oracle.
//
// Direct register per step:   (S, R_n, R_{n+1})
//   U_{S R_n}(J), then V_{R_n R_{n+1}}(Omega), then trace out R_n.
// Indirect register per step: (S, S', R_n, R_{n+1})
//   U_{S S'}(kappa), U_{S' R_n}(J), V_{R_n R_{n+1}}(Omega), then trace out R_n.
//
// No free evolution is applied between collisions. On resonance it is a
// local phase rotation and leaves every recorded observable unchanged.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "colmodel/errors.hpp"
#include "colmodel/gates.hpp"
#include "colmodel/measures.hpp"
#include "colmodel/qstate.hpp"

namespace colmodel {

// When to stop iterating: after n_max collisions, or once D and |dD| have
// both stayed below eps_settle for settle_window consecutive collisions.
struct StopPolicy {
  std::size_t n_max = 3000;
  double eps_settle = 1e-7;
  std::size_t settle_window = 50;

  void validate() const {
    if (settle_window < 1) throw domain_error("settle_window must be >= 1");
    if (n_max < settle_window) throw domain_error("n_max must be >= settle_window");
    if (!(eps_settle > 0.0)) throw domain_error("eps_settle must be > 0");
  }

  friend bool operator==(const StopPolicy&, const StopPolicy&) = default;
};

struct DirectConfig {
  SwapStrength J;
  SwapStrength Omega;
  ThermalSpec thermal;
  StopPolicy stop;

  friend bool operator==(const DirectConfig&, const DirectConfig&) = default;
};

struct IndirectConfig {
  SwapStrength kappa;
  SwapStrength J;
  SwapStrength Omega;
  ThermalSpec thermal;
  StopPolicy stop;

  friend bool operator==(const IndirectConfig&, const IndirectConfig&) = default;
};

using ModelConfig = std::variant<DirectConfig, IndirectConfig>;

// Observables after collision n. C_R is the coherence of the newest
// ancilla R_{n+1}, taken from the first member of the pair.
struct StepRecord {
  std::size_t n = 0;
  double D = 0.0;
  double dD = 0.0;
  double C_S = 0.0;
  double C_R = 0.0;
  double pop_S = 0.0;  // excited-state population of S

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

// records[0] is the pre-collision reference (n = 0, D = 1); records[i] is
// collision i, so records.size() == steps_run + 1.
struct Trajectory {
  ModelConfig config;
  std::vector<StepRecord> records;
  bool converged = false;
  std::size_t steps_run = 0;
};

// Joint states evolved from |+> and |-> respectively.
struct StatePair {
  DensityMatrix first;
  DensityMatrix second;
};

struct StepOutcome {
  StatePair states;
  StepRecord record;
};

namespace detail {

inline void verify_state(const DensityMatrix& rho, std::size_t step, const char* what,
                         bool positivity) {
  const StateCheck c = check_state(rho.matrix(), positivity);
  if (!c.ok()) throw integrity_error(std::string(what) + ": " + c.describe(), step);
}

inline constexpr double record_tol = 1e-9;

inline void verify_record(const StepRecord& r) {
  auto in = [](double x, double hi) { return x >= -record_tol && x <= hi + record_tol; };
  if (!in(r.D, 1.0)) throw integrity_error("trace distance outside [0, 1]", r.n);
  if (!in(r.C_S, 0.5)) throw integrity_error("system coherence outside [0, 0.5]", r.n);
  if (!in(r.C_R, 0.5)) throw integrity_error("ancilla coherence outside [0, 0.5]", r.n);
}

inline StepRecord make_record(std::size_t n, const DensityMatrix& s1, const DensityMatrix& s2,
                              const DensityMatrix& r1, const StepRecord& previous) {
  StepRecord rec;
  rec.n = n;
  rec.D = trace_distance(s1, s2);
  rec.dD = rec.D - previous.D;
  rec.C_S = coherence(s1);
  rec.C_R = coherence(r1);
  rec.pop_S = s1(1, 1).real();
  verify_record(rec);
  return rec;
}

inline StepRecord initial_record(const DensityMatrix& fresh) {
  const auto [plus, minus] = optimal_pair();
  StepRecord rec;
  rec.n = 0;
  rec.D = trace_distance(plus, minus);
  rec.C_S = coherence(plus);
  rec.C_R = coherence(fresh);
  rec.pop_S = plus(1, 1).real();
  return rec;
}

}  // namespace detail

// One direct-model collision for both pair members. Inputs are states of
// (S, R_n); outputs are states of (S, R_{n+1}).
inline StepOutcome step_direct(const StatePair& pair, const DensityMatrix& fresh,
                               const DirectConfig& cfg, const StepRecord& previous) {
  if (pair.first.dim() != 4 || pair.second.dim() != 4)
    throw dimension_error("step_direct: pair states must be 4x4");
  if (fresh.dim() != 2) throw dimension_error("step_direct: fresh ancilla must be 2x2");
  const std::size_t n = previous.n + 1;
  const UnitaryMatrix u = partial_swap(cfg.J);
  const UnitaryMatrix v = partial_swap(cfg.Omega);

  auto evolve = [&](const DensityMatrix& s) {
    DensityMatrix joint = tensor(s, fresh);
    joint = apply_two_qubit(joint, u, 0, 1);
    joint = apply_two_qubit(joint, v, 1, 2);
    detail::verify_state(joint, n, "direct joint state", false);
    DensityMatrix out = partial_trace(joint, 3, 1);
    detail::verify_state(out, n, "direct reduced state", true);
    return out;
  };

  StatePair next{evolve(pair.first), evolve(pair.second)};
  StepRecord rec = detail::make_record(n, partial_trace(next.first, 2, 1),
                                       partial_trace(next.second, 2, 1),
                                       partial_trace(next.first, 2, 0), previous);
  return {std::move(next), rec};
}

// One indirect-model collision. Inputs are states of (S, S', R_n); outputs
// are states of (S, S', R_{n+1}).
inline StepOutcome step_indirect(const StatePair& pair, const DensityMatrix& fresh,
                                 const IndirectConfig& cfg, const StepRecord& previous) {
  if (pair.first.dim() != 8 || pair.second.dim() != 8)
    throw dimension_error("step_indirect: pair states must be 8x8");
  if (fresh.dim() != 2) throw dimension_error("step_indirect: fresh ancilla must be 2x2");
  const std::size_t n = previous.n + 1;
  const UnitaryMatrix uk = partial_swap(cfg.kappa);
  const UnitaryMatrix uj = partial_swap(cfg.J);
  const UnitaryMatrix v = partial_swap(cfg.Omega);

  auto evolve = [&](const DensityMatrix& s) {
    DensityMatrix joint = tensor(s, fresh);
    joint = apply_two_qubit(joint, uk, 0, 1);
    joint = apply_two_qubit(joint, uj, 1, 2);
    joint = apply_two_qubit(joint, v, 2, 3);
    detail::verify_state(joint, n, "indirect joint state", false);
    DensityMatrix out = partial_trace(joint, 4, 2);
    detail::verify_state(out, n, "indirect reduced state", true);
    return out;
  };

  StatePair next{evolve(pair.first), evolve(pair.second)};
  auto system_of = [](const DensityMatrix& rho) {
    return partial_trace(partial_trace(rho, 3, 2), 2, 1);
  };
  auto ancilla_of = [](const DensityMatrix& rho) {
    return partial_trace(partial_trace(rho, 3, 0), 2, 0);
  };
  StepRecord rec = detail::make_record(n, system_of(next.first), system_of(next.second),
                                       ancilla_of(next.first), previous);
  return {std::move(next), rec};
}

namespace detail {

inline void validate_config(const ModelConfig& cfg) {
  std::visit([](const auto& c) { c.stop.validate(); }, cfg);
}

inline const ThermalSpec& thermal_of(const ModelConfig& cfg) {
  return std::visit([](const auto& c) -> const ThermalSpec& { return c.thermal; }, cfg);
}

inline const StopPolicy& stop_of(const ModelConfig& cfg) {
  return std::visit([](const auto& c) -> const StopPolicy& { return c.stop; }, cfg);
}

}  // namespace detail

// Evolves both pair members against identical environments until the
// settle window is met or n_max collisions have run.
inline Trajectory run_model(const ModelConfig& cfg) {
  detail::validate_config(cfg);
  const DensityMatrix fresh = thermal_state(detail::thermal_of(cfg));
  const StopPolicy& stop = detail::stop_of(cfg);
  const auto [plus, minus] = optimal_pair();

  // Direct starts from rho_S (x) rho_R1; indirect adds S' in the ancilla state.
  const bool direct = std::holds_alternative<DirectConfig>(cfg);
  StatePair pair = direct ? StatePair{tensor(plus, fresh), tensor(minus, fresh)}
                          : StatePair{tensor(tensor(plus, fresh), fresh),
                                      tensor(tensor(minus, fresh), fresh)};

  Trajectory traj{cfg, {}, false, 0};
  traj.records.reserve(std::min<std::size_t>(stop.n_max + 1, 4096));
  traj.records.push_back(detail::initial_record(fresh));

  std::size_t quiet = 0;
  for (std::size_t n = 1; n <= stop.n_max; ++n) {
    StepOutcome out = direct
        ? step_direct(pair, fresh, std::get<DirectConfig>(cfg), traj.records.back())
        : step_indirect(pair, fresh, std::get<IndirectConfig>(cfg), traj.records.back());
    pair = std::move(out.states);
    traj.records.push_back(out.record);
    traj.steps_run = n;

    if (out.record.D < stop.eps_settle && std::abs(out.record.dD) < stop.eps_settle)
      ++quiet;
    else
      quiet = 0;
    if (quiet >= stop.settle_window) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

// Evolves S (and S') together with every ancilla, never tracing anything
// out, and reads the observables off the joint state. Exact because a
// discarded ancilla never interacts again. Uses dense embedded operators.
inline Trajectory full_chain_oracle(const ModelConfig& cfg, std::size_t n_collisions) {
  detail::validate_config(cfg);
  if (n_collisions > 8)
    throw capacity_error("full_chain_oracle: at most 8 collisions are supported");
  const bool direct = std::holds_alternative<DirectConfig>(cfg);
  const std::size_t final_qubits = n_collisions + (direct ? 2 : 3);
  if (final_qubits > max_qubits)
    throw capacity_error("full_chain_oracle: " + std::to_string(n_collisions) +
                         " collisions need " + std::to_string(final_qubits) +
                         " qubits, above the register cap");

  const DensityMatrix fresh = thermal_state(detail::thermal_of(cfg));
  const auto [plus, minus] = optimal_pair();

  UnitaryMatrix uk = UnitaryMatrix::identity(4);
  UnitaryMatrix uj = UnitaryMatrix::identity(4);
  UnitaryMatrix v = UnitaryMatrix::identity(4);
  if (direct) {
    const auto& c = std::get<DirectConfig>(cfg);
    uj = partial_swap(c.J);
    v = partial_swap(c.Omega);
  } else {
    const auto& c = std::get<IndirectConfig>(cfg);
    uk = partial_swap(c.kappa);
    uj = partial_swap(c.J);
    v = partial_swap(c.Omega);
  }

  DensityMatrix first = direct ? tensor(plus, fresh) : tensor(tensor(plus, fresh), fresh);
  DensityMatrix second = direct ? tensor(minus, fresh) : tensor(tensor(minus, fresh), fresh);
  // Qubit index of R_1 in the joint register.
  const std::size_t r_offset = direct ? 1 : 2;

  Trajectory traj{cfg, {}, false, 0};
  traj.records.push_back(detail::initial_record(fresh));

  for (std::size_t n = 1; n <= n_collisions; ++n) {
    const std::size_t rn = r_offset + n - 1;  // R_n
    const std::size_t k = rn + 2;             // after appending R_{n+1}
    auto evolve = [&](const DensityMatrix& rho) {
      DensityMatrix joint = tensor(rho, fresh);
      if (!direct) joint = conjugate(joint, embed_two_qubit(uk, k, 0, 1));
      joint = conjugate(joint, embed_two_qubit(uj, k, direct ? 0 : 1, rn));
      joint = conjugate(joint, embed_two_qubit(v, k, rn, rn + 1));
      detail::verify_state(joint, n, "oracle joint state", false);
      return joint;
    };
    first = evolve(first);
    second = evolve(second);
    traj.records.push_back(detail::make_record(n, reduce_to_qubit(first, 0),
                                               reduce_to_qubit(second, 0),
                                               reduce_to_qubit(first, rn + 1),
                                               traj.records.back()));
    traj.steps_run = n;
  }
  return traj;
}

}  // namespace colmodel
