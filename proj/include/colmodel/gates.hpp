// gates.hpp
// Partial-swap collision unitaries and the initial states of the models.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "colmodel/errors.hpp"
#include "colmodel/qstate.hpp"

namespace colmodel {

inline constexpr double half_pi = std::numbers::pi / 2.0;

// Dimensionless collision strength theta in [0, pi/2]. Values outside the
// range are rejected, never wrapped.
class SwapStrength {
 public:
  constexpr SwapStrength() = default;
  explicit SwapStrength(double theta) : theta_(theta) {
    if (!(theta >= 0.0 && theta <= half_pi))
      throw domain_error("collision strength " + std::to_string(theta) +
                         " outside [0, pi/2]");
  }

  constexpr double value() const noexcept { return theta_; }

  friend constexpr bool operator==(SwapStrength, SwapStrength) = default;

 private:
  double theta_ = 0.0;
};

// Ancilla temperature (k_B T / hbar omega_0) and frequency ratio omega / omega_0.
class ThermalSpec {
 public:
  static constexpr double default_omega_ratio = 5.0;

  ThermalSpec() = default;
  explicit ThermalSpec(double temperature, double omega_ratio = default_omega_ratio)
      : temperature_(temperature), omega_ratio_(omega_ratio) {
    if (!(temperature >= 0.0))
      throw domain_error("temperature " + std::to_string(temperature) + " must be >= 0");
    if (!(omega_ratio > 0.0) || !std::isfinite(omega_ratio))
      throw domain_error("omega_ratio " + std::to_string(omega_ratio) + " must be > 0");
  }

  double temperature() const noexcept { return temperature_; }
  double omega_ratio() const noexcept { return omega_ratio_; }

  // Ground-state population 1 / (1 + e^{-omega_ratio / T}); exactly 1 at T = 0.
  double ground_population() const {
    if (temperature_ == 0.0) return 1.0;
    return 1.0 / (1.0 + std::exp(-omega_ratio_ / temperature_));
  }

  friend bool operator==(const ThermalSpec&, const ThermalSpec&) = default;

 private:
  double temperature_ = 0.0;
  double omega_ratio_ = default_omega_ratio;
};

// cos(theta) I + i sin(theta) SWAP in the basis |00>, |01>, |10>, |11>.
inline UnitaryMatrix partial_swap(SwapStrength strength) {
  const double t = strength.value();
  const cplx phase = std::polar(1.0, t);
  const cplx c = std::cos(t);
  const cplx is = cplx{0.0, std::sin(t)};
  return UnitaryMatrix(Matrix{{phase, 0.0, 0.0, 0.0},
                              {0.0, c, is, 0.0},
                              {0.0, is, c, 0.0},
                              {0.0, 0.0, 0.0, phase}},
                       detail::trusted);
}

inline UnitaryMatrix swap_gate() {
  return UnitaryMatrix(Matrix{{1.0, 0.0, 0.0, 0.0},
                              {0.0, 0.0, 1.0, 0.0},
                              {0.0, 1.0, 0.0, 0.0},
                              {0.0, 0.0, 0.0, 1.0}},
                       detail::trusted);
}

// Gibbs state of H = omega sigma_z / 2 with sigma_z = |1><1| - |0><0|, so
// |0> is the ground state.
inline DensityMatrix thermal_state(const ThermalSpec& spec) {
  const double p0 = spec.ground_population();
  return DensityMatrix(Matrix{{p0, 0.0}, {0.0, 1.0 - p0}}, detail::trusted);
}

// The antipodal pair |+><+|, |-><-|.
inline std::pair<DensityMatrix, DensityMatrix> optimal_pair() {
  return {DensityMatrix(Matrix{{0.5, 0.5}, {0.5, 0.5}}, detail::trusted),
          DensityMatrix(Matrix{{0.5, -0.5}, {-0.5, 0.5}}, detail::trusted)};
}

}  // namespace colmodel
