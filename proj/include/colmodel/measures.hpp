// measures.hpp
// Distinguishability and coherence of qubit states, and the discrete BLP
// accumulator built on them.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "colmodel/errors.hpp"
#include "colmodel/qstate.hpp"

namespace colmodel {

// Increments at or below this are treated as round-off, not backflow.
inline constexpr double eps_positive = 1e-12;
// N above this counts as non-Markovian for thresholds and revivals.
inline constexpr double eps_nm = 1e-6;

namespace detail {

// Lexicographic order on raw entries; fixes which operand is subtracted
// so the distance is bit-for-bit symmetric.
inline bool entries_less(const Matrix& a, const Matrix& b) {
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].real() != y[i].real()) return x[i].real() < y[i].real();
    if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag();
  }
  return false;
}

}  // namespace detail

// Half the trace norm of a - b.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw dimension_error("trace_distance: dimension mismatch");
  const bool swap = detail::entries_less(b.matrix(), a.matrix());
  const Matrix diff = swap ? b.matrix() - a.matrix() : a.matrix() - b.matrix();
  double sum = 0.0;
  for (double ev : hermitian_eigenvalues(diff)) sum += std::abs(ev);
  return 0.5 * sum;
}

// |<0|rho|1>|, half the l1 norm of coherence.
inline double coherence(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw dimension_error("coherence: expects a single-qubit state");
  return std::abs(rho(0, 1));
}

struct StepInterval {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const StepInterval&, const StepInterval&) = default;
};

struct NmResult {
  double N = 0.0;
  std::size_t n_used = 0;  // collisions consumed
  bool converged = false;
  std::vector<StepInterval> positive_intervals;
};

// Sum of the positive increments of a trace-distance sequence.
// distances[i] is the value after step first_step + i; the first entry is
// the reference and contributes no increment.
inline NmResult blp_measure(std::span<const double> distances, std::size_t first_step = 1,
                            bool converged = true) {
  NmResult res;
  res.converged = converged;
  res.n_used = distances.empty() ? 0 : distances.size() - 1;
  bool open = false;
  for (std::size_t i = 1; i < distances.size(); ++i) {
    const double inc = distances[i] - distances[i - 1];
    const std::size_t step = first_step + i;
    if (inc > eps_positive) {
      res.N += inc;
      if (open) {
        res.positive_intervals.back().end = step;
      } else {
        res.positive_intervals.push_back({step, step});
        open = true;
      }
    } else {
      open = false;
    }
  }
  return res;
}

struct CurvePoint {
  double param = 0.0;
  double N = 0.0;
};

struct ParamGap {
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const ParamGap&, const ParamGap&) = default;
};

// Maximal runs of points with N <= eps_nm that have a non-Markovian point on
// both sides. Expects the curve sorted by parameter.
inline std::vector<ParamGap> detect_revivals(std::span<const CurvePoint> curve) {
  std::vector<ParamGap> gaps;
  bool seen_positive = false;
  std::size_t i = 0;
  while (i < curve.size()) {
    if (curve[i].N > eps_nm) {
      seen_positive = true;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < curve.size() && !(curve[j + 1].N > eps_nm)) ++j;
    const bool closed = j + 1 < curve.size();
    if (seen_positive && closed) gaps.push_back({curve[i].param, curve[j].param});
    i = j + 1;
  }
  return gaps;
}

}  // namespace colmodel
