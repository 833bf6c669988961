// sweep.hpp
// Grid evaluation of the non-Markovianity over one or two parameters, and
// per-temperature threshold tracing.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "colmodel/config.hpp"
#include "colmodel/errors.hpp"
#include "colmodel/models.hpp"
#include "colmodel/nonmarkovianity.hpp"
#include "colmodel/parallel.hpp"

namespace colmodel {

enum class RowStatus { ok, unconverged, integrity_error };

inline std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::unconverged: return "unconverged";
    case RowStatus::integrity_error: return "integrity_error";
  }
  return "?";
}

struct SweepRow {
  std::vector<double> coords;  // one value per axis, axis1 first
  double N = 0.0;
  bool converged = false;
  std::size_t n_used = 0;
  RowStatus status = RowStatus::ok;
  std::string message;  // integrity error text, empty otherwise
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // row-major: axis1 outer, axis2 inner
};

// Applies one named grid coordinate to a model configuration.
inline ModelConfig with_parameter(const ModelConfig& cfg, const std::string& name, double value) {
  if (name == "T") return with_temperature(cfg, value);
  const auto s = strength_from_string(name);
  if (!s) throw domain_error("unknown parameter '" + name + "'");
  return with_strength(cfg, *s, value);
}

inline SweepRow evaluate_point(const ModelConfig& cfg, std::vector<double> coords) {
  SweepRow row;
  row.coords = std::move(coords);
  try {
    const NmResult nm = blp_measure(run_model(cfg));
    row.N = nm.N;
    row.converged = nm.converged;
    row.n_used = nm.n_used;
    row.status = nm.converged ? RowStatus::ok : RowStatus::unconverged;
  } catch (const integrity_error& e) {
    row.N = 0.0;
    row.converged = false;
    row.n_used = e.step();
    row.status = RowStatus::integrity_error;
    row.message = e.what();
  }
  return row;
}

// Evaluates every grid point independently on up to `jobs` threads. Row
// order is fixed by the grid, never by completion order.
inline SweepResult run_sweep(const SweepSpec& spec, std::size_t jobs = 1) {
  if (!spec.axis1) throw config_error("sweep requires axis1");
  const std::vector<double> xs = spec.axis1->values();
  const std::vector<double> ys = spec.axis2 ? spec.axis2->values() : std::vector<double>{};
  const std::size_t inner = spec.axis2 ? ys.size() : 1;

  SweepResult result{spec, std::vector<SweepRow>(xs.size() * inner)};
  parallel_for(result.rows.size(), jobs, [&](std::size_t idx) {
    const std::size_t i = idx / inner;
    const std::size_t j = idx % inner;
    ModelConfig cfg = with_parameter(spec.base, spec.axis1->name, xs[i]);
    std::vector<double> coords{xs[i]};
    if (spec.axis2) {
      cfg = with_parameter(cfg, spec.axis2->name, ys[j]);
      coords.push_back(ys[j]);
    }
    result.rows[idx] = evaluate_point(cfg, std::move(coords));
  });
  return result;
}

struct ThresholdRow {
  double T = 0.0;
  ThresholdResult result;
};

// One threshold search per temperature on axis1 (which must be T). Points
// where the bracket precondition fails come back unresolved.
inline std::vector<ThresholdRow> trace_threshold_curve(const SweepSpec& spec, std::size_t jobs = 1) {
  if (!spec.axis1 || spec.axis1->name != "T")
    throw config_error("threshold tracing requires axis1 = T <lo> <hi> <steps>");
  if (spec.axis2) throw config_error("threshold tracing takes a single axis");
  const std::string searched(to_string(spec.search.param));
  if (spec.fixed.contains(searched))
    throw config_error("the searched parameter " + searched + " must not be fixed");

  const std::vector<double> temps = spec.axis1->values();
  std::vector<ThresholdRow> rows(temps.size());
  parallel_for(temps.size(), jobs, [&](std::size_t i) {
    const ModelConfig cfg = with_temperature(spec.base, temps[i]);
    rows[i] = {temps[i], find_threshold(cfg, spec.search.param, spec.search.lo, spec.search.hi,
                                        spec.search.resolution)};
  });
  return rows;
}

}  // namespace colmodel
