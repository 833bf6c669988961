// config.hpp
// Line-based "key = value" run configuration.
//
//   # comment
//   model = indirect
//   kappa = 0.3
//   J = 0.5
//   axis1 = Omega 0 1.5707963267948966 64
//   axis2 = T 0 10 41
//
// Numbers may also be written as `pi/2` or `pi`. Unknown or repeated keys
// are rejected.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "colmodel/errors.hpp"
#include "colmodel/gates.hpp"
#include "colmodel/models.hpp"
#include "colmodel/nonmarkovianity.hpp"

namespace colmodel {

enum class ModelKind { direct, indirect };

inline std::string_view to_string(ModelKind m) {
  return m == ModelKind::direct ? "direct" : "indirect";
}

struct Axis {
  std::string name;  // J, Omega, kappa or T
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;

  // Evenly spaced grid; the last point is exactly hi.
  std::vector<double> values() const {
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i)
      v[i] = i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(steps - 1);
    return v;
  }

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct ThresholdSearch {
  Strength param = Strength::Omega;
  double lo = 0.0;
  double hi = half_pi;
  double resolution = default_threshold_resolution;
};

inline const std::set<std::string, std::less<>> known_outputs = {"N", "thresholds", "trajectory",
                                                                 "coherences"};

struct SweepSpec {
  ModelKind model = ModelKind::direct;
  std::map<std::string, double> fixed;  // parameters set explicitly in the document
  ModelConfig base;                     // defaults with `fixed` applied
  std::optional<Axis> axis1;
  std::optional<Axis> axis2;
  std::vector<std::string> outputs{"N"};
  ThresholdSearch search;
  std::size_t oracle_steps = 6;

  std::vector<Axis> axes() const {
    std::vector<Axis> a;
    if (axis1) a.push_back(*axis1);
    if (axis2) a.push_back(*axis2);
    return a;
  }
};

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;  // 0 for command-line overrides
};

using ConfigEntries = std::vector<ConfigEntry>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s == "pi") return std::numbers::pi;
  if (s == "pi/2") return half_pi;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

inline std::optional<std::size_t> parse_count(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::string word;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t' || ch == ',') {
      if (!word.empty()) out.push_back(std::move(word));
      word.clear();
    } else {
      word.push_back(ch);
    }
  }
  if (!word.empty()) out.push_back(std::move(word));
  return out;
}

inline const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "model",   "J",        "Omega",       "kappa",     "T",          "omega_ratio",
      "n_max",   "eps_settle", "settle_window", "axis1",   "axis2",      "outputs",
      "search",  "search_lo", "search_hi",  "resolution", "oracle_steps"};
  return keys;
}

}  // namespace detail

// Splits a document into entries; syntax errors carry their line number.
inline ConfigEntries parse_entries(std::string_view text) {
  ConfigEntries entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw config_error("expected 'key = value', got '" + std::string(line) + "'", line_no);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw config_error("missing key before '='", line_no);
    if (value.empty()) throw config_error("missing value for '" + key + "'", line_no);
    if (!detail::known_keys().contains(key))
      throw config_error("unknown key '" + key + "'", line_no);
    for (const auto& e : entries)
      if (e.key == key)
        throw config_error("key '" + key + "' repeated (first on line " +
                               std::to_string(e.line) + ")",
                           line_no);
    entries.push_back({key, value, line_no});
  }
  return entries;
}

// Applies a command-line "key=value" override, replacing any existing entry.
inline void apply_override(ConfigEntries& entries, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw config_error("override '" + std::string(assignment) + "' is not key=value");
  const std::string key(detail::trim(assignment.substr(0, eq)));
  const std::string value(detail::trim(assignment.substr(eq + 1)));
  if (!detail::known_keys().contains(key)) throw config_error("unknown key '" + key + "'");
  if (value.empty()) throw config_error("missing value for '" + key + "'");
  for (auto& e : entries)
    if (e.key == key) {
      e.value = value;
      e.line = 0;
      return;
    }
  entries.push_back({key, value, 0});
}

// Validates entries and fills in defaults (omega/omega_0 = 5, J = 0.3,
// Omega = 0, kappa = 0.3, T = 0, default stop policy).
inline SweepSpec build_spec(const ConfigEntries& entries, bool require_axis1 = true) {
  std::map<std::string, const ConfigEntry*, std::less<>> by_key;
  for (const auto& e : entries) by_key[e.key] = &e;
  auto find = [&](std::string_view k) -> const ConfigEntry* {
    auto it = by_key.find(k);
    return it == by_key.end() ? nullptr : it->second;
  };
  auto number = [&](const ConfigEntry& e) {
    auto v = detail::parse_number(e.value);
    if (!v) throw config_error("'" + e.key + "' expects a number, got '" + e.value + "'", e.line);
    return *v;
  };
  auto count = [&](const ConfigEntry& e) {
    auto v = detail::parse_count(e.value);
    if (!v)
      throw config_error("'" + e.key + "' expects a non-negative integer, got '" + e.value + "'",
                         e.line);
    return *v;
  };
  auto strength_in_range = [&](const std::string& key, double v, std::size_t line) {
    if (!(v >= 0.0 && v <= half_pi))
      throw config_error(key + " = " + std::to_string(v) + " outside legal range [0, pi/2]",
                         line);
  };

  SweepSpec spec;
  if (const auto* e = find("model")) {
    if (e->value == "direct")
      spec.model = ModelKind::direct;
    else if (e->value == "indirect")
      spec.model = ModelKind::indirect;
    else
      throw config_error("model must be 'direct' or 'indirect', got '" + e->value + "'", e->line);
  }

  double J = 0.3, Omega = 0.0, kappa = 0.3, T = 0.0, omega_ratio = ThermalSpec::default_omega_ratio;
  for (const char* key : {"J", "Omega", "kappa"}) {
    if (const auto* e = find(key)) {
      const double v = number(*e);
      strength_in_range(key, v, e->line);
      spec.fixed[key] = v;
    }
  }
  if (spec.model == ModelKind::direct && spec.fixed.contains("kappa"))
    throw config_error("kappa only applies to model = indirect", find("kappa")->line);
  if (const auto* e = find("T")) {
    T = number(*e);
    if (!(T >= 0.0)) throw config_error("T = " + e->value + " outside legal range [0, inf)", e->line);
    spec.fixed["T"] = T;
  }
  if (const auto* e = find("omega_ratio")) {
    omega_ratio = number(*e);
    if (!(omega_ratio > 0.0))
      throw config_error("omega_ratio = " + e->value + " outside legal range (0, inf)", e->line);
    spec.fixed["omega_ratio"] = omega_ratio;
  }
  if (auto it = spec.fixed.find("J"); it != spec.fixed.end()) J = it->second;
  if (auto it = spec.fixed.find("Omega"); it != spec.fixed.end()) Omega = it->second;
  if (auto it = spec.fixed.find("kappa"); it != spec.fixed.end()) kappa = it->second;

  StopPolicy stop;
  if (const auto* e = find("n_max")) stop.n_max = count(*e);
  if (const auto* e = find("settle_window")) stop.settle_window = count(*e);
  if (const auto* e = find("eps_settle")) stop.eps_settle = number(*e);
  try {
    stop.validate();
  } catch (const domain_error& err) {
    throw config_error(err.what());
  }

  const ThermalSpec thermal(T, omega_ratio);
  if (spec.model == ModelKind::direct)
    spec.base = DirectConfig{SwapStrength(J), SwapStrength(Omega), thermal, stop};
  else
    spec.base = IndirectConfig{SwapStrength(kappa), SwapStrength(J), SwapStrength(Omega), thermal,
                               stop};

  auto parse_axis = [&](const ConfigEntry& e) {
    const auto words = detail::split_words(e.value);
    if (words.size() != 4)
      throw config_error(e.key + " expects '<name> <lo> <hi> <steps>'", e.line);
    Axis ax;
    ax.name = words[0];
    if (ax.name != "J" && ax.name != "Omega" && ax.name != "kappa" && ax.name != "T")
      throw config_error(e.key + " name must be one of J, Omega, kappa, T; got '" + ax.name + "'",
                         e.line);
    const auto lo = detail::parse_number(words[1]);
    const auto hi = detail::parse_number(words[2]);
    const auto steps = detail::parse_count(words[3]);
    if (!lo || !hi || !steps) throw config_error(e.key + ": malformed number", e.line);
    ax.lo = *lo;
    ax.hi = *hi;
    ax.steps = *steps;
    if (!(ax.lo < ax.hi)) throw config_error(e.key + ": lo must be < hi", e.line);
    if (ax.steps < 2) throw config_error(e.key + ": steps must be >= 2", e.line);
    if (ax.name == "T") {
      if (ax.lo < 0.0) throw config_error(e.key + ": T outside legal range [0, inf)", e.line);
    } else {
      strength_in_range(e.key + " " + ax.name + " bound", ax.lo, e.line);
      strength_in_range(e.key + " " + ax.name + " bound", ax.hi, e.line);
    }
    if (ax.name == "kappa" && spec.model == ModelKind::direct)
      throw config_error(e.key + ": kappa only applies to model = indirect", e.line);
    if (spec.fixed.contains(ax.name))
      throw config_error(e.key + ": " + ax.name + " is also set as a fixed parameter", e.line);
    return ax;
  };
  if (const auto* e = find("axis1")) spec.axis1 = parse_axis(*e);
  if (const auto* e = find("axis2")) {
    if (!spec.axis1) throw config_error("axis2 given without axis1", e->line);
    spec.axis2 = parse_axis(*e);
    if (spec.axis2->name == spec.axis1->name)
      throw config_error("axis2 repeats the axis1 parameter", e->line);
  }
  if (require_axis1 && !spec.axis1) throw config_error("axis1 is required");

  if (const auto* e = find("outputs")) {
    spec.outputs = detail::split_words(e->value);
    if (spec.outputs.empty()) throw config_error("outputs is empty", e->line);
    for (const auto& o : spec.outputs)
      if (!known_outputs.contains(o))
        throw config_error("unknown output '" + o +
                               "' (expected N, thresholds, trajectory or coherences)",
                           e->line);
  }

  if (const auto* e = find("search")) {
    const auto p = strength_from_string(e->value);
    if (!p) throw config_error("search must be J, Omega or kappa", e->line);
    if (*p == Strength::kappa && spec.model == ModelKind::direct)
      throw config_error("search: kappa only applies to model = indirect", e->line);
    spec.search.param = *p;
  }
  if (const auto* e = find("search_lo")) {
    spec.search.lo = number(*e);
    strength_in_range("search_lo", spec.search.lo, e->line);
  }
  if (const auto* e = find("search_hi")) {
    spec.search.hi = number(*e);
    strength_in_range("search_hi", spec.search.hi, e->line);
  }
  if (spec.search.lo > spec.search.hi) throw config_error("search_lo must be <= search_hi");
  if (const auto* e = find("resolution")) {
    spec.search.resolution = number(*e);
    if (!(spec.search.resolution > 0.0))
      throw config_error("resolution outside legal range (0, inf)", e->line);
  }
  if (const auto* e = find("oracle_steps")) {
    spec.oracle_steps = count(*e);
    if (spec.oracle_steps < 1 || spec.oracle_steps > 8)
      throw config_error("oracle_steps outside legal range [1, 8]", e->line);
  }
  return spec;
}

inline SweepSpec parse_config(std::string_view text, bool require_axis1 = true) {
  return build_spec(parse_entries(text), require_axis1);
}

}  // namespace colmodel
