// csv.hpp
// CSV writers for the three result kinds, plus a trajectory reader.
//
// Every file opens with '#'-prefixed provenance lines (tool version,
// creation time, full configuration), then one header row. Floats are
// written with 17 significant digits so they read back bit-exactly.

#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "colmodel/config.hpp"
#include "colmodel/errors.hpp"
#include "colmodel/models.hpp"
#include "colmodel/sweep.hpp"

namespace colmodel {

inline constexpr std::string_view tool_version = "0.1.0";

inline std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Canonical "key = value" lines describing a model configuration.
inline std::vector<std::string> config_echo(const ModelConfig& cfg) {
  std::vector<std::string> out;
  auto kv = [&](std::string_view k, const std::string& v) {
    out.push_back(std::string(k) + " = " + v);
  };
  std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, DirectConfig>) {
          kv("model", "direct");
        } else {
          kv("model", "indirect");
          kv("kappa", format_double(c.kappa.value()));
        }
        kv("J", format_double(c.J.value()));
        kv("Omega", format_double(c.Omega.value()));
        kv("T", format_double(c.thermal.temperature()));
        kv("omega_ratio", format_double(c.thermal.omega_ratio()));
        kv("n_max", std::to_string(c.stop.n_max));
        kv("eps_settle", format_double(c.stop.eps_settle));
        kv("settle_window", std::to_string(c.stop.settle_window));
      },
      cfg);
  return out;
}

inline std::vector<std::string> config_echo(const SweepSpec& spec) {
  std::vector<std::string> out = config_echo(spec.base);
  auto axis = [](const Axis& a) {
    return a.name + " " + format_double(a.lo) + " " + format_double(a.hi) + " " +
           std::to_string(a.steps);
  };
  if (spec.axis1) out.push_back("axis1 = " + axis(*spec.axis1));
  if (spec.axis2) out.push_back("axis2 = " + axis(*spec.axis2));
  std::string outputs;
  for (const auto& o : spec.outputs) outputs += (outputs.empty() ? "" : " ") + o;
  out.push_back("outputs = " + outputs);
  out.push_back("search = " + std::string(to_string(spec.search.param)));
  out.push_back("search_lo = " + format_double(spec.search.lo));
  out.push_back("search_hi = " + format_double(spec.search.hi));
  out.push_back("resolution = " + format_double(spec.search.resolution));
  return out;
}

struct Provenance {
  std::string timestamp = utc_timestamp();
  std::string kind;  // trajectory, sweep or threshold
  std::vector<std::string> config;
};

namespace detail {

inline void write_provenance(std::ostream& os, const Provenance& p) {
  os << "# colmodel " << tool_version << ' ' << p.kind << '\n';
  os << "# created " << p.timestamp << '\n';
  for (const auto& line : p.config) os << "# " << line << '\n';
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 Provenance prov = {}) {
  prov.kind = "trajectory";
  if (prov.config.empty()) prov.config = config_echo(traj.config);
  prov.config.push_back("converged = " + std::string(traj.converged ? "true" : "false"));
  prov.config.push_back("steps_run = " + std::to_string(traj.steps_run));
  detail::write_provenance(os, prov);
  os << "n,D,dD,C_S,C_R,pop_S\n";
  for (const auto& r : traj.records)
    os << r.n << ',' << format_double(r.D) << ',' << format_double(r.dD) << ','
       << format_double(r.C_S) << ',' << format_double(r.C_R) << ',' << format_double(r.pop_S)
       << '\n';
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result, Provenance prov = {}) {
  prov.kind = "sweep";
  if (prov.config.empty()) prov.config = config_echo(result.spec);
  detail::write_provenance(os, prov);
  for (const auto& ax : result.spec.axes()) os << ax.name << ',';
  os << "N,converged,n_used,status\n";
  for (const auto& row : result.rows) {
    for (double c : row.coords) os << format_double(c) << ',';
    os << format_double(row.N) << ',' << (row.converged ? 1 : 0) << ',' << row.n_used << ','
       << to_string(row.status) << '\n';
  }
}

inline void write_threshold_csv(std::ostream& os, const SweepSpec& spec,
                                const std::vector<ThresholdRow>& rows, Provenance prov = {}) {
  prov.kind = "threshold";
  if (prov.config.empty()) prov.config = config_echo(spec);
  detail::write_provenance(os, prov);
  const std::string p(to_string(spec.search.param));
  os << "T," << p << "_threshold," << p << "_lo," << p << "_hi,resolved\n";
  for (const auto& r : rows)
    os << format_double(r.T) << ',' << format_double(r.result.threshold) << ','
       << format_double(r.result.lo) << ',' << format_double(r.result.hi) << ','
       << (r.result.resolved ? 1 : 0) << '\n';
}

// Writes through a temporary sibling and renames it into place, so an
// interrupted run never leaves a partial file at `path`.
template <typename Writer>
void write_file_atomic(const std::filesystem::path& path, Writer&& writer) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("cannot open '" + tmp.string() + "' for writing");
    writer(os);
    os.flush();
    if (!os) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw io_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw io_error("cannot move output into '" + path.string() + "'");
  }
}

inline void export_csv(const Trajectory& traj, const std::filesystem::path& path,
                       const Provenance& prov = {}) {
  write_file_atomic(path, [&](std::ostream& os) { write_trajectory_csv(os, traj, prov); });
}

inline void export_csv(const SweepResult& result, const std::filesystem::path& path,
                       const Provenance& prov = {}) {
  write_file_atomic(path, [&](std::ostream& os) { write_sweep_csv(os, result, prov); });
}

// Reads the records back from a trajectory CSV written by export_csv.
inline std::vector<StepRecord> read_trajectory_csv(std::istream& is) {
  std::vector<StepRecord> out;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "n,D,dD,C_S,C_R,pop_S")
        throw io_error("line " + std::to_string(line_no) + ": unexpected trajectory header");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 6)
      throw io_error("line " + std::to_string(line_no) + ": expected 6 columns");
    StepRecord r;
    auto num = [&](std::string_view s, double& v) {
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size())
        throw io_error("line " + std::to_string(line_no) + ": malformed number '" +
                       std::string(s) + "'");
    };
    {
      const auto [p, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), r.n);
      if (ec != std::errc()) throw io_error("line " + std::to_string(line_no) + ": malformed n");
    }
    num(cells[1], r.D);
    num(cells[2], r.dD);
    num(cells[3], r.C_S);
    num(cells[4], r.C_R);
    num(cells[5], r.pop_S);
    out.push_back(r);
  }
  if (!header_seen) throw io_error("trajectory CSV has no header row");
  return out;
}

inline std::vector<StepRecord> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open '" + path.string() + "'");
  return read_trajectory_csv(is);
}

}  // namespace colmodel
