#pragma once
/**
 * @file trajectory_io.hpp
 * @brief Trajectory CSV files.
 *
 * Layout:
 *
 *   # rancher-trajectory v1 seed=<u64> mode=<direct|rejection> constants=<digest> steps=<N>
 *   n,x,y,d,hull_size,arc_len,trials,is_ladder,first_trial
 *   0,0,0,0,1,6.2831853071795862,1,false,
 *   ...
 *
 * Reals are written with 17 significant digits so a read-back reproduces the
 * in-memory records bit for bit. first_trial is empty in direct mode.
 */

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rancher/error.hpp"
#include "rancher/walk.hpp"

namespace rancher {

inline constexpr std::string_view kTrajectoryMagic = "# rancher-trajectory v1";
inline constexpr std::string_view kTrajectoryColumns =
    "n,x,y,d,hull_size,arc_len,trials,is_ladder,first_trial";

struct TrajectoryFile {
  Trajectory traj;
  std::string constants_digest;
};

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const Trajectory& traj, std::string_view digest) {
  os << kTrajectoryMagic << " seed=" << traj.seed << " mode=" << to_string(traj.mode)
     << " constants=" << digest << " steps=" << traj.n_steps() << '\n';
  os << kTrajectoryColumns << '\n';
  std::string line;
  for (std::size_t n = 0; n < traj.steps.size(); ++n) {
    const StepRecord& r = traj.steps[n];
    line.clear();
    line += std::to_string(n);
    line += ',' + format_real(r.pos.x);
    line += ',' + format_real(r.pos.y);
    line += ',' + format_real(r.d);
    line += ',' + std::to_string(r.hull_size);
    line += ',' + format_real(r.arc_len);
    line += ',' + std::to_string(r.trials);
    line += r.is_ladder ? ",true," : ",false,";
    if (r.first_trial) line += format_real(*r.first_trial);
    line += '\n';
    os << line;
  }
}

inline void write_csv_file(const std::string& path, const Trajectory& traj,
                           std::string_view digest) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  write_csv(os, traj, digest);
  if (!os) throw Error(ErrorKind::Io, "write failed on '" + path + "'");
}

namespace detail {

template <class T>
T parse_field(std::string_view s, const std::string& where) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Io, where + ": bad field '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Parse a trajectory file. `source` names the input in error messages.
inline TrajectoryFile read_csv(std::istream& is, const std::string& source = "<stream>") {
  TrajectoryFile out;
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return source + ":" + std::to_string(lineno); };

  if (!std::getline(is, line)) throw Error(ErrorKind::Io, source + ": empty file");
  ++lineno;
  if (line.rfind(kTrajectoryMagic, 0) != 0) {
    throw Error(ErrorKind::Io, where() + ": missing trajectory header");
  }
  std::size_t declared = 0;
  bool have_seed = false, have_mode = false, have_steps = false;
  std::istringstream header(line.substr(kTrajectoryMagic.size()));
  for (std::string kv; header >> kv;) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Io, where() + ": bad header token");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    if (key == "seed") {
      out.traj.seed = detail::parse_field<std::uint64_t>(val, where());
      have_seed = true;
    } else if (key == "mode") {
      try {
        out.traj.mode = parse_sampler_mode(val);
      } catch (const Error& e) {
        throw Error(ErrorKind::Io, where() + ": " + e.what());
      }
      have_mode = true;
    } else if (key == "constants") {
      out.constants_digest = val;
    } else if (key == "steps") {
      declared = detail::parse_field<std::size_t>(val, where());
      have_steps = true;
    }
  }
  if (!have_seed || !have_mode || !have_steps) {
    throw Error(ErrorKind::Io, where() + ": header lacks seed, mode or steps");
  }

  if (!std::getline(is, line)) throw Error(ErrorKind::Io, source + ": missing column row");
  ++lineno;
  if (line != kTrajectoryColumns) throw Error(ErrorKind::Io, where() + ": unexpected columns");

  auto& rows = out.traj.steps;
  rows.reserve(declared + 1);
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 9) throw Error(ErrorKind::Io, where() + ": expected 9 fields");
    const auto n = detail::parse_field<std::size_t>(f[0], where());
    if (n != rows.size()) throw Error(ErrorKind::Io, where() + ": step index out of sequence");
    StepRecord r;
    r.pos.x = detail::parse_field<double>(f[1], where());
    r.pos.y = detail::parse_field<double>(f[2], where());
    r.d = detail::parse_field<double>(f[3], where());
    r.hull_size = detail::parse_field<std::uint32_t>(f[4], where());
    r.arc_len = detail::parse_field<double>(f[5], where());
    r.trials = detail::parse_field<std::uint32_t>(f[6], where());
    if (f[7] == "true") {
      r.is_ladder = true;
    } else if (f[7] != "false") {
      throw Error(ErrorKind::Io, where() + ": is_ladder must be true or false");
    }
    if (!f[8].empty()) r.first_trial = detail::parse_field<double>(f[8], where());
    if (!r.pos.finite()) throw Error(ErrorKind::Io, where() + ": non-finite position");
    rows.push_back(r);
  }
  if (rows.size() != declared + 1) {
    throw Error(ErrorKind::Io, source + ": header declares " + std::to_string(declared) +
                                   " steps but " + std::to_string(rows.size()) + " rows follow");
  }
  return out;
}

inline TrajectoryFile read_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return read_csv(is, path);
}

}  // namespace rancher
