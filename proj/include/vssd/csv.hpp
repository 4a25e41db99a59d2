#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vssd/dynamics.hpp"
#include "vssd/errors.hpp"

namespace vssd {

/// Shortest round-trip decimal representation of a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr const char* kTrajectorySchema = "# halfcell-trajectory v1";
inline constexpr const char* kTrajectoryHeader =
    "t_s,I_A_per_m2,V_V,soc,ybar1_at_L,ybar2_at_L,ybar3_at_L,"
    "residual_norm,newton_iters,coulombs_As_per_m2,wall_clock_s";

/// Streaming trajectory writer (schema v1, header row with units).
class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(const std::string& path) : out_(path) {
    if (!out_) throw ConfigError("cannot open output file '" + path + "'");
    out_ << kTrajectorySchema << "\n" << kTrajectoryHeader << "\n";
  }

  void write(const TrajectorySample& s) {
    out_ << format_double(s.t) << ',' << format_double(s.current) << ','
         << format_double(s.voltage) << ',' << format_double(s.soc) << ','
         << format_double(s.ybar_at_collector[0]) << ','
         << format_double(s.ybar_at_collector[1]) << ','
         << format_double(s.ybar_at_collector[2]) << ','
         << format_double(s.residual_norm) << ',' << s.newton_iters << ','
         << format_double(s.coulombs) << ',' << format_double(s.wall_clock)
         << '\n';
  }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

/// Parses a trajectory CSV back into records; numeric fields round-trip
/// exactly (shortest-representation formatting).
inline std::vector<TrajectorySample> read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file '" + path + "'");
  std::vector<TrajectorySample> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kTrajectoryHeader)
        throw ConfigError("unexpected trajectory header: " + line);
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 11)
      throw ConfigError("trajectory row with " + std::to_string(fields.size()) +
                        " fields");
    TrajectorySample s;
    s.t = std::stod(fields[0]);
    s.current = std::stod(fields[1]);
    s.voltage = std::stod(fields[2]);
    s.soc = std::stod(fields[3]);
    for (int k = 0; k < 3; ++k) s.ybar_at_collector[k] = std::stod(fields[4 + k]);
    s.residual_norm = std::stod(fields[7]);
    s.newton_iters = std::stoi(fields[8]);
    s.coulombs = std::stod(fields[9]);
    s.wall_clock = std::stod(fields[10]);
    out.push_back(s);
  }
  return out;
}

}  // namespace vssd
