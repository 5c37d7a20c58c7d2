#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qs1d/potential.hpp"
#include "qs1d/transport.hpp"

namespace qs1d {

enum class Task {
  kScatter,
  kHierarchy,
  kClock,
  kAbsorb,
  kBardeen,
  kDephase,
  kEmittance,
  kSaddle,
  kWignerSmith,
};

std::string task_name(Task t);

struct SweepSpec {
  std::string param = "energy";
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;
  bool log_scale = false;

  double value(std::size_t i) const;
};

/// Parsed and validated run configuration.  The text format is flat
/// whitespace-separated "key value..." lines with dotted section prefixes
/// (sweep.param, tip.t2, ...); '#' starts a comment.
struct RunConfig {
  Task task = Task::kScatter;
  std::optional<std::string> profile_file;
  std::optional<std::string> profile_inline;  // segments, ';' between lines
  double vleft = 0.0;
  double vright = 0.0;

  std::optional<double> energy;
  SweepSpec sweep;

  std::optional<Window> window;
  std::size_t window_count = 10;

  std::vector<double> omega_values;  // empty: default sequence from E
  double gamma = 0.0;
  TipCoupling tip;
  SaddleModel saddle;

  double defect_tol = 0.0;  // 0: per-task default
  std::optional<std::string> out_path;

  /// Fully resolved key/value echo, sorted by key.
  std::vector<std::pair<std::string, std::string>> echo() const;

  PotentialProfile resolve_profile() const;
  double default_defect_tol() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace qs1d
