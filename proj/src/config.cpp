#include "qs1d/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace qs1d {

namespace {

const std::set<std::string> kKnownKeys = {
    "task",          "profile.file",     "profile.inline", "profile.vleft",
    "profile.vright", "energy",          "sweep.param",    "sweep.start",
    "sweep.stop",    "sweep.count",      "sweep.scale",    "window.lo",
    "window.hi",     "window.count",     "omega.values",   "gamma",
    "tip.x",         "tip.t2",           "tip.nutip",      "saddle.c",
    "saddle.offsets", "saddle.smoothness", "saddle.efermi", "saddle.dbase",
    "saddle.damp",   "tol.defect",       "out",
};

const std::map<std::string, Task> kTasks = {
    {"scatter", Task::kScatter},     {"hierarchy", Task::kHierarchy},
    {"clock", Task::kClock},         {"absorb", Task::kAbsorb},
    {"bardeen", Task::kBardeen},     {"dephase", Task::kDephase},
    {"emittance", Task::kEmittance}, {"saddle", Task::kSaddle},
    {"wigner-smith", Task::kWignerSmith},
};

[[noreturn]] void parse_fail(int line, int column, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + msg);
}

double to_double(const std::string& s, int line, int column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) parse_fail(line, column, "trailing junk in number '" + s + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(line, column, "expected a number, got '" + s + "'");
  }
}

std::size_t to_count(const std::string& s, int line, int column) {
  const double v = to_double(s, line, column);
  if (v < 1.0 || v != std::floor(v)) {
    parse_fail(line, column, "expected a positive integer, got '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> to_list(const std::string& s, int line, int column) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    out.push_back(to_double(item, line, column));
  }
  if (out.empty()) parse_fail(line, column, "expected a comma-separated list");
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

const std::set<std::string> kSweepParams = {"energy", "vscale", "gamma",
                                            "tip.x", "u0", "window.pos"};

void validate(RunConfig& cfg, bool sweep_given, bool energy_given) {
  if (cfg.task != Task::kSaddle) {
    if (!cfg.profile_file && !cfg.profile_inline) {
      throw MissingRequired("a profile source (profile.file or profile.inline)");
    }
    if (cfg.profile_file && cfg.profile_inline) {
      throw ParseError("give exactly one of profile.file and profile.inline");
    }
  }
  if (!sweep_given) {
    if (!energy_given && cfg.task != Task::kSaddle) {
      throw MissingRequired("energy (or a sweep block)");
    }
    cfg.sweep.param = (cfg.task == Task::kSaddle) ? "u0" : "energy";
    cfg.sweep.start = cfg.sweep.stop = cfg.energy.value_or(0.0);
    cfg.sweep.count = 1;
  } else {
    if (!kSweepParams.count(cfg.sweep.param)) {
      throw ParseError("unknown sweep.param '" + cfg.sweep.param + "'");
    }
    if (cfg.sweep.log_scale && (cfg.sweep.start <= 0.0 || cfg.sweep.stop <= 0.0)) {
      throw ParseError("log sweep requires positive bounds");
    }
  }
  const bool sweeps_energy = cfg.sweep.param == "energy";
  if (!sweeps_energy && !cfg.energy && cfg.task != Task::kSaddle) {
    throw MissingRequired("energy");
  }

  static const std::map<Task, std::set<std::string>> kAllowed = {
      {Task::kScatter, {"energy", "vscale"}},
      {Task::kHierarchy, {"energy", "window.pos", "vscale"}},
      {Task::kClock, {"energy", "vscale"}},
      {Task::kAbsorb, {"energy", "gamma"}},
      {Task::kBardeen, {"energy", "tip.x"}},
      {Task::kDephase, {"energy", "tip.x", "gamma"}},
      {Task::kEmittance, {"energy", "vscale"}},
      {Task::kSaddle, {"u0"}},
      {Task::kWignerSmith, {"energy", "vscale"}},
  };
  if (!kAllowed.at(cfg.task).count(cfg.sweep.param)) {
    throw ParseError("sweep.param '" + cfg.sweep.param + "' not valid for task " +
                     task_name(cfg.task));
  }

  const bool needs_window = cfg.task == Task::kClock || cfg.task == Task::kAbsorb ||
                            (cfg.task == Task::kHierarchy &&
                             cfg.sweep.param != "window.pos") ||
                            cfg.task == Task::kEmittance;
  if (needs_window && !cfg.window) {
    throw MissingRequired("window.lo/window.hi for task " + task_name(cfg.task));
  }
  if (cfg.window && !(cfg.window->y_lo < cfg.window->y_hi)) {
    throw ParseError("window.lo must be below window.hi");
  }
  if (cfg.defect_tol < 0.0) throw ParseError("tol.defect must be positive");
}

}  // namespace

std::string task_name(Task t) {
  for (const auto& [name, task] : kTasks) {
    if (task == t) return name;
  }
  return "?";
}

double SweepSpec::value(std::size_t i) const {
  if (count == 1) return start;
  const double f = static_cast<double>(i) / static_cast<double>(count - 1);
  if (log_scale) {
    return start * std::pow(stop / start, f);
  }
  return start + (stop - start) * f;
}

double RunConfig::default_defect_tol() const {
  switch (task) {
    case Task::kScatter: return 1e-10;
    case Task::kEmittance: return 1e-10;
    case Task::kSaddle: return 1e-12;
    case Task::kWignerSmith: return 1e-6;
    default: return 1e-4;
  }
}

PotentialProfile RunConfig::resolve_profile() const {
  if (profile_file) return load_profile_file(*profile_file);
  if (!profile_inline) throw MissingRequired("profile source");
  std::string text = "#vleft " + format_double(vleft) + "\n#vright " +
                     format_double(vright) + "\n";
  std::string body = *profile_inline;
  std::replace(body.begin(), body.end(), ';', '\n');
  return parse_profile_text(text + body);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("task", task_name(task));
  if (profile_file) kv.emplace_back("profile.file", *profile_file);
  if (profile_inline) kv.emplace_back("profile.inline", *profile_inline);
  if (!profile_file) {
    kv.emplace_back("profile.vleft", format_double(vleft));
    kv.emplace_back("profile.vright", format_double(vright));
  }
  if (energy) kv.emplace_back("energy", format_double(*energy));
  kv.emplace_back("sweep.param", sweep.param);
  kv.emplace_back("sweep.start", format_double(sweep.start));
  kv.emplace_back("sweep.stop", format_double(sweep.stop));
  kv.emplace_back("sweep.count", std::to_string(sweep.count));
  kv.emplace_back("sweep.scale", sweep.log_scale ? "log" : "linear");
  if (window) {
    kv.emplace_back("window.lo", format_double(window->y_lo));
    kv.emplace_back("window.hi", format_double(window->y_hi));
  }
  if (task == Task::kHierarchy || task == Task::kEmittance) {
    kv.emplace_back("window.count", std::to_string(window_count));
  }
  if (task == Task::kClock) {
    kv.emplace_back("omega.values",
                    omega_values.empty() ? std::string("auto")
                                         : format_list(omega_values));
  }
  if (task == Task::kAbsorb || task == Task::kDephase) {
    kv.emplace_back("gamma", format_double(gamma));
  }
  if (task == Task::kBardeen || task == Task::kDephase) {
    kv.emplace_back("tip.x", format_double(tip.x));
    kv.emplace_back("tip.t2", format_double(tip.t2));
    kv.emplace_back("tip.nutip", format_double(tip.nu_tip));
  }
  if (task == Task::kSaddle) {
    kv.emplace_back("saddle.c", format_double(saddle.c_geom));
    kv.emplace_back("saddle.offsets", format_list(saddle.offsets));
    kv.emplace_back("saddle.smoothness", format_double(saddle.smoothness));
    kv.emplace_back("saddle.efermi", format_double(saddle.e_fermi));
    kv.emplace_back("saddle.dbase", format_double(saddle.d_base));
    kv.emplace_back("saddle.damp", format_double(saddle.d_amp));
  }
  kv.emplace_back("tol.defect",
                  format_double(defect_tol > 0.0 ? defect_tol : default_defect_tol()));
  std::sort(kv.begin(), kv.end());
  return kv;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  bool sweep_given = false;
  bool energy_given = false;
  double window_lo = 0.0, window_hi = 0.0;
  bool window_lo_given = false, window_hi_given = false;

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string value;
    std::getline(ls, value);
    const auto first = value.find_first_not_of(" \t");
    const int value_col = static_cast<int>(line.find(key) + key.size() + 2);
    if (first == std::string::npos) {
      parse_fail(line_no, value_col, "key '" + key + "' has no value");
    }
    value = value.substr(first);
    const auto last = value.find_last_not_of(" \t\r");
    value = value.substr(0, last + 1);

    if (!kKnownKeys.count(key)) {
      throw UnknownKey("line " + std::to_string(line_no) + ": unknown key '" + key +
                       "'");
    }
    if (!seen.insert(key).second) {
      parse_fail(line_no, 1, "duplicate key '" + key + "'");
    }

    if (key == "task") {
      const auto it = kTasks.find(value);
      if (it == kTasks.end()) parse_fail(line_no, value_col, "unknown task '" + value + "'");
      cfg.task = it->second;
    } else if (key == "profile.file") {
      cfg.profile_file = value;
    } else if (key == "profile.inline") {
      cfg.profile_inline = value;
    } else if (key == "profile.vleft") {
      cfg.vleft = to_double(value, line_no, value_col);
    } else if (key == "profile.vright") {
      cfg.vright = to_double(value, line_no, value_col);
    } else if (key == "energy") {
      cfg.energy = to_double(value, line_no, value_col);
      energy_given = true;
    } else if (key == "sweep.param") {
      cfg.sweep.param = value;
      sweep_given = true;
    } else if (key == "sweep.start") {
      cfg.sweep.start = to_double(value, line_no, value_col);
      sweep_given = true;
    } else if (key == "sweep.stop") {
      cfg.sweep.stop = to_double(value, line_no, value_col);
      sweep_given = true;
    } else if (key == "sweep.count") {
      cfg.sweep.count = to_count(value, line_no, value_col);
      sweep_given = true;
    } else if (key == "sweep.scale") {
      if (value != "linear" && value != "log") {
        parse_fail(line_no, value_col, "sweep.scale must be linear or log");
      }
      cfg.sweep.log_scale = value == "log";
      sweep_given = true;
    } else if (key == "window.lo") {
      window_lo = to_double(value, line_no, value_col);
      window_lo_given = true;
    } else if (key == "window.hi") {
      window_hi = to_double(value, line_no, value_col);
      window_hi_given = true;
    } else if (key == "window.count") {
      cfg.window_count = to_count(value, line_no, value_col);
    } else if (key == "omega.values") {
      cfg.omega_values = to_list(value, line_no, value_col);
    } else if (key == "gamma") {
      cfg.gamma = to_double(value, line_no, value_col);
    } else if (key == "tip.x") {
      cfg.tip.x = to_double(value, line_no, value_col);
    } else if (key == "tip.t2") {
      cfg.tip.t2 = to_double(value, line_no, value_col);
    } else if (key == "tip.nutip") {
      cfg.tip.nu_tip = to_double(value, line_no, value_col);
    } else if (key == "saddle.c") {
      cfg.saddle.c_geom = value == "inf"
                              ? std::numeric_limits<double>::infinity()
                              : to_double(value, line_no, value_col);
    } else if (key == "saddle.offsets") {
      cfg.saddle.offsets = to_list(value, line_no, value_col);
    } else if (key == "saddle.smoothness") {
      cfg.saddle.smoothness = to_double(value, line_no, value_col);
    } else if (key == "saddle.efermi") {
      cfg.saddle.e_fermi = to_double(value, line_no, value_col);
    } else if (key == "saddle.dbase") {
      cfg.saddle.d_base = to_double(value, line_no, value_col);
    } else if (key == "saddle.damp") {
      cfg.saddle.d_amp = to_double(value, line_no, value_col);
    } else if (key == "tol.defect") {
      cfg.defect_tol = to_double(value, line_no, value_col);
    } else if (key == "out") {
      cfg.out_path = value;
    }
  }

  if (window_lo_given != window_hi_given) {
    throw MissingRequired("both window.lo and window.hi");
  }
  if (window_lo_given) cfg.window = Window{window_lo, window_hi};
  validate(cfg, sweep_given, energy_given);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qs1d
