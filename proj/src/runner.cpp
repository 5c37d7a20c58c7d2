#include "qs1d/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qs1d/clock.hpp"
#include "qs1d/dos.hpp"
#include "qs1d/scatter1d.hpp"
#include "qs1d/transport.hpp"

namespace qs1d {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

PotentialProfile scaled_profile(const PotentialProfile& p, double factor) {
  std::vector<Segment> segs = p.segments();
  for (auto& s : segs) s.value *= factor;
  return make_profile(std::move(segs), p.v_left(), p.v_right(),
                      p.allows_mixed_imaginary());
}

std::vector<std::string> columns_for(const RunConfig& cfg) {
  const std::string x = cfg.sweep.param;
  switch (cfg.task) {
    case Task::kScatter:
      return {x, "T", "R", "unitarity_defect"};
    case Task::kHierarchy: {
      std::vector<std::string> c = {cfg.sweep.param == "window.pos" ? "y_mid" : x};
      for (const char* n : {"nu11", "nu12", "nu21", "nu22", "inj1", "inj2",
                            "emis1", "emis2", "ldos"}) {
        c.push_back(n);
      }
      c.push_back("g8_defect");
      return c;
    }
    case Task::kClock: {
      std::vector<std::string> c = {x};
      for (const char* ab : {"11", "12", "21", "22"}) {
        for (const char* q : {"sy_w", "sz_w", "tau_y", "tau_z", "order_y",
                              "order_z"}) {
          c.push_back(std::string(q) + "_" + ab);
        }
      }
      c.push_back("consistency_defect");
      return c;
    }
    case Task::kAbsorb:
      return {x,          "p11",      "p12",      "p21",        "p22",
              "deficit1", "deficit2", "firstorder1", "firstorder2", "g8_defect"};
    case Task::kBardeen:
      return {x,     "t_tip_1", "t_tip_2", "t_1_tip", "t_2_tip", "pc11", "pc12",
              "pc21", "pc22",    "validity", "g8_defect"};
    case Task::kDephase:
      return {x, "g_v2", "g_v1", "g_opt", "diff_v1_v2", "diff_opt_v2", "g8_defect"};
    case Task::kEmittance:
      return {x, "e11", "e12", "e21", "e22", "d_total", "sum_defect"};
    case Task::kSaddle:
      return {"u0", "t_total", "c_mu", "emittance", "conservation_defect"};
    case Task::kWignerSmith:
      return {x, "d11", "d22", "re_d12", "im_d12", "herm_defect"};
  }
  return {};
}

std::vector<double> compute_row(const RunConfig& cfg,
                                const PotentialProfile& base, double x) {
  const auto energy_at = [&]() {
    return cfg.sweep.param == "energy" ? x : *cfg.energy;
  };
  const auto profile_at = [&]() {
    return cfg.sweep.param == "vscale" ? scaled_profile(base, x) : base;
  };

  switch (cfg.task) {
    case Task::kScatter: {
      const auto sol = solve(profile_at(), energy_at(), GridSpec{0.0, 0});
      return {x, std::norm(sol.s(1, 0)), std::norm(sol.s(0, 0)),
              sol.unitarity_defect};
    }
    case Task::kHierarchy: {
      const PotentialProfile p = profile_at();
      Window w{0.0, 0.0};
      double e;
      double xcol = x;
      if (cfg.sweep.param == "window.pos") {
        const double tw = (cfg.sweep.stop - cfg.sweep.start) /
                          static_cast<double>(cfg.sweep.count);
        // x is the tile index carried through as a double
        const auto i = static_cast<double>(x);
        w = {cfg.sweep.start + i * tw, cfg.sweep.start + (i + 1.0) * tw};
        e = *cfg.energy;
        xcol = w.mid();
      } else {
        w = *cfg.window;
        e = energy_at();
      }
      const auto h = hierarchy(p, e, {w});
      const auto& r = h.rows.front();
      return {xcol,      r.pdos[0][0], r.pdos[0][1], r.pdos[1][0], r.pdos[1][1],
              r.inj[0],  r.inj[1],     r.emis[0],    r.emis[1],    r.ldos,
              r.defect};
    }
    case Task::kClock: {
      const double e = energy_at();
      const auto omegas =
          cfg.omega_values.empty() ? default_omega_sequence(e) : cfg.omega_values;
      const auto rep = clock_consistency(profile_at(), *cfg.window, e, omegas);
      std::vector<double> row = {x};
      double defect = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const auto& cr = rep.channels[a][b];
          if (cr.blocked) {
            for (int i = 0; i < 6; ++i) row.push_back(kNan);
            continue;
          }
          row.push_back(cr.sy_over_omega);
          row.push_back(cr.sz_over_omega);
          row.push_back(cr.tau_y);
          row.push_back(cr.tau_z);
          row.push_back(cr.order_y);
          row.push_back(cr.order_z);
          defect = std::max(defect, std::abs(cr.sy_over_omega - cr.tau_y) /
                                        std::max(1.0, std::abs(cr.tau_y)));
          defect = std::max(defect, std::abs(cr.sz_over_omega - cr.tau_z) /
                                        std::max(1.0, std::abs(cr.tau_z)));
        }
      }
      row.push_back(defect);
      return row;
    }
    case Task::kAbsorb: {
      const double g = cfg.sweep.param == "gamma" ? x : cfg.gamma;
      const auto res =
          absorption_probabilities(profile_at(), *cfg.window, g, energy_at());
      return {x,
              res.prob[0][0],
              res.prob[0][1],
              res.prob[1][0],
              res.prob[1][1],
              res.deficit[0],
              res.deficit[1],
              res.first_order[0],
              res.first_order[1],
              res.defect};
    }
    case Task::kBardeen: {
      TipCoupling tip = cfg.tip;
      if (cfg.sweep.param == "tip.x") tip.x = x;
      const auto res = bardeen_transmissions(profile_at(), energy_at(), tip);
      return {x,
              res.t_tip_from[0],
              res.t_tip_from[1],
              res.t_to_tip[0],
              res.t_to_tip[1],
              res.prob_corrected[0][0],
              res.prob_corrected[0][1],
              res.prob_corrected[1][0],
              res.prob_corrected[1][1],
              res.validity,
              res.defect};
    }
    case Task::kDephase: {
      const double e = energy_at();
      const PotentialProfile p = profile_at();
      TipCoupling tip = cfg.tip;
      Window w{0.0, 0.0};
      if (cfg.sweep.param == "gamma") {
        w = *cfg.window;
        tip.x = w.mid();
        tip.t2 = x * w.width() * 2.0 * kPlanckH /
                 (4.0 * std::numbers::pi * std::numbers::pi * tip.nu_tip);
      } else {
        if (cfg.sweep.param == "tip.x") tip.x = x;
        w = tip_window(p, e, tip.x);
      }
      const auto probe = voltage_probe_conductance(p, e, tip);
      const double gamma_opt = probe.gamma_equivalent / w.width();
      const auto opt = optical_dephasing_conductance(p, e, w, gamma_opt);
      return {x,
              probe.g_closed_form,
              probe.g_assembled,
              opt.g,
              std::abs(probe.g_assembled - probe.g_closed_form),
              std::abs(opt.g - probe.g_closed_form),
              probe.defect};
    }
    case Task::kEmittance: {
      const auto windows =
          tile_windows(cfg.window->y_lo, cfg.window->y_hi, cfg.window_count);
      const auto rep = emittance_local_screening(profile_at(), energy_at(), windows);
      return {x,
              rep.e_matrix(0, 0),
              rep.e_matrix(0, 1),
              rep.e_matrix(1, 0),
              rep.e_matrix(1, 1),
              rep.d_total,
              rep.max_sum_defect};
    }
    case Task::kSaddle: {
      const auto rep = cfg.saddle.emittance(x);
      double t_total = 0.0;
      for (std::size_t n = 0; n < cfg.saddle.offsets.size(); ++n) {
        t_total += cfg.saddle.transmission(n, x);
      }
      const double conservation = std::abs(rep.e_matrix.row(0).sum());
      return {x, t_total, rep.c_mu, rep.e_matrix(0, 0), conservation};
    }
    case Task::kWignerSmith: {
      const auto ws = wigner_smith(profile_at(), energy_at());
      return {x,
              ws.d(0, 0).real(),
              ws.d(1, 1).real(),
              ws.d(0, 1).real(),
              ws.d(0, 1).imag(),
              ws.hermiticity_defect};
    }
  }
  throw Error("unhandled task");
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  out << "# " << kToolVersion << "\n";
  for (const auto& [k, v] : metadata) {
    out << "# " << k << " " << v << "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_value(row[i]);
    }
    out << "\n";
  }
  if (error) {
    out << "# ERROR at sweep index " << error_index << ": " << *error << "\n";
  }
  return out.str();
}

ResultTable run(const RunConfig& config, int threads) {
  ResultTable table;
  table.columns = columns_for(config);
  table.metadata = config.echo();
  table.defect_tol =
      config.defect_tol > 0.0 ? config.defect_tol : config.default_defect_tol();

  PotentialProfile base = make_profile({});
  if (config.task != Task::kSaddle) {
    base = config.resolve_profile();
  }

  const std::size_t n = config.sweep.count;
  const auto x_of = [&](std::size_t i) {
    // window.pos tiles are indexed, every other sweep uses the axis value
    if (config.task == Task::kHierarchy && config.sweep.param == "window.pos") {
      return static_cast<double>(i);
    }
    return config.sweep.value(i);
  };

  std::vector<std::vector<double>> rows(n);
  std::vector<std::string> errors(n);
  std::vector<char> failed(n, 0);
  std::atomic<bool> stop{false};

  const auto worker = [&](std::size_t i) {
    if (stop.load(std::memory_order_relaxed)) return;
    try {
      rows[i] = compute_row(config, base, x_of(i));
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
      failed[i] = 1;
      stop.store(true, std::memory_order_relaxed);
    }
  };

  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < n && !stop; ++i) worker(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          worker(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) {
      table.error = errors[i];
      table.error_index = i;
      break;
    }
    if (rows[i].empty()) {  // cancelled after a failure elsewhere
      table.error = "cancelled after an earlier failure";
      table.error_index = i;
      break;
    }
    if (!rows[i].empty()) {
      table.max_defect = std::max(table.max_defect, rows[i].back());
      table.rows.push_back(std::move(rows[i]));
    }
  }
  return table;
}

}  // namespace qs1d
