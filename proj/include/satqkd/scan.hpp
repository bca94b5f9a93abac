#pragma once

// Parameter sweeps and grid optimization over link scenarios. Grid points
// are independent; a small worker pool evaluates them concurrently and the
// output preserves grid order.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "satqkd/channel.hpp"
#include "satqkd/protocol.hpp"

namespace satqkd::scan {

struct Scenario {
  channel::LinkGeometry geom;
  channel::AtmosphereParams atm;
  channel::DetectorModel det;
  double xi_ch = 0.01;
};

enum class SweptVariable { altitude, zenith, alpha, delta_c, delta_a_delta_p, xi_ch };

inline const char* to_string(SweptVariable v) {
  switch (v) {
    case SweptVariable::altitude: return "altitude_m";
    case SweptVariable::zenith: return "zenith_deg";
    case SweptVariable::alpha: return "alpha";
    case SweptVariable::delta_c: return "delta_c";
    case SweptVariable::delta_a_delta_p: return "delta_a_delta_p";
    case SweptVariable::xi_ch: return "xi_ch";
  }
  return "?";
}

struct SweepSpec {
  Scenario scenario;
  protocol::ProtocolConfig protocol;
  SweptVariable variable = SweptVariable::altitude;
  // 1D grids use `grid`; delta_a_delta_p uses `grid2` (Delta_a, Delta_p).
  std::vector<double> grid;
  std::vector<std::pair<double, double>> grid2;
  solver::SolverOptions solver;
  int jobs = 0;  // 0: hardware concurrency
};

struct SweepRow {
  double value = 0.0;
  double value2 = 0.0;  // Delta_p for the paired sweep
  double eta_total = 0.0;
  double xi_effective = 0.0;
  protocol::KeyRateReport keyrate;
  bool ok = false;
  std::string error;
  double wall_seconds = 0.0;
};

namespace detail {

inline void apply_variable(SweptVariable var, double v, double v2,
                           Scenario& sc, protocol::ProtocolConfig& pc) {
  switch (var) {
    case SweptVariable::altitude: sc.geom.altitude_m = v; break;
    case SweptVariable::zenith: sc.geom.zenith_rad = v * M_PI / 180.0; break;
    case SweptVariable::alpha: pc.alpha = v; break;
    case SweptVariable::delta_c: pc.delta_c = v; break;
    case SweptVariable::delta_a_delta_p:
      pc.delta_a = v;
      pc.delta_p = v2;
      break;
    case SweptVariable::xi_ch: sc.xi_ch = v; break;
  }
}

}  // namespace detail

// One full channel + key-rate evaluation.
inline SweepRow evaluate_point(const Scenario& scenario,
                               const protocol::ProtocolConfig& proto,
                               const solver::SolverOptions& options) {
  SweepRow row;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto rep = channel::link_report(scenario.geom, scenario.atm,
                                          scenario.det, scenario.xi_ch,
                                          proto.detection);
    row.eta_total = rep.eta_total;
    row.xi_effective = rep.xi_effective;
    row.keyrate = protocol::keyrate(proto, rep.eta_total, rep.xi_effective,
                                    options);
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return row;
}

inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  const bool paired = spec.variable == SweptVariable::delta_a_delta_p;
  const std::size_t n = paired ? spec.grid2.size() : spec.grid.size();
  if (n == 0) throw config_error("sweep: empty grid");
  std::vector<SweepRow> rows(n);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      Scenario sc = spec.scenario;
      protocol::ProtocolConfig pc = spec.protocol;
      const double v = paired ? spec.grid2[i].first : spec.grid[i];
      const double v2 = paired ? spec.grid2[i].second : 0.0;
      detail::apply_variable(spec.variable, v, v2, sc, pc);
      rows[i] = evaluate_point(sc, pc, spec.solver);
      rows[i].value = v;
      rows[i].value2 = v2;
    }
  };

  unsigned jobs = spec.jobs > 0 ? unsigned(spec.jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, unsigned(n));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

struct OptimizeResult {
  double best = 0.0;
  double best2 = 0.0;
  std::size_t best_index = 0;
  bool any_secure = false;
  std::vector<SweepRow> table;
};

namespace detail {

// argmax over ok rows; strict > keeps the first (smallest) grid point on ties
inline OptimizeResult pick_best(std::vector<SweepRow> rows) {
  OptimizeResult out;
  out.table = std::move(rows);
  double best_rate = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.table.size(); ++i) {
    const auto& r = out.table[i];
    if (!r.ok) continue;
    if (r.keyrate.rate > best_rate) {
      best_rate = r.keyrate.rate;
      out.best_index = i;
      out.best = r.value;
      out.best2 = r.value2;
    }
    if (r.keyrate.secure) out.any_secure = true;
  }
  return out;
}

}  // namespace detail

inline OptimizeResult optimize_amplitude(const Scenario& scenario,
                                         const protocol::ProtocolConfig& proto,
                                         const std::vector<double>& alpha_grid,
                                         const solver::SolverOptions& options = {},
                                         int jobs = 0) {
  SweepSpec spec{scenario, proto, SweptVariable::alpha, alpha_grid, {},
                 options, jobs};
  return detail::pick_best(sweep(spec));
}

// Post-selection grid search: Delta_c grid for homodyne, (Delta_a, Delta_p)
// pairs for heterodyne.
inline OptimizeResult optimize_postselection(
    const Scenario& scenario, const protocol::ProtocolConfig& proto,
    const std::vector<double>& grid,
    const std::vector<std::pair<double, double>>& grid2 = {},
    const solver::SolverOptions& options = {}, int jobs = 0) {
  SweepSpec spec;
  spec.scenario = scenario;
  spec.protocol = proto;
  spec.solver = options;
  spec.jobs = jobs;
  if (proto.detection == Detection::homodyne) {
    spec.variable = SweptVariable::delta_c;
    spec.grid = grid;
  } else {
    spec.variable = SweptVariable::delta_a_delta_p;
    spec.grid2 = grid2;
  }
  return detail::pick_best(sweep(spec));
}

}  // namespace satqkd::scan
