#include "realclock/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "realclock/cli/app.hpp"
#include "realclock/clock_accuracy.hpp"

namespace realclock::cli {

namespace {

Report make_report(const RunConfig& cfg) {
  return Report{std::string(command_name(cfg.command)), cfg.resolved, {}};
}

double grid_value(double lo, double hi, std::size_t i, std::size_t n) {
  if (n <= 1) {
    return lo;
  }
  if (i + 1 == n) {
    return hi;
  }
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

Trajectory trajectory(const RunConfig& cfg) {
  return evolve_real_clock(cfg.state, cfg.hamiltonian, cfg.clock, cfg.t_final, cfg.evolution);
}

struct CondprobRow {
  double reading;
  double probability;
  double reference;
};

std::vector<CondprobRow> condprob_rows(const RunConfig& cfg, bool last_only) {
  const auto& cp = cfg.condprob;
  const Projector p_o = build_projector(cp.observable, cp.o_center, cp.o_halfwidth);
  std::vector<CondprobRow> rows;
  const std::size_t first = last_only ? cp.readings - 1 : 0;

  if (cp.source == CondprobSource::analytic) {
    for (std::size_t i = first; i < cp.readings; ++i) {
      const double t = grid_value(cp.reading_min, cp.reading_max, i, cp.readings);
      const double p = conditional_probability(cfg.state, cfg.hamiltonian, cfg.clock, t,
                                               cp.observable, cp.o_center, cp.o_halfwidth,
                                               cfg.evolution);
      const double ref = ordinary_probability(
          smear_density(cfg.state, cfg.hamiltonian, cfg.clock, t, cfg.evolution), p_o);
      rows.push_back({t, p, ref});
    }
    return rows;
  }

  const FreeParticleClock& fp = cp.wavepacket;
  const HermitianOperator h_clock = fp.hamiltonian();
  const HermitianOperator x = fp.position_operator();
  const DensityMatrix rho_clock = DensityMatrix::pure(fp.initial_state());
  const ClockModel model = fp.semiclassical_model();
  for (std::size_t i = first; i < cp.readings; ++i) {
    const double t =
        fp.position(fp.nearest_index(grid_value(cp.reading_min, cp.reading_max, i, cp.readings)));
    const ConditionalQuery query{cp.observable, cp.o_center, cp.o_halfwidth,
                                 x,             t,           0.4 * fp.spacing()};
    const double p = conditional_probability(rho_clock, cfg.state, h_clock, cfg.hamiltonian,
                                             query, cfg.evolution);
    const double ref =
        ordinary_probability(smear_density(cfg.state, cfg.hamiltonian, model, t, cfg.evolution), p_o);
    rows.push_back({t, p, ref});
  }
  return rows;
}

}  // namespace

Report run_evolve(const RunConfig& cfg) {
  const Trajectory traj = trajectory(cfg);
  const Index d = cfg.hamiltonian.dim();
  Table t{"rows", {"T"}, {}};
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const std::string base = "rho_" + std::to_string(i) + "_" + std::to_string(j);
      t.columns.push_back(base + "_re");
      t.columns.push_back(base + "_im");
    }
  }
  t.columns.push_back("purity");
  t.columns.push_back("energy");
  for (const auto& point : traj) {
    std::vector<Cell> row{point.time};
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        row.emplace_back(point.rho(i, j).real());
        row.emplace_back(point.rho(i, j).imag());
      }
    }
    row.emplace_back(purity(point.rho));
    row.emplace_back(expectation(cfg.hamiltonian.matrix(), point.rho));
    t.add_row(std::move(row));
  }
  Report r = make_report(cfg);
  r.tables.push_back(std::move(t));
  return r;
}

Report run_zurek(const RunConfig& cfg) {
  const auto& z = cfg.zurek;
  Table t{"rows", {"t", "z_re", "z_im", "z_abs", "zrc_re", "zrc_im", "zrc_abs"}, {}};
  if (z.brute_force) {
    for (const char* c : {"bf_re", "bf_im", "bf_abs", "bf_deviation"}) {
      t.columns.emplace_back(c);
    }
  }
  for (std::size_t i = 0; i < z.samples; ++i) {
    const double time = grid_value(0.0, z.t_final, i, z.samples);
    const complex ideal = zurek::z_ideal(z.bath, time);
    const complex real = zurek::z_realclock(z.bath, time, z.t_planck);
    std::vector<Cell> row{time,        ideal.real(), ideal.imag(), std::abs(ideal),
                          real.real(), real.imag(),  std::abs(real)};
    if (z.brute_force) {
      const complex bf = zurek::brute_force_z(z.bath, time);
      row.insert(row.end(), {bf.real(), bf.imag(), std::abs(bf), std::abs(bf - ideal)});
    }
    t.add_row(std::move(row));
  }
  Report r = make_report(cfg);
  r.tables.push_back(std::move(t));

  if (z.recurrence) {
    Table rec{"recurrence", {"mode", "t", "modulus"}, {}};
    const std::pair<const char*, zurek::CoherenceMode> modes[] = {
        {"ideal", zurek::CoherenceMode::ideal()},
        {"realclock", zurek::CoherenceMode::realclock(z.t_planck)}};
    for (const auto& [name, mode] : modes) {
      const auto scan =
          zurek::recurrence_scan(z.bath, mode, z.horizon, z.recurrence_samples, z.threshold);
      for (const auto& e : scan.exceedances) {
        rec.add_row({std::string(name), e.t, e.modulus});
      }
    }
    r.tables.push_back(std::move(rec));
  }
  return r;
}

Report run_condprob(const RunConfig& cfg) {
  Table t{"rows", {"T", "probability", "reference", "difference"}, {}};
  for (const auto& row : condprob_rows(cfg, false)) {
    t.add_row({row.reading, row.probability, row.reference, row.probability - row.reference});
  }
  Report r = make_report(cfg);
  r.tables.push_back(std::move(t));
  return r;
}

Report run_clock_limits(const RunConfig& cfg) {
  const auto& l = cfg.limits;
  const auto rep = limits::experiment_report(l.omega, l.t, l.t_planck);
  Table t{"rows",
          {"omega", "t", "t_planck", "mass", "exponent", "decay_factor", "t_half",
           "ng_vandam", "salecker_wigner", "decoheres"},
          {}};
  t.add_row({l.omega, l.t, l.t_planck, l.mass, rep.exponent, rep.decay_factor,
             rep.half_coherence_time, rep.clock_uncertainty,
             limits::salecker_wigner_error(l.mass, l.t), rep.decoheres ? 1.0 : 0.0});
  Report r = make_report(cfg);
  r.tables.push_back(std::move(t));
  return r;
}

Summary summarize(const RunConfig& cfg, Command command) {
  switch (command) {
    case Command::evolve: {
      const Trajectory traj = trajectory(cfg);
      const auto& first = traj.front().rho;
      const auto& last = traj.back().rho;
      const double c0 = std::abs(first(0, 1));
      const double c1 = std::abs(last(0, 1));
      return {{"rho01_abs", "decay_factor", "purity", "energy"},
              {c1, c0 > 0.0 ? c1 / c0 : std::nan(""), purity(last),
               expectation(cfg.hamiltonian.matrix(), last)}};
    }
    case Command::zurek: {
      const double t = cfg.zurek.t_final;
      return {{"z_abs", "zrc_abs"},
              {std::abs(zurek::z_ideal(cfg.zurek.bath, t)),
               std::abs(zurek::z_realclock(cfg.zurek.bath, t, cfg.zurek.t_planck))}};
    }
    case Command::condprob: {
      const auto rows = condprob_rows(cfg, true);
      return {{"T", "probability", "reference"},
              {rows.back().reading, rows.back().probability, rows.back().reference}};
    }
    case Command::clock_limits: {
      const auto& l = cfg.limits;
      const auto rep = limits::experiment_report(l.omega, l.t, l.t_planck);
      return {{"exponent", "decay_factor", "t_half", "ng_vandam"},
              {rep.exponent, rep.decay_factor, rep.half_coherence_time, rep.clock_uncertainty}};
    }
    case Command::sweep:
      break;
  }
  throw ConfigError("sweep: a sweep cannot embed another sweep");
}

double sweep_value(const SweepSettings& s, std::size_t i) { return grid_value(s.min, s.max, i, s.n); }

Report run_sweep(const RunConfig& cfg, std::size_t workers) {
  const SweepSettings& sw = cfg.sweep;
  const nlohmann::json* slot = find_path(cfg.resolved, sw.key);
  if (slot == nullptr || !slot->is_number()) {
    throw ConfigError("config: 'sweep.key' names '" + sw.key +
                      "', which is not a numeric setting of this configuration");
  }
  const bool integral = slot->is_number_integer();

  // Every axis point is loaded up front, so a bad value is a config error
  // before any computation starts.
  std::vector<RunConfig> runs;
  runs.reserve(sw.n);
  for (std::size_t i = 0; i < sw.n; ++i) {
    nlohmann::json doc = cfg.resolved;
    const double v = sweep_value(sw, i);
    if (integral) {
      if (v < 0.0) {
        throw ConfigError("config: sweep over '" + sw.key + "' reaches a negative count");
      }
      set_path(doc, sw.key, static_cast<std::uint64_t>(std::llround(v)));
    } else {
      set_path(doc, sw.key, v);
    }
    try {
      runs.push_back(load_config(doc, sw.command));
    } catch (const ConfigError& e) {
      throw ConfigError("sweep at " + sw.key + " = " + format_number(v) + ": " + e.what());
    }
  }

  std::vector<std::optional<Summary>> results(sw.n);
  std::vector<std::exception_ptr> errors(sw.n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
#ifdef _OPENMP
    if (workers > 1) {
      omp_set_num_threads(1);
    }
#endif
    for (std::size_t i = next++; i < sw.n; i = next++) {
      try {
        results[i] = summarize(runs[i], sw.command);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t pool = std::max<std::size_t>(1, std::min(workers, sw.n));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < pool; ++k) {
      threads.emplace_back(work);
    }
    for (auto& th : threads) {
      th.join();
    }
  }

  for (std::size_t i = 0; i < sw.n; ++i) {
    if (errors[i]) {
      const std::string where = "sweep at " + sw.key + " = " + format_number(sweep_value(sw, i));
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw SweepError(where + ": " + e.what(), exit_code_for(errors[i]));
      }
    }
  }

  Table t{"rows", {sw.key}, {}};
  for (const auto& c : results.front()->columns) {
    t.columns.push_back(c);
  }
  for (std::size_t i = 0; i < sw.n; ++i) {
    std::vector<Cell> row{integral ? std::round(sweep_value(sw, i)) : sweep_value(sw, i)};
    for (double v : results[i]->values) {
      row.emplace_back(v);
    }
    t.add_row(std::move(row));
  }
  Report r = make_report(cfg);
  r.tables.push_back(std::move(t));
  return r;
}

Report run_command(const RunConfig& cfg, std::size_t workers) {
  switch (cfg.command) {
    case Command::evolve: return run_evolve(cfg);
    case Command::zurek: return run_zurek(cfg);
    case Command::condprob: return run_condprob(cfg);
    case Command::clock_limits: return run_clock_limits(cfg);
    case Command::sweep: return run_sweep(cfg, workers);
  }
  throw ConfigError("unknown command");
}

std::size_t workers_from_env() {
  const char* v = std::getenv("REALCLOCK_QM_WORKERS");
  if (v == nullptr || *v == '\0') {
    return 1;
  }
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) {
    throw ConfigError("REALCLOCK_QM_WORKERS must be an integer in [1, 1024], got '" +
                      std::string(v) + "'");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace realclock::cli
