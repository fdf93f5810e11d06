// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "realclock/clock_accuracy.hpp"
#include "realclock/evolution.hpp"
#include "realclock/free_particle_clock.hpp"
#include "realclock/zurek.hpp"
#include "support/oracles.hpp"

using namespace realclock;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

DensityMatrix uniform_qubit() {
  ComplexVector psi(2);
  psi << std::sqrt(0.5), std::sqrt(0.5);
  return DensityMatrix::pure(psi);
}

HermitianOperator qubit(double omega) {
  return HermitianOperator::diagonal(std::vector<double>{0.0, omega});
}

// Trajectories kept for the invariant suite.
std::vector<std::pair<Trajectory, HermitianOperator>> g_trajectories;

// ---- 1 -------------------------------------------------------------------

Outcome analytic_decay() {
  EvolutionConfig cfg;
  cfg.step = 1e-3;
  const HermitianOperator h = qubit(1.0);
  const Trajectory traj =
      evolve_master(uniform_qubit(), h, ClockModel::constant_rate(0.25), 10.0, cfg);
  double worst = 0.0;
  for (const auto& p : traj) {
    worst = std::max(worst, std::abs(p.rho(0, 1) - analytic_offdiagonal(0.5, -1.0, 0.25, p.time)));
  }
  g_trajectories.emplace_back(traj, h);
  return {worst <= 1e-8, "max |rho01 - analytic| = " + sci(worst) + " over " +
                             std::to_string(traj.size()) + " samples (tol 1e-8)"};
}

// ---- 2 -------------------------------------------------------------------

Outcome fundamental_decay() {
  EvolutionConfig cfg;
  const HermitianOperator h = qubit(2.0);
  const Trajectory traj =
      evolve_master(uniform_qubit(), h, ClockModel::fundamental(1e-2, 20.0), 8.0, cfg);
  const double ratio = std::abs(traj.back().rho(0, 1) / traj.front().rho(0, 1));
  const double want = std::exp(-4.0 * std::pow(1e-2, 4.0 / 3.0) * std::pow(8.0, 2.0 / 3.0));
  g_trajectories.emplace_back(traj, h);
  const double err = std::abs(ratio - want);
  return {err <= 1e-10, "|rho01(8)/rho01(0)| = " + sci(ratio) + ", closed form " + sci(want) +
                            ", diff " + sci(err) + " (tol 1e-10)"};
}

// ---- 3 -------------------------------------------------------------------

struct InvariantWorst {
  double trace = 0.0;
  double hermitian = 0.0;
  double min_eig = 0.0;
  double purity_rise = 0.0;
  double populations = 0.0;
};

void check_invariants(const Trajectory& traj, const HermitianOperator& h, InvariantWorst& w) {
  const EnergyDecomposition spectrum = eigendecompose(h);
  const RealVector pop0 = spectrum.to_eigenbasis(traj.front().rho.matrix()).diagonal().real();
  double prev_purity = purity(traj.front().rho);
  for (const auto& p : traj) {
    const ComplexMatrix& m = p.rho.matrix();
    w.trace = std::max(w.trace, std::abs(m.trace() - 1.0));
    w.hermitian = std::max(w.hermitian, hermiticity_defect(m));
    w.min_eig = std::min(w.min_eig, min_eigenvalue(m));
    const double pur = purity(p.rho);
    w.purity_rise = std::max(w.purity_rise, pur - prev_purity);
    prev_purity = pur;
    const RealVector pop = spectrum.to_eigenbasis(m).diagonal().real();
    w.populations = std::max(w.populations, (pop - pop0).cwiseAbs().maxCoeff());
  }
}

Outcome state_invariants() {
  InvariantWorst w;
  for (const auto& [traj, h] : g_trajectories) {
    check_invariants(traj, h, w);
  }
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EvolutionConfig cfg;
  cfg.record_every = 10;
  for (int i = 0; i < 20; ++i) {
    const Index d = dim(rng);
    const HermitianOperator h(oracle::random_hermitian(d, rng));
    const DensityMatrix rho(oracle::random_density(d, rng, 1 + i % d));
    // sigma(T) = s0 + s1 sin^2(k T) stays inside [0, 0.5].
    const double s0 = 0.25 * u(rng);
    const double s1 = 0.25 * u(rng);
    const double k = 0.5 + 2.0 * u(rng);
    auto b = [=](double t) { return s0 * t + s1 * (0.5 * t - std::sin(2.0 * k * t) / (4.0 * k)); };
    auto db = [=](double t) {
      const double s = std::sin(k * t);
      return s0 + s1 * s * s;
    };
    const Trajectory traj = evolve_master(rho, h, ClockModel::expansion(b, db), 3.0, cfg);
    check_invariants(traj, h, w);
  }
  const bool ok = w.trace <= 1e-8 && w.hermitian <= 1e-10 && w.min_eig >= -1e-8 &&
                  w.purity_rise <= 1e-9 && w.populations <= 1e-9;
  return {ok, "trace " + sci(w.trace) + ", hermiticity " + sci(w.hermitian) + ", min eig " +
                  sci(w.min_eig) + ", purity rise " + sci(w.purity_rise) + ", populations " +
                  sci(w.populations) + " over 22 trajectories"};
}

// ---- 4 -------------------------------------------------------------------

Outcome despagnat() {
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> n(0.0, 1.0);
  EvolutionConfig cfg;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix hm = oracle::random_hermitian(4, rng);
    ComplexMatrix c = ComplexMatrix::Zero(4, 4);
    ComplexMatrix power = ComplexMatrix::Identity(4, 4);
    for (int k = 0; k < 4; ++k) {
      c += n(rng) * power;
      power = (power * hm).eval();
    }
    c = 0.5 * (c + c.adjoint());
    const DensityMatrix rho(oracle::random_density(4, rng));
    const ConservationReport r = despagnat_conservation(
        HermitianOperator(c), HermitianOperator(hm), rho, ClockModel::constant_rate(0.3), 5.0, cfg);
    worst = std::max(worst, r.fluctuation);
  }
  return {worst <= 1e-8, "max fluctuation of Tr(C rho) = " + sci(worst) + " (tol 1e-8)"};
}

// ---- 5 -------------------------------------------------------------------

HermitianOperator random_qubit_h(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(2, 2);
  const double a = 2.0 * u(rng);
  const double b = 2.0 * u(rng);
  const complex c(2.0 * u(rng), 2.0 * u(rng));
  m << a, c, std::conj(c), b;
  return HermitianOperator(m);
}

HermitianOperator random_observable(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(2, 2);
  const complex c(u(rng), u(rng));
  m << 1.0, c, std::conj(c), -1.0;
  return HermitianOperator(m);
}

Outcome conditional_equivalence() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  EvolutionConfig analytic_cfg;
  analytic_cfg.grid = {-10.0, 15.0, 5001};
  double worst_analytic = 0.0;
  for (int i = 0; i < 10; ++i) {
    const HermitianOperator h = random_qubit_h(rng);
    const DensityMatrix rho(oracle::random_density(2, rng));
    const HermitianOperator o = random_observable(rng);
    const double top = eigendecompose(o).eigenvalues(1);
    const ClockModel clock = ClockModel::gaussian(0.2 + 0.8 * u(rng));
    const double reading = 5.0 * u(rng);
    const double p =
        conditional_probability(rho, h, clock, reading, o, top, 1e-3, analytic_cfg);
    const double q = ordinary_probability(smear_density(rho, h, clock, reading, analytic_cfg),
                                          build_projector(o, top, 1e-3));
    worst_analytic = std::max(worst_analytic, std::abs(p - q));
  }

  const FreeParticleClock fp;
  const DensityMatrix clock_state = DensityMatrix::pure(fp.initial_state());
  const HermitianOperator h_clock = fp.hamiltonian();
  const HermitianOperator x_clock = fp.position_operator();
  const ClockModel model = fp.semiclassical_model();
  EvolutionConfig quantum_cfg;
  quantum_cfg.grid = {-8.0, 15.0, 2301};
  double worst_quantum = 0.0;
  for (int i = 0; i < 10; ++i) {
    const HermitianOperator h = random_qubit_h(rng);
    const DensityMatrix rho(oracle::random_density(2, rng));
    const HermitianOperator o = random_observable(rng);
    const double top = eigendecompose(o).eigenvalues(1);
    const double reading = fp.position(fp.nearest_index(-5.0 + 9.0 * u(rng)));
    const ConditionalQuery q{o, top, 1e-3, x_clock, reading, 0.4 * fp.spacing()};
    const double p = conditional_probability(clock_state, rho, h_clock, h, q, quantum_cfg);
    const double ref = ordinary_probability(smear_density(rho, h, model, reading, quantum_cfg),
                                            build_projector(o, top, 1e-3));
    worst_quantum = std::max(worst_quantum, std::abs(p - ref));
  }
  return {worst_analytic <= 1e-6 && worst_quantum <= 1e-3,
          "analytic clock " + sci(worst_analytic) + " (tol 1e-6), wavepacket clock " +
              sci(worst_quantum) + " (tol 1e-3)"};
}

// ---- 6 -------------------------------------------------------------------

Outcome smearing() {
  EvolutionConfig cfg;
  cfg.grid = {-10.0, 14.0, 9601};
  const double reading = 2.0;
  double worst = 0.0;
  for (double w : {0.1, 0.5, 1.0}) {
    for (double omega : {1.0, 3.0}) {
      const DensityMatrix rho =
          smear_density(uniform_qubit(), qubit(omega), ClockModel::gaussian(w), reading, cfg);
      const double suppression = std::abs(rho(0, 1)) / 0.5;
      worst = std::max(worst, std::abs(suppression - std::exp(-omega * omega * w * w / 2.0)));
    }
  }
  return {worst <= 1e-6, "max |suppression - exp(-omega^2 w^2/2)| = " + sci(worst) +
                             " over 6 cases (tol 1e-6)"};
}

// ---- 7 -------------------------------------------------------------------

Outcome zurek_oracle() {
  std::mt19937_64 rng(2027);
  std::uniform_real_distribution<double> times(0.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 10);
    const zurek::SpinBath bath =
        zurek::SpinBath::random(n, 0.1, 2.0, rng(), zurek::random_atom(rng));
    for (int k = 0; k < 10; ++k) {
      const double t = times(rng);
      worst = std::max(worst, std::abs(zurek::z_ideal(bath, t) - zurek::brute_force_z(bath, t)));
    }
  }
  return {worst <= 1e-10,
          "max |z_ideal - brute_force_z| = " + sci(worst) + " over 1000 points (tol 1e-10)"};
}

// ---- 8 -------------------------------------------------------------------

Outcome recurrence() {
  const double h = std::sqrt(0.5);
  const zurek::SpinBath bath =
      zurek::SpinBath::commensurate(6, 0.3, {complex(h, 0.0), complex(h, 0.0)});
  const double t0 = std::numbers::pi / 0.3;
  const double horizon = 3.0 * t0;
  const double peak = std::abs(zurek::z_ideal(bath, t0));

  // 3k+1 samples put t0 exactly on grid index k.
  const std::size_t k = 10000;
  const zurek::RecurrenceScan ideal =
      zurek::recurrence_scan(bath, zurek::CoherenceMode::ideal(), horizon, 3 * k + 1, 0.5);
  double found = 0.0;
  for (const auto& e : ideal.exceedances) {
    if (std::abs(e.t - t0) < 1e-5) {
      found = std::max(found, e.modulus);
    }
  }

  const double tp = 0.05;
  const zurek::RecurrenceScan real =
      zurek::recurrence_scan(bath, zurek::CoherenceMode::realclock(tp), horizon, 3 * k + 1, 1e-6);
  double sum = 0.0;
  for (int j = 1; j <= 6; ++j) {
    sum += (0.6 * j) * (0.6 * j);
  }
  const double envelope = std::exp(-sum * std::pow(tp, 4.0 / 3.0) * std::pow(t0, 2.0 / 3.0));
  const double sup = real.running_sup[k];
  bool monotone = true;
  for (std::size_t i = 1; i < real.running_sup.size(); ++i) {
    monotone = monotone && real.running_sup[i] <= real.running_sup[i - 1];
  }
  const bool ok = peak >= 1.0 - 1e-9 && found >= 1.0 - 1e-9 && sup <= envelope + 1e-12 && monotone;
  return {ok, "ideal |z(pi/0.3)| = " + sci(peak) + " (scan " + sci(found) +
                  "), real-clock sup on [pi/0.3, 3pi/0.3] = " + sci(sup) + " vs envelope " +
                  sci(envelope) + ", running sup " + (monotone ? "non-increasing" : "rises")};
}

// ---- 9 -------------------------------------------------------------------

Outcome stepper_order() {
  const HermitianOperator h = qubit(20.0);
  std::vector<double> errors;
  for (double step = 4e-3; errors.size() < 4; step /= 2.0) {
    EvolutionConfig cfg;
    cfg.step = step;
    const Trajectory traj = evolve_master(uniform_qubit(), h, ClockModel::constant_rate(0.01), 1.0, cfg);
    double worst = 0.0;
    for (const auto& p : traj) {
      worst = std::max(worst, std::abs(p.rho(0, 1) - analytic_offdiagonal(0.5, -20.0, 0.01, p.time)));
    }
    errors.push_back(worst);
  }
  bool ok = true;
  std::string detail = "errors";
  for (double e : errors) {
    detail += " " + sci(e);
  }
  detail += ", ratios";
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double r = errors[i - 1] / errors[i];
    ok = ok && r >= 12.8;
    char buf[16];
    std::snprintf(buf, sizeof buf, " %.2f", r);
    detail += buf;
  }
  return {ok, detail + " (min 12.8)"};
}

// ---- 10 ------------------------------------------------------------------

Outcome formula_contracts() {
  using oracle::mp;
  std::mt19937_64 rng(2028);
  auto log_uniform = [&](double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
  };
  double sw = 0.0, nv = 0.0, de = 0.0, th = 0.0;
  bool exact = true;
  for (int i = 0; i < 1000; ++i) {
    const double m = log_uniform(1e-3, 1e3);
    const double t = log_uniform(1e-4, 1e4);
    const double tp = log_uniform(1e-8, 1.0);
    const double w = log_uniform(1e-3, 1e3);
    const mp cb_t = oracle::cbrt_mp(mp(t));
    const mp cb_tp = oracle::cbrt_mp(mp(tp));
    sw = std::max(sw, oracle::rel_err(limits::salecker_wigner_error(m, t), sqrt(mp(t) / mp(m))));
    nv = std::max(nv, oracle::rel_err(limits::ng_vandam_limit(t, tp), cb_tp * cb_tp * cb_t));
    const double e = limits::decoherence_exponent(w, t, tp);
    de = std::max(de, oracle::rel_err(e, mp(w) * mp(w) * mp(tp) * cb_tp * cb_t * cb_t));
    const mp x = log(mp(2)) / (mp(w) * mp(w) * mp(tp) * cb_tp);
    th = std::max(th, oracle::rel_err(limits::half_coherence_time(w, tp), x * sqrt(x)));
    exact = exact && fundamental_decay_factor(w, t, tp) == std::exp(-e) &&
            limits::experiment_report(w, t, tp).decay_factor == std::exp(-e);
  }
  const bool ok = std::max({sw, nv, de, th}) <= 1e-12 && exact;
  return {ok, "max rel err: salecker-wigner " + sci(sw) + ", ng-van dam " + sci(nv) +
                  ", exponent " + sci(de) + ", T_half " + sci(th) + "; exp identity " +
                  (exact ? "exact" : "broken")};
}

// ---- 11 ------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" REALCLOCK_QM_EXE "' " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("realclock_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Case {
    std::string command;
    std::string config;
    std::string env;
  };
  const std::vector<Case> cases{
      {"evolve",
       R"({"system": {"preset": "random", "dim": 4}, "state": {"kind": "random_pure"},
           "clock": {"kind": "constant_rate", "sigma": 0.2},
           "evolution": {"t_final": 2, "record_every": 100}})",
       ""},
      {"evolve",
       R"({"clock": {"kind": "gaussian", "width": 0.3}, "evolution": {"t_final": 2, "step": 0.5}})",
       ""},
      {"zurek",
       R"({"zurek": {"atoms": 8, "couplings": {"kind": "random"}, "environment": "random",
                     "brute_force": true, "recurrence": {"enabled": true}}})",
       ""},
      {"condprob",
       R"({"condprob": {"observable": {"preset": "random"}, "readings": {"n": 5}}})", ""},
      {"clock-limits", R"({"clock_limits": {"omega": 3, "t": 7, "t_planck": 0.02}})", ""},
      {"sweep",
       R"({"clock": {"kind": "constant_rate", "sigma": 0.1},
           "sweep": {"command": "evolve", "key": "clock.sigma", "min": 0, "max": 0.5, "n": 9}})",
       ""},
  };
  bool ok = true;
  int compared = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const fs::path cfg = dir / ("case" + std::to_string(i) + ".json");
    std::ofstream(cfg) << cases[i].config;
    for (const char* format : {"csv", "json"}) {
      const std::string base = cases[i].command + " --config '" + cfg.string() +
                               "' --seed 99 --format " + format + " --out ";
      const fs::path a = dir / "a.out";
      const fs::path b = dir / "b.out";
      const int ra = run_cli(base + "'" + a.string() + "'");
      const int rb = run_cli(base + "'" + b.string() + "'");
      ok = ok && ra == 0 && rb == 0 && slurp(a) == slurp(b) && !slurp(a).empty();
      ++compared;
    }
  }

  const fs::path sweep_cfg = dir / "sweep.json";
  std::ofstream(sweep_cfg) << R"({"zurek": {"atoms": 6, "couplings": {"kind": "random"},
      "environment": "random", "brute_force": true, "samples": 101},
      "sweep": {"command": "zurek", "key": "zurek.t_planck", "min": 0.01, "max": 0.2, "n": 12}})";
  const std::string base = "sweep --config '" + sweep_cfg.string() + "' --seed 5 --out ";
  const fs::path one = dir / "w1.csv";
  const fs::path four = dir / "w4.csv";
  const bool pool_ok = run_cli(base + "'" + one.string() + "'", "REALCLOCK_QM_WORKERS=1") == 0 &&
                       run_cli(base + "'" + four.string() + "'", "REALCLOCK_QM_WORKERS=4") == 0 &&
                       slurp(one) == slurp(four);
  fs::remove_all(dir);
  return {ok && pool_ok, std::to_string(compared) + " repeated runs identical: " +
                             (ok ? "yes" : "no") + "; sweep with 1 vs 4 workers identical: " +
                             (pool_ok ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  ///< seconds, 0 for none
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "analytic decay reproduction", 1.0, analytic_decay},
      {2, "fundamental-limit decay", 1.0, fundamental_decay},
      {3, "state invariants", 30.0, state_invariants},
      {4, "d'Espagnat conservation", 0.0, despagnat},
      {5, "conditional-probability equivalence", 60.0, conditional_equivalence},
      {6, "smearing characteristic function", 0.0, smearing},
      {7, "spin-bath oracle equivalence", 60.0, zurek_oracle},
      {8, "recurrence and its suppression", 0.0, recurrence},
      {9, "stepper convergence order", 0.0, stepper_order},
      {10, "formula contracts", 0.0, formula_contracts},
      {11, "CLI determinism", 0.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      out.pass = false;
      out.detail += "; over the " + sci(c.time_limit) + " s budget";
    }
    failures += out.pass ? 0 : 1;
    std::printf("%s  %2d  %-38s %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
