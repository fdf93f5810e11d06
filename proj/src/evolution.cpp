#include "realclock/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "realclock/clock_accuracy.hpp"
#include "realclock/kernels.hpp"

namespace realclock {

namespace {

constexpr double kStepBound = 0.1;
constexpr double kConservationTol = 1e-8;

std::span<const double> as_span(const RealVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ValidationError(os.str());
  }
}

void require_increasing(const PeakMap& peak, const TimeGrid& grid) {
  if (peak.is_identity()) {
    return;
  }
  double prev = peak(grid.at(0));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = peak(grid.at(i));
    if (!(cur > prev)) {
      std::ostringstream os;
      os << "peak map is not strictly increasing near t = " << grid.at(i);
      throw ValidationError(os.str());
    }
    prev = cur;
  }
}

// Hermitizes, removes trace drift and re-validates a stepped state.
DensityMatrix finish_step(ComplexMatrix next, double time) {
  next = 0.5 * (next + next.adjoint()).eval();
  const complex tr = next.trace();
  if (std::abs(tr - 1.0) > kTolTrace) {
    std::ostringstream os;
    os << "master equation: trace drifted to " << tr.real() << " at T = " << time
       << "; reduce the step";
    throw IntegrationError(os.str());
  }
  next /= tr.real();
  try {
    return DensityMatrix(std::move(next));
  } catch (const ValidationError& e) {
    std::ostringstream os;
    os << "master equation: state left the density-matrix set at T = " << time << " ("
       << e.what() << "); reduce the step";
    throw IntegrationError(os.str());
  }
}

void check_step(double norm, double sigma_max, double step) {
  const double stiffness = step * (norm * norm * sigma_max + norm);
  if (!(stiffness < kStepBound)) {
    std::ostringstream os;
    os << "master equation: step h = " << step << " gives h(|H|^2 sigma + |H|) = " << stiffness
       << " >= " << kStepBound << "; reduce the step";
    throw IntegrationError(os.str());
  }
}

ComplexMatrix rk4(const ComplexMatrix& rho, const ComplexMatrix& h, double s0, double s_mid,
                  double s1, double dt) {
  const ComplexMatrix k1 = master_generator(rho, h, s0);
  const ComplexMatrix k2 = master_generator(rho + 0.5 * dt * k1, h, s_mid);
  const ComplexMatrix k3 = master_generator(rho + 0.5 * dt * k2, h, s_mid);
  const ComplexMatrix k4 = master_generator(rho + dt * k3, h, s1);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::size_t step_count(double t_final, double step) {
  if (t_final == 0.0) {
    return 0;
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_final / step - 1e-9)));
}

bool recorded(std::size_t k, std::size_t n, std::size_t every) { return k % every == 0 || k == n; }

Trajectory evolve_fundamental(const DensityMatrix& rho0, const EnergyDecomposition& spectrum,
                              const FundamentalLimitClock& clock, double t_final,
                              const EvolutionConfig& cfg) {
  if (!(t_final < clock.t_max)) {
    std::ostringstream os;
    os << "evolve_master: T_final = " << t_final << " must lie below T_max = " << clock.t_max;
    throw DomainError(os.str());
  }
  const RealMatrix omega = spectrum.bohr_frequencies();
  const std::size_t n = step_count(t_final, cfg.step);
  ComplexMatrix state = spectrum.to_eigenbasis(rho0.matrix());
  Trajectory traj;
  traj.push_back({0.0, rho0});
  double prev_time = 0.0;
  double prev_exponent = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double time = t_final * static_cast<double>(k) / static_cast<double>(n);
    const double exponent = limits::decoherence_exponent(1.0, time, clock.t_planck);
    const double dt = time - prev_time;
    const double de = exponent - prev_exponent;
    for (Index j = 0; j < state.cols(); ++j) {
      for (Index i = 0; i < state.rows(); ++i) {
        const double w = omega(i, j);
        state(i, j) *= std::polar(std::exp(-w * w * de), -w * dt);
      }
    }
    prev_time = time;
    prev_exponent = exponent;
    if (recorded(k, n, cfg.record_every)) {
      traj.push_back({time, DensityMatrix(spectrum.from_eigenbasis(state))});
    }
  }
  return traj;
}

}  // namespace

void EvolutionConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ValidationError("evolution config: step must be positive");
  }
  if (!(quad_tol > 0.0)) {
    throw ValidationError("evolution config: quad_tol must be positive");
  }
  if (record_every == 0) {
    throw ValidationError("evolution config: record_every must be at least 1");
  }
  grid.validate();
}

DensityMatrix smear_density(const DensityMatrix& rho, const HermitianOperator& h,
                            const ClockModel& clock, double reading, const EvolutionConfig& cfg) {
  cfg.validate();
  require_same_dim(rho.dim(), h.dim(), "smear_density");
  if (!clock.holds<IdealClock>() && !clock.holds<GaussianClock>()) {
    throw UnsupportedKind("smear_density: clock has no pointwise reading density");
  }
  const auto& grid = cfg.grid;
  const auto& peak = clock.peak_map();
  require_increasing(peak, grid);

  const bool delta = clock.holds<IdealClock>() || pdf(clock, reading, grid.at(0)).is_delta;
  if (delta) {
    return unitary_evolve(rho, h, peak.inverse(reading, grid.t_min, grid.t_max));
  }

  const std::vector<double> times = grid.points();
  SimpsonWeights w = simpson_weights(grid);
  double mass_fine = 0.0;
  double mass_coarse = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double p = pdf(clock, reading, times[i]).value;
    w.fine[i] *= p;
    w.coarse[i] *= p;
    mass_fine += w.fine[i];
    mass_coarse += w.coarse[i];
  }
  if (!(std::abs(mass_fine - 1.0) <= cfg.quad_tol)) {
    std::ostringstream os;
    os << "smear_density: grid [" << grid.t_min << ", " << grid.t_max << "] carries "
       << mass_fine << " of the clock density at T = " << reading << "; widen the grid";
    throw InsufficientGrid(os.str());
  }

  const EnergyDecomposition spectrum = eigendecompose(h);
  const auto sums =
      kernels::omp::characteristic_sums(as_span(spectrum.eigenvalues), times, w.fine, w.coarse);
  const ComplexMatrix start = spectrum.to_eigenbasis(rho.matrix());
  const ComplexMatrix fine = start.cwiseProduct(sums.fine) / mass_fine;
  const ComplexMatrix coarse = start.cwiseProduct(sums.coarse) / mass_coarse;
  const double error = max_abs(fine - coarse) / 15.0;
  if (error > cfg.quad_tol) {
    std::ostringstream os;
    os << "smear_density: quadrature error estimate " << error << " exceeds " << cfg.quad_tol
       << "; refine the grid";
    throw InsufficientGrid(os.str());
  }
  return DensityMatrix(spectrum.from_eigenbasis(fine));
}

ComplexMatrix master_generator(const ComplexMatrix& rho, const ComplexMatrix& h, double sigma) {
  const ComplexMatrix c = h * rho - rho * h;
  const complex minus_i(0.0, -1.0);
  if (sigma == 0.0) {
    return minus_i * c;
  }
  return minus_i * c - sigma * (h * c - c * h);
}

DensityMatrix master_step(const DensityMatrix& rho, const HermitianOperator& h, double sigma,
                          double step) {
  require_same_dim(rho.dim(), h.dim(), "master_step");
  if (!(sigma >= 0.0)) {
    throw ValidationError("master_step: sigma must be non-negative");
  }
  if (!(step > 0.0)) {
    throw ValidationError("master_step: step must be positive");
  }
  check_step(eigendecompose(h).spectral_norm(), sigma, step);
  return finish_step(rk4(rho.matrix(), h.matrix(), sigma, sigma, sigma, step), step);
}

Trajectory evolve_master(const DensityMatrix& rho0, const HermitianOperator& h,
                         const ClockModel& clock, double t_final, const EvolutionConfig& cfg) {
  cfg.validate();
  require_same_dim(rho0.dim(), h.dim(), "evolve_master");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ValidationError("evolve_master: T_final must be finite and non-negative");
  }
  if (!clock.peak_map().is_identity()) {
    throw ValidationError("evolve_master: the master equation assumes T_max(t) = t");
  }
  if (clock.holds<GaussianClock>()) {
    throw UnsupportedKind("evolve_master: gaussian clocks are evolved by smearing");
  }
  const EnergyDecomposition spectrum = eigendecompose(h);
  if (const auto* f = std::get_if<FundamentalLimitClock>(&clock.kind())) {
    return evolve_fundamental(rho0, spectrum, *f, t_final, cfg);
  }

  const double norm = spectrum.spectral_norm();
  const std::size_t n = step_count(t_final, cfg.step);
  Trajectory traj;
  traj.push_back({0.0, rho0});
  DensityMatrix rho = rho0;
  double prev_time = 0.0;
  double s_prev = sigma(clock, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double time = t_final * static_cast<double>(k) / static_cast<double>(n);
    const double dt = time - prev_time;
    const double s_mid = sigma(clock, prev_time + 0.5 * dt);
    const double s_next = sigma(clock, time);
    check_step(norm, std::max({s_prev, s_mid, s_next}), dt);
    rho = finish_step(rk4(rho.matrix(), h.matrix(), s_prev, s_mid, s_next, dt), time);
    if (recorded(k, n, cfg.record_every)) {
      traj.push_back({time, rho});
    }
    prev_time = time;
    s_prev = s_next;
  }
  return traj;
}

Trajectory evolve_real_clock(const DensityMatrix& rho0, const HermitianOperator& h,
                             const ClockModel& clock, double t_final, const EvolutionConfig& cfg) {
  if (!clock.holds<GaussianClock>()) {
    return evolve_master(rho0, h, clock, t_final, cfg);
  }
  cfg.validate();
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ValidationError("evolve_real_clock: T_final must be finite and non-negative");
  }
  const std::size_t n = step_count(t_final, cfg.step);
  Trajectory traj;
  for (std::size_t k = 0; k <= n; ++k) {
    if (!recorded(k, n, cfg.record_every)) {
      continue;
    }
    const double time = n == 0 ? 0.0 : t_final * static_cast<double>(k) / static_cast<double>(n);
    traj.push_back({time, smear_density(rho0, h, clock, time, cfg)});
  }
  return traj;
}

complex analytic_offdiagonal(complex rho0_nm, double omega, double sigma, double t) {
  if (!(sigma >= 0.0) || !(t >= 0.0)) {
    throw ValidationError("analytic_offdiagonal: requires sigma >= 0 and T >= 0");
  }
  return rho0_nm * std::polar(std::exp(-sigma * omega * omega * t), -omega * t);
}

double fundamental_decay_factor(double omega, double t, double t_planck) {
  return std::exp(-limits::decoherence_exponent(omega, t, t_planck));
}

double ordinary_probability(const DensityMatrix& rho, const Projector& p) {
  return ordinary_probability(rho.matrix(), p);
}

double ordinary_probability(const ComplexMatrix& rho, const Projector& p) {
  require_same_dim(rho.rows(), p.dim(), "ordinary_probability");
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) {
    throw DegenerateState("ordinary_probability: state has zero trace");
  }
  return (p.matrix() * rho).trace().real() / tr;
}

ConservationReport despagnat_conservation(const HermitianOperator& c, const HermitianOperator& h,
                                          const DensityMatrix& rho0, const ClockModel& clock,
                                          double t_final, const EvolutionConfig& cfg) {
  require_same_dim(c.dim(), h.dim(), "despagnat_conservation");
  const double defect = max_abs(commutator(c.matrix(), h.matrix()));
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "despagnat_conservation: observable does not commute with H (|[C,H]| = " << defect
       << ")";
    throw ValidationError(os.str());
  }
  const Trajectory traj = evolve_real_clock(rho0, h, clock, t_final, cfg);
  ConservationReport report;
  for (const auto& point : traj) {
    report.times.push_back(point.time);
    report.values.push_back(expectation(c.matrix(), point.rho));
  }
  const auto [lo, hi] = std::minmax_element(report.values.begin(), report.values.end());
  report.fluctuation = *hi - *lo;
  report.conserved = report.fluctuation <= kConservationTol;
  return report;
}

}  // namespace realclock
