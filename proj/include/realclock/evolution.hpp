#pragma once

// Density-matrix evolution in real-clock time: the smeared state, the
// modified master equation, closed-form solutions, and relational
// (conditional) probabilities.

#include <cstddef>
#include <vector>

#include "realclock/clock.hpp"
#include "realclock/core.hpp"
#include "realclock/quadrature.hpp"

namespace realclock {

struct EvolutionConfig {
  double step = 1e-3;            ///< master-equation step h
  TimeGrid grid{};               ///< ideal-time quadrature grid
  double quad_tol = 1e-8;        ///< quadrature and grid-convergence tolerance
  std::size_t record_every = 1;  ///< keep every n-th step in trajectories
  static constexpr int stepper_order = 4;

  void validate() const;
};

struct TrajectoryPoint {
  double time;
  DensityMatrix rho;
};

using Trajectory = std::vector<TrajectoryPoint>;

/// rho(T) = integral dt U(t) rho U(t)^dagger P_t(T) over the configured grid.
/// Ideal clocks reduce to unitary evolution at T_max^{-1}(T).
DensityMatrix smear_density(const DensityMatrix& rho, const HermitianOperator& h,
                            const ClockModel& clock, double reading, const EvolutionConfig& cfg);

/// Right-hand side -i[H, rho] - sigma [H, [H, rho]].
ComplexMatrix master_generator(const ComplexMatrix& rho, const ComplexMatrix& h, double sigma);

/// One classical fourth-order Runge-Kutta step of the master equation with constant sigma.
DensityMatrix master_step(const DensityMatrix& rho, const HermitianOperator& h, double sigma,
                          double step);

/// Trajectory from T = 0 to T_final (both included) with sigma(T) from the clock.
/// Fundamental-limit clocks use the closed-form factor in the energy basis.
Trajectory evolve_master(const DensityMatrix& rho0, const HermitianOperator& h,
                         const ClockModel& clock, double t_final, const EvolutionConfig& cfg);

/// evolve_master for clocks with a width rate; for gaussian clocks the
/// trajectory is the smeared state on the same T samples.
Trajectory evolve_real_clock(const DensityMatrix& rho0, const HermitianOperator& h,
                             const ClockModel& clock, double t_final, const EvolutionConfig& cfg);

/// rho_nm(0) e^{-i omega T} e^{-sigma omega^2 T}.
complex analytic_offdiagonal(complex rho0_nm, double omega, double sigma, double t);

/// exp(-omega^2 T_P^{4/3} T^{2/3}).
double fundamental_decay_factor(double omega, double t, double t_planck);

/// Tr(P rho) / Tr(rho).
double ordinary_probability(const DensityMatrix& rho, const Projector& p);
double ordinary_probability(const ComplexMatrix& rho, const Projector& p);

/// "O in [o_center +- o_halfwidth] given the clock reads [t_center +- t_halfwidth]".
struct ConditionalQuery {
  HermitianOperator observable;
  double o_center = 0.0;
  double o_halfwidth = 0.5;
  HermitianOperator clock_operator;
  double t_center = 0.0;
  double t_halfwidth = 0.0;
};

/// Relational probability for a quantum clock subsystem, with the infinite
/// ideal-time integral replaced by grid-doubling convergence.
double conditional_probability(const DensityMatrix& rho_clock, const DensityMatrix& rho_sys,
                               const HermitianOperator& h_clock, const HermitianOperator& h_sys,
                               const ConditionalQuery& query, const EvolutionConfig& cfg);

/// Same for a clock described only by its reading density P_t(T).
double conditional_probability(const DensityMatrix& rho_sys, const HermitianOperator& h_sys,
                               const ClockModel& clock, double reading,
                               const HermitianOperator& observable, double o_center,
                               double o_halfwidth, const EvolutionConfig& cfg);

struct ConservationReport {
  std::vector<double> times;
  std::vector<double> values;  ///< Tr(C rho(T))
  double fluctuation = 0.0;    ///< max - min
  bool conserved = false;      ///< fluctuation <= 1e-8
};

/// Tracks Tr(C rho(T)) for an observable commuting with H.
ConservationReport despagnat_conservation(const HermitianOperator& c, const HermitianOperator& h,
                                          const DensityMatrix& rho0, const ClockModel& clock,
                                          double t_final, const EvolutionConfig& cfg);

}  // namespace realclock
