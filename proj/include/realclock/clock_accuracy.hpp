#pragma once

// Fundamental limits on clock accuracy and the decoherence they imply.
// Every bound is an order-of-magnitude relation; proportionality constants
// are taken as 1 and the functions below are the exact formulas.

#include <string>

namespace realclock::limits {

/// Physical Planck time in seconds. Documentation only; callers choose units.
inline constexpr double kPlanckTimeSeconds = 5.39e-44;

struct ClockBudget {
  double t_planck = 1.0;
  double mass = 1.0;
  double duration = 1.0;

  void validate() const;
};

/// sqrt(t / M): wavepacket-spreading error of a clock of mass M over time t.
double salecker_wigner_error(double mass, double t);

/// T_P^{2/3} T^{1/3}: best accuracy of any clock measuring an interval T.
double ng_vandam_limit(double t, double t_planck);

/// omega^2 T_P^{4/3} T^{2/3}.
double decoherence_exponent(double omega, double t, double t_planck);

/// T at which decoherence_exponent = ln 2; +inf when omega = 0.
double half_coherence_time(double omega, double t_planck);

struct ExperimentReport {
  double omega = 0.0;
  double t = 0.0;
  double t_planck = 0.0;
  double exponent = 0.0;
  double decay_factor = 1.0;
  double half_coherence_time = 0.0;
  double clock_uncertainty = 0.0;  ///< Ng-van Dam delta T at t
  bool decoheres = true;
  std::string note;
};

ExperimentReport experiment_report(double omega, double t, double t_planck);

}  // namespace realclock::limits
