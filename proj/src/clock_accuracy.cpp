#include "realclock/clock_accuracy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "realclock/errors.hpp"

namespace realclock::limits {

namespace {

void require(bool ok, const char* message) {
  if (!ok) {
    throw ValidationError(message);
  }
}

// x^{2/3} and x^{4/3} through cbrt, which is correctly rounded to within an ulp.
double pow_two_thirds(double x) {
  const double c = std::cbrt(x);
  return c * c;
}

double pow_four_thirds(double x) { return x * std::cbrt(x); }

}  // namespace

void ClockBudget::validate() const {
  require(t_planck > 0.0 && mass > 0.0 && duration > 0.0,
          "clock budget: T_Planck, mass and duration must be positive");
}

double salecker_wigner_error(double mass, double t) {
  require(mass > 0.0, "salecker_wigner_error: mass must be positive");
  require(t >= 0.0, "salecker_wigner_error: time must be non-negative");
  return std::sqrt(t / mass);
}

double ng_vandam_limit(double t, double t_planck) {
  require(t >= 0.0, "ng_vandam_limit: T must be non-negative");
  require(t_planck > 0.0, "ng_vandam_limit: T_Planck must be positive");
  return pow_two_thirds(t_planck) * std::cbrt(t);
}

double decoherence_exponent(double omega, double t, double t_planck) {
  require(t >= 0.0, "decoherence_exponent: T must be non-negative");
  require(t_planck > 0.0, "decoherence_exponent: T_Planck must be positive");
  return omega * omega * pow_four_thirds(t_planck) * pow_two_thirds(t);
}

double half_coherence_time(double omega, double t_planck) {
  require(t_planck > 0.0, "half_coherence_time: T_Planck must be positive");
  if (omega == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double x = std::numbers::ln2 / (omega * omega * pow_four_thirds(t_planck));
  return x * std::sqrt(x);
}

ExperimentReport experiment_report(double omega, double t, double t_planck) {
  require(t > 0.0 && t_planck > 0.0, "experiment_report: T and T_Planck must be positive");
  require(omega >= 0.0, "experiment_report: omega must be non-negative");
  ExperimentReport r;
  r.omega = omega;
  r.t = t;
  r.t_planck = t_planck;
  r.exponent = decoherence_exponent(omega, t, t_planck);
  r.decay_factor = std::exp(-r.exponent);
  r.half_coherence_time = half_coherence_time(omega, t_planck);
  r.clock_uncertainty = ng_vandam_limit(t, t_planck);
  r.decoheres = omega != 0.0;
  if (!r.decoheres) {
    r.note = "no decoherence at this Bohr frequency";
  }
  return r;
}

}  // namespace realclock::limits
