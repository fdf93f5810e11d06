#pragma once

// Models of the probability density P_t(T) that a real clock reads T while
// the unobservable ideal time is t.

#include <functional>
#include <string_view>
#include <variant>

namespace realclock {

using ScalarFunction = std::function<double(double)>;

/// Location T_max(t) of the peak of P_t(T). Must be strictly increasing.
/// An empty map is the identity.
class PeakMap {
 public:
  PeakMap() = default;
  PeakMap(ScalarFunction map, ScalarFunction rate);

  /// T_max(t) = offset + rate * t.
  static PeakMap affine(double offset, double rate);

  bool is_identity() const noexcept { return !map_; }
  double operator()(double t) const { return map_ ? map_(t) : t; }
  /// dT_max/dt; central difference when no derivative was supplied.
  double rate(double t) const;
  /// Solves T_max(t) = reading for t in [lo, hi] by bisection.
  double inverse(double reading, double lo, double hi) const;

 private:
  ScalarFunction map_;
  ScalarFunction rate_;
};

/// Perfect clock: P_t(T) = delta(T - T_max(t)).
struct IdealClock {};

/// Normal density of width w(T) around the peak map.
struct GaussianClock {
  ScalarFunction width;
};

/// f(T,t) = delta(T-t) + a(T) delta'(T-t) + b(T) delta''(T-t); a defaults to 0.
struct ExpansionClock {
  ScalarFunction b;
  ScalarFunction db;  ///< optional analytic derivative of b
  ScalarFunction a;   ///< optional first-order term
};

/// Width rate sigma(T) = (T_P / (T_max - T))^{1/3} T_P of the most accurate clock.
struct FundamentalLimitClock {
  double t_planck = 1.0;
  double t_max = 1.0;
};

class ClockModel {
 public:
  using Kind = std::variant<IdealClock, GaussianClock, ExpansionClock, FundamentalLimitClock>;

  ClockModel(Kind kind, PeakMap peak = {});

  static ClockModel ideal();
  static ClockModel gaussian(double width);
  static ClockModel gaussian(ScalarFunction width, PeakMap peak = {});
  static ClockModel expansion(ScalarFunction b, ScalarFunction db = {});
  /// b(T) = sigma * T, i.e. constant width rate sigma.
  static ClockModel constant_rate(double sigma);
  static ClockModel fundamental(double t_planck, double t_max);

  const Kind& kind() const noexcept { return kind_; }
  const PeakMap& peak_map() const noexcept { return peak_; }
  std::string_view kind_name() const noexcept;

  template <class T>
  bool holds() const noexcept {
    return std::holds_alternative<T>(kind_);
  }

 private:
  Kind kind_;
  PeakMap peak_;
};

/// Value of P_t(T). For an ideal clock (or zero width) only the delta flag is set.
struct ClockDensity {
  double value = 0.0;
  bool is_delta = false;
};

ClockDensity pdf(const ClockModel& clock, double reading, double t);

/// sigma(T) = db/dT. Zero for an ideal clock.
double sigma(const ClockModel& clock, double reading);

/// Integral of sigma over [t0, t1]; closed form for the fundamental limit.
double integrated_sigma(const ClockModel& clock, double t0, double t1);

}  // namespace realclock
