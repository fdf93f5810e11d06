#include "realclock/clock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "realclock/errors.hpp"

namespace realclock {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

double central_difference(const ScalarFunction& f, double x) {
  const double h = fd_step(x);
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double checked_b(const ExpansionClock& c, double reading) {
  const double b = c.b(reading);
  if (!(b >= 0.0)) {
    std::ostringstream os;
    os << "expansion clock: b(" << reading << ") = " << b << " must be non-negative";
    throw DomainError(os.str());
  }
  return b;
}

void check_fundamental(const FundamentalLimitClock& c, double reading, bool allow_endpoint) {
  const bool bad = allow_endpoint ? reading > c.t_max : reading >= c.t_max;
  if (bad) {
    std::ostringstream os;
    os << "fundamental-limit clock: T = " << reading << (allow_endpoint ? " exceeds" : " reaches")
       << " T_max = " << c.t_max << " (sigma is singular there)";
    throw DomainError(os.str());
  }
}

}  // namespace

PeakMap::PeakMap(ScalarFunction map, ScalarFunction rate) : map_(std::move(map)), rate_(std::move(rate)) {}

PeakMap PeakMap::affine(double offset, double rate) {
  if (!(rate > 0.0)) {
    throw ValidationError("PeakMap::affine: rate must be positive (peak map strictly increasing)");
  }
  if (offset == 0.0 && rate == 1.0) {
    return PeakMap{};
  }
  return PeakMap([offset, rate](double t) { return offset + rate * t; },
                 [rate](double) { return rate; });
}

double PeakMap::rate(double t) const {
  if (!map_) {
    return 1.0;
  }
  if (rate_) {
    return rate_(t);
  }
  return central_difference(map_, t);
}

double PeakMap::inverse(double reading, double lo, double hi) const {
  if (!map_) {
    return reading;
  }
  double flo = (*this)(lo) - reading;
  const double fhi = (*this)(hi) - reading;
  if (flo > 0.0 || fhi < 0.0) {
    throw DomainError("PeakMap::inverse: reading not attained on the search interval");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = (*this)(mid) - reading;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ClockModel::ClockModel(Kind kind, PeakMap peak) : kind_(std::move(kind)), peak_(std::move(peak)) {
  std::visit(overloaded{
                 [](const IdealClock&) {},
                 [](const GaussianClock& g) {
                   if (!g.width) throw ValidationError("gaussian clock: width function missing");
                 },
                 [](const ExpansionClock& e) {
                   if (!e.b) throw ValidationError("expansion clock: b(T) missing");
                 },
                 [](const FundamentalLimitClock& f) {
                   if (!(f.t_planck > 0.0) || !std::isfinite(f.t_planck)) {
                     throw ValidationError("fundamental-limit clock: T_Planck must be positive");
                   }
                   if (!std::isfinite(f.t_max)) {
                     throw ValidationError("fundamental-limit clock: T_max must be finite");
                   }
                 },
             },
             kind_);
}

ClockModel ClockModel::ideal() { return ClockModel(IdealClock{}); }

ClockModel ClockModel::gaussian(double width) {
  if (!(width >= 0.0)) {
    throw ValidationError("gaussian clock: width must be non-negative");
  }
  return ClockModel(GaussianClock{[width](double) { return width; }});
}

ClockModel ClockModel::gaussian(ScalarFunction width, PeakMap peak) {
  return ClockModel(GaussianClock{std::move(width)}, std::move(peak));
}

ClockModel ClockModel::expansion(ScalarFunction b, ScalarFunction db) {
  return ClockModel(ExpansionClock{std::move(b), std::move(db), {}});
}

ClockModel ClockModel::constant_rate(double rate) {
  if (!(rate >= 0.0)) {
    throw ValidationError("constant-rate clock: sigma must be non-negative");
  }
  return expansion([rate](double t) { return rate * t; }, [rate](double) { return rate; });
}

ClockModel ClockModel::fundamental(double t_planck, double t_max) {
  return ClockModel(FundamentalLimitClock{t_planck, t_max});
}

std::string_view ClockModel::kind_name() const noexcept {
  return std::visit(overloaded{
                        [](const IdealClock&) { return std::string_view("ideal"); },
                        [](const GaussianClock&) { return std::string_view("gaussian"); },
                        [](const ExpansionClock&) { return std::string_view("expansion"); },
                        [](const FundamentalLimitClock&) { return std::string_view("fundamental"); },
                    },
                    kind_);
}

ClockDensity pdf(const ClockModel& clock, double reading, double t) {
  return std::visit(
      overloaded{
          [](const IdealClock&) { return ClockDensity{0.0, true}; },
          [&](const GaussianClock& g) {
            const double w = g.width(reading);
            if (!(w >= 0.0)) {
              throw DomainError("gaussian clock: negative width");
            }
            if (w == 0.0) {
              return ClockDensity{0.0, true};
            }
            // Density in t: the Jacobian dT_max/dt keeps the t-integral at one.
            const auto& peak = clock.peak_map();
            const double u = (reading - peak(t)) / w;
            const double norm = std::numbers::inv_sqrtpi / (std::numbers::sqrt2 * w);
            return ClockDensity{norm * std::exp(-0.5 * u * u) * peak.rate(t), false};
          },
          [](const ExpansionClock&) -> ClockDensity {
            throw UnsupportedKind("pdf: expansion clocks have no pointwise density");
          },
          [](const FundamentalLimitClock&) -> ClockDensity {
            throw UnsupportedKind("pdf: fundamental-limit clocks are described by sigma(T) only");
          },
      },
      clock.kind());
}

double sigma(const ClockModel& clock, double reading) {
  return std::visit(
      overloaded{
          [](const IdealClock&) { return 0.0; },
          [](const GaussianClock&) -> double {
            throw UnsupportedKind("sigma: gaussian clocks are used through smearing, not sigma(T)");
          },
          [&](const ExpansionClock& e) {
            checked_b(e, reading);
            double s = e.db ? e.db(reading) : central_difference(e.b, reading);
            if (s < 0.0) {
              if (s > -1e-9) {
                return 0.0;  // finite-difference noise on a flat b(T)
              }
              std::ostringstream os;
              os << "expansion clock: sigma(" << reading << ") = " << s << " is negative";
              throw DomainError(os.str());
            }
            return s;
          },
          [&](const FundamentalLimitClock& f) {
            check_fundamental(f, reading, false);
            return std::cbrt(f.t_planck / (f.t_max - reading)) * f.t_planck;
          },
      },
      clock.kind());
}

double integrated_sigma(const ClockModel& clock, double t0, double t1) {
  if (t1 < t0) {
    throw DomainError("integrated_sigma: requires T0 <= T1");
  }
  if (t0 == t1) {
    return 0.0;
  }
  return std::visit(
      overloaded{
          [](const IdealClock&) { return 0.0; },
          [](const GaussianClock&) -> double {
            throw UnsupportedKind("integrated_sigma: not defined for gaussian clocks");
          },
          [&](const ExpansionClock& e) {
            const double d = checked_b(e, t1) - checked_b(e, t0);
            if (d < 0.0) {
              throw DomainError("integrated_sigma: b(T) decreases over the interval");
            }
            return d;
          },
          [&](const FundamentalLimitClock& f) {
            check_fundamental(f, t1, true);
            // T_P^{4/3} * 3/2 * [(T_max - T0)^{2/3} - (T_max - T1)^{2/3}]
            const double c0 = std::cbrt(f.t_max - t0);
            const double c1 = std::cbrt(f.t_max - t1);
            return f.t_planck * std::cbrt(f.t_planck) * 1.5 * (c0 * c0 - c1 * c1);
          },
      },
      clock.kind());
}

}  // namespace realclock
