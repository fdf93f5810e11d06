#include "realclock/free_particle_clock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace realclock {

void FreeParticleClock::validate() const {
  if (dimension < 4 || dimension % 2 != 0) {
    throw ValidationError("free-particle clock: dimension must be even and at least 4");
  }
  if (!(length > 0.0) || !(mass > 0.0) || !(velocity > 0.0) || !(width > 0.0)) {
    throw ValidationError("free-particle clock: length, mass, velocity and width must be positive");
  }
  const double k_max = std::numbers::pi / spacing();
  const double p0 = mass * velocity;
  if (p0 + 8.0 / (2.0 * width) > k_max) {
    std::ostringstream os;
    os << "free-particle clock: momentum " << p0 << " is not resolved by the lattice (k_max = "
       << k_max << ")";
    throw ValidationError(os.str());
  }
}

double FreeParticleClock::position(Index j) const noexcept {
  return -0.5 * length + static_cast<double>(j) * spacing();
}

Index FreeParticleClock::nearest_index(double x) const {
  const double u = (x + 0.5 * length) / spacing();
  const auto n = static_cast<long long>(std::llround(u));
  const auto d = static_cast<long long>(dimension);
  return static_cast<Index>(((n % d) + d) % d);
}

HermitianOperator FreeParticleClock::hamiltonian() const {
  validate();
  const Index n = dimension;
  const double dk = 2.0 * std::numbers::pi / length;
  // H_ij depends only on i - j; tabulate one row of the circulant.
  RealVector row = RealVector::Zero(n);
  for (Index m = -n / 2; m < n / 2; ++m) {
    const double k = dk * static_cast<double>(m);
    const double e = k * k / (2.0 * mass);
    for (Index r = 0; r < n; ++r) {
      row(r) += e * std::cos(k * static_cast<double>(r) * spacing());
    }
  }
  row /= static_cast<double>(n);
  ComplexMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      h(i, j) = row((i - j + n) % n);
    }
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator FreeParticleClock::position_operator() const {
  validate();
  RealVector x(dimension);
  for (Index j = 0; j < dimension; ++j) {
    x(j) = position(j);
  }
  return HermitianOperator::diagonal({x.data(), static_cast<std::size_t>(x.size())});
}

ComplexVector FreeParticleClock::initial_state() const {
  validate();
  ComplexVector psi(dimension);
  const double p0 = mass * velocity;
  for (Index j = 0; j < dimension; ++j) {
    const double x = position(j);
    const double g = (x - x0) / (2.0 * width);
    psi(j) = std::polar(std::exp(-g * g), p0 * x);
  }
  psi.normalize();
  return psi;
}

double FreeParticleClock::spread(double t) const noexcept {
  const double r = t / (2.0 * mass * width * width);
  return width * std::sqrt(1.0 + r * r);
}

ClockModel FreeParticleClock::semiclassical_model() const {
  validate();
  const FreeParticleClock self = *this;
  auto w = [self](double reading) { return self.spread((reading - self.x0) / self.velocity); };
  return ClockModel::gaussian(w, PeakMap::affine(x0, velocity));
}

}  // namespace realclock
