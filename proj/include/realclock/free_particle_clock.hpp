#pragma once

// A fully quantum clock: a free particle on a periodic position lattice whose
// position is read as the time. The initial state is a Gaussian wavepacket
// moving with velocity v, so <x>(t) = x0 + v t until it nears the boundary.

#include "realclock/clock.hpp"
#include "realclock/core.hpp"

namespace realclock {

struct FreeParticleClock {
  Index dimension = 256;
  double length = 80.0;  ///< box [-L/2, L/2), periodic
  double mass = 4.0;
  double velocity = 2.0;
  double x0 = -8.0;     ///< initial packet center
  double width = 3.0;   ///< initial position standard deviation

  void validate() const;

  double spacing() const noexcept { return length / static_cast<double>(dimension); }
  double position(Index j) const noexcept;
  /// Lattice index closest to x (periodically wrapped).
  Index nearest_index(double x) const;

  /// Spectral kinetic energy F^dagger diag(k^2 / 2m) F; real symmetric.
  HermitianOperator hamiltonian() const;
  HermitianOperator position_operator() const;
  /// psi_j ~ exp(-(x_j - x0)^2 / (4 s0^2) + i m v x_j), normalized on the lattice.
  ComplexVector initial_state() const;

  /// Packet width s(t) = s0 sqrt(1 + (t / (2 m s0^2))^2).
  double spread(double t) const noexcept;
  /// Gaussian reading density with T_max(t) = x0 + v t and width s(t(T)).
  ClockModel semiclassical_model() const;
};

}  // namespace realclock
