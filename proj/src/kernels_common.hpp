#pragma once

// Per-index bodies shared by the serial and OpenMP kernels, so both paths
// perform the same floating-point operations for every element.

#include <cmath>
#include <span>

#include "realclock/kernels.hpp"

namespace realclock::kernels::detail {

inline void fill_phases(std::span<const double> energies, double t, ComplexVector& phi) {
  for (std::size_t n = 0; n < energies.size(); ++n) {
    phi(static_cast<Index>(n)) = std::polar(1.0, -energies[n] * t);
  }
}

inline double trace_at(std::span<const double> energies, const ComplexMatrix& factors,
                       std::span<const double> coefficients, double t, ComplexVector& phi,
                       ComplexVector& tmp) {
  fill_phases(energies, t, phi);
  tmp.noalias() = factors.transpose() * phi;
  double acc = 0.0;
  for (std::size_t c = 0; c < coefficients.size(); ++c) {
    acc += coefficients[c] * std::norm(tmp(static_cast<Index>(c)));
  }
  return acc;
}

inline void accumulate_characteristic(std::span<const double> energies, double t, double fine_w,
                                      double coarse_w, ComplexVector& phi, ComplexMatrix& fine,
                                      ComplexMatrix& coarse) {
  fill_phases(energies, t, phi);
  const ComplexMatrix outer = phi * phi.adjoint();
  fine += fine_w * outer;
  if (coarse_w != 0.0) {
    coarse += coarse_w * outer;
  }
}

inline complex bath_amplitude(std::size_t index, std::size_t n_atoms,
                              std::span<const AmplitudePair> env, const AmplitudePair& system,
                              std::span<const complex> forward_phase) {
  const std::size_t s = index >> n_atoms;
  complex amp = system[s];
  for (std::size_t k = 0; k < n_atoms; ++k) {
    const std::size_t bit = (index >> k) & 1u;
    // Phase exp(+i g t) when the central spin and atom k agree, exp(-i g t) otherwise.
    const complex phase = (bit == s) ? forward_phase[k] : std::conj(forward_phase[k]);
    amp *= env[k][bit] * phase;
  }
  return amp;
}

inline complex coherence_at(std::span<const double> couplings, std::span<const double> polarizations,
                            double decay, double t) {
  complex z = 1.0;
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    const double arg = 2.0 * couplings[k] * t;
    z *= complex(std::cos(arg), polarizations[k] * std::sin(arg));
  }
  if (decay != 0.0) {
    const double c = std::cbrt(t);
    z *= std::exp(-decay * c * c);
  }
  return z;
}

inline std::size_t atoms_for_length(std::size_t length) {
  std::size_t n = 0;
  while ((std::size_t{2} << n) < length) {
    ++n;
  }
  if ((std::size_t{2} << n) != length) {
    throw ValidationError("bath state length must be 2^(N+1)");
  }
  return n;
}

}  // namespace realclock::kernels::detail
