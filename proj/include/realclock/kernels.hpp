#pragma once

// Data-parallel inner loops. Every kernel exists twice with one contract:
// `serial` is the plain reference loop kept for testing and benchmarking,
// `omp` is the OpenMP version the library calls. The OpenMP reductions sum
// fixed-size blocks in index order, so their results do not depend on the
// thread count.

#include <array>
#include <cstddef>
#include <span>

#include "realclock/core.hpp"

namespace realclock::kernels {

/// Time points (or basis states) per reduction block in the OpenMP kernels.
inline constexpr std::size_t kBlock = 256;

using AmplitudePair = std::array<complex, 2>;

struct CharacteristicSums {
  ComplexMatrix fine;    ///< sum_i w_i phi_n(t_i) conj(phi_m(t_i))
  ComplexMatrix coarse;  ///< same with the coarse Simpson weights
};

namespace serial {

/// out[i] = sum_c coef_c |sum_n A(n,c) phi_n(t_i)|^2 with phi_n(t) = exp(-i omega_n t).
/// For O = sum_j l_j u_j u_j^dagger and rho = sum_k p_k psi_k psi_k^dagger in the
/// energy basis, columns conj(u_j) o psi_k with coefficients l_j p_k give Tr(O rho(t)).
void trace_series(std::span<const double> energies, const ComplexMatrix& factors,
                  std::span<const double> coefficients, std::span<const double> times,
                  std::span<double> out);

CharacteristicSums characteristic_sums(std::span<const double> energies,
                                       std::span<const double> times,
                                       std::span<const double> fine_weights,
                                       std::span<const double> coarse_weights);

/// Spin-bath state vector, index = s * 2^N + e; bit k of e set means atom k is |->,
/// s = 1 means the central spin is |->.
void assemble_bath_state(std::span<const double> couplings, std::span<const AmplitudePair> env,
                         const AmplitudePair& system, double t, std::span<complex> out);

/// 2x2 reduced matrix of the central spin from a state vector of length 2 * 2^N.
Eigen::Matrix2cd trace_out_environment(std::span<const complex> state);

/// z(t_i) = prod_k [cos 2 g_k t + i p_k sin 2 g_k t] * exp(-decay * t^{2/3}).
void sample_coherence(std::span<const double> couplings, std::span<const double> polarizations,
                      double decay, std::span<const double> times, std::span<complex> out);

}  // namespace serial

namespace omp {

void trace_series(std::span<const double> energies, const ComplexMatrix& factors,
                  std::span<const double> coefficients, std::span<const double> times,
                  std::span<double> out);

CharacteristicSums characteristic_sums(std::span<const double> energies,
                                       std::span<const double> times,
                                       std::span<const double> fine_weights,
                                       std::span<const double> coarse_weights);

void assemble_bath_state(std::span<const double> couplings, std::span<const AmplitudePair> env,
                         const AmplitudePair& system, double t, std::span<complex> out);

Eigen::Matrix2cd trace_out_environment(std::span<const complex> state);

void sample_coherence(std::span<const double> couplings, std::span<const double> polarizations,
                      double decay, std::span<const double> times, std::span<complex> out);

/// Threads an OpenMP parallel region would use (1 without OpenMP).
int max_threads();

}  // namespace omp

}  // namespace realclock::kernels
