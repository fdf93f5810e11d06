#include "kernels_common.hpp"

namespace realclock::kernels::serial {

void trace_series(std::span<const double> energies, const ComplexMatrix& factors,
                  std::span<const double> coefficients, std::span<const double> times,
                  std::span<double> out) {
  const auto d = static_cast<Index>(energies.size());
  ComplexVector phi(d);
  ComplexVector tmp(factors.cols());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i] = detail::trace_at(energies, factors, coefficients, times[i], phi, tmp);
  }
}

CharacteristicSums characteristic_sums(std::span<const double> energies,
                                       std::span<const double> times,
                                       std::span<const double> fine_weights,
                                       std::span<const double> coarse_weights) {
  const auto d = static_cast<Index>(energies.size());
  CharacteristicSums sums{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
  ComplexVector phi(d);
  for (std::size_t i = 0; i < times.size(); ++i) {
    detail::accumulate_characteristic(energies, times[i], fine_weights[i], coarse_weights[i], phi,
                                      sums.fine, sums.coarse);
  }
  return sums;
}

void assemble_bath_state(std::span<const double> couplings, std::span<const AmplitudePair> env,
                         const AmplitudePair& system, double t, std::span<complex> out) {
  const std::size_t n = couplings.size();
  std::vector<complex> forward(n);
  for (std::size_t k = 0; k < n; ++k) {
    forward[k] = std::polar(1.0, couplings[k] * t);
  }
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out[idx] = detail::bath_amplitude(idx, n, env, system, forward);
  }
}

Eigen::Matrix2cd trace_out_environment(std::span<const complex> state) {
  const std::size_t n = detail::atoms_for_length(state.size());
  const std::size_t half = std::size_t{1} << n;
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (std::size_t e = 0; e < half; ++e) {
    const complex p = state[e];
    const complex m = state[half + e];
    rho(0, 0) += p * std::conj(p);
    rho(0, 1) += p * std::conj(m);
    rho(1, 1) += m * std::conj(m);
  }
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

void sample_coherence(std::span<const double> couplings, std::span<const double> polarizations,
                      double decay, std::span<const double> times, std::span<complex> out) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i] = detail::coherence_at(couplings, polarizations, decay, times[i]);
  }
}

}  // namespace realclock::kernels::serial
