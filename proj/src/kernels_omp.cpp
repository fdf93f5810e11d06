#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernels_common.hpp"

namespace realclock::kernels::omp {

namespace {

std::ptrdiff_t block_count(std::size_t n) {
  return static_cast<std::ptrdiff_t>((n + kBlock - 1) / kBlock);
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void trace_series(std::span<const double> energies, const ComplexMatrix& factors,
                  std::span<const double> coefficients, std::span<const double> times,
                  std::span<double> out) {
  const auto d = static_cast<Index>(energies.size());
  const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel
  {
    ComplexVector phi(d);
    ComplexVector tmp(factors.cols());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[i] = detail::trace_at(energies, factors, coefficients, times[i], phi, tmp);
    }
  }
}

CharacteristicSums characteristic_sums(std::span<const double> energies,
                                       std::span<const double> times,
                                       std::span<const double> fine_weights,
                                       std::span<const double> coarse_weights) {
  const auto d = static_cast<Index>(energies.size());
  const std::ptrdiff_t blocks = block_count(times.size());
  std::vector<ComplexMatrix> fine(static_cast<std::size_t>(blocks), ComplexMatrix::Zero(d, d));
  std::vector<ComplexMatrix> coarse(static_cast<std::size_t>(blocks), ComplexMatrix::Zero(d, d));
#pragma omp parallel
  {
    ComplexVector phi(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
      const std::size_t hi = std::min(times.size(), lo + kBlock);
      for (std::size_t i = lo; i < hi; ++i) {
        detail::accumulate_characteristic(energies, times[i], fine_weights[i], coarse_weights[i],
                                          phi, fine[b], coarse[b]);
      }
    }
  }
  CharacteristicSums sums{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    sums.fine += fine[b];
    sums.coarse += coarse[b];
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
  const auto len = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < len; ++idx) {
    out[idx] = detail::bath_amplitude(static_cast<std::size_t>(idx), n, env, system, forward);
  }
}

Eigen::Matrix2cd trace_out_environment(std::span<const complex> state) {
  const std::size_t n = detail::atoms_for_length(state.size());
  const std::size_t half = std::size_t{1} << n;
  const std::ptrdiff_t blocks = block_count(half);
  std::vector<std::array<complex, 3>> partial(static_cast<std::size_t>(blocks), {complex{}, complex{}, complex{}});
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(half, lo + kBlock);
    auto& acc = partial[b];
    for (std::size_t e = lo; e < hi; ++e) {
      const complex p = state[e];
      const complex m = state[half + e];
      acc[0] += p * std::conj(p);
      acc[1] += p * std::conj(m);
      acc[2] += m * std::conj(m);
    }
  }
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (const auto& acc : partial) {
    rho(0, 0) += acc[0];
    rho(0, 1) += acc[1];
    rho(1, 1) += acc[2];
  }
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

void sample_coherence(std::span<const double> couplings, std::span<const double> polarizations,
                      double decay, std::span<const double> times, std::span<complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = detail::coherence_at(couplings, polarizations, decay, times[i]);
  }
}

}  // namespace realclock::kernels::omp
