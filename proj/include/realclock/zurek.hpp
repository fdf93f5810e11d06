#pragma once

// Central spin coupled to N environment spins through
// H_int = sigma_z (x) sum_k g_k sigma_z^k, with no free Hamiltonians.
// The state follows |Psi(t)> = exp(+i H_int t)|Psi(0)>: each atom picks up
// exp(+i g_k t) when its spin agrees with the central spin and exp(-i g_k t)
// otherwise. Basis index = s * 2^N + e, s = 0 for |+>, bit k of e set for
// atom k in |->.

#include <cstdint>
#include <random>
#include <vector>

#include "realclock/core.hpp"
#include "realclock/kernels.hpp"

namespace realclock::zurek {

using kernels::AmplitudePair;

/// Largest bath the full state vector is built for.
inline constexpr std::size_t kMaxBruteForceAtoms = 14;

/// Amplitude pair uniform on the unit sphere of C^2.
AmplitudePair random_atom(std::mt19937_64& rng);

struct SpinBath {
  std::vector<double> couplings;   ///< g_k
  std::vector<AmplitudePair> env;  ///< (alpha_k, beta_k)
  AmplitudePair system{};          ///< (a, b)

  void validate() const;
  std::size_t size() const noexcept { return couplings.size(); }
  /// |alpha_k|^2 - |beta_k|^2.
  std::vector<double> polarizations() const;

  /// Couplings uniform in [g_lo, g_hi], atom amplitudes uniform on the unit sphere of C^2.
  static SpinBath random(std::size_t n, double g_lo, double g_hi, std::uint64_t seed,
                         AmplitudePair system);
  /// g_k = k g0 (k = 1..n), every atom in (|+> + |->)/sqrt(2).
  static SpinBath commensurate(std::size_t n, double g0, AmplitudePair system);
};

/// prod_k [cos 2 g_k t + i (|alpha_k|^2 - |beta_k|^2) sin 2 g_k t].
complex z_ideal(const SpinBath& bath, double t);

/// Coherence from the assembled 2^{N+1} state and an explicit partial trace.
complex brute_force_z(const SpinBath& bath, double t);

/// sum_k (2 g_k)^2 T_P^{4/3}, the coefficient of t^{2/3} in the real-clock exponent.
double suppression_rate(const SpinBath& bath, double t_planck);

/// exp(-sum_k (2 g_k)^2 T_P^{4/3} t^{2/3}).
double suppression_envelope(const SpinBath& bath, double t, double t_planck);

/// z_ideal(t) * suppression_envelope(t).
complex z_realclock(const SpinBath& bath, double t, double t_planck);

struct ReducedState {
  double population_plus = 0.0;   ///< |a|^2
  double population_minus = 0.0;  ///< |b|^2
  complex z{1.0, 0.0};
  DensityMatrix rho;
};

/// rho_c = |a|^2 |+><+| + |b|^2 |-><-| + z a b* |+><-| + h.c.
ReducedState reduced_density(const SpinBath& bath, complex z);

/// Diagonal 2^{N+1} interaction Hamiltonian in the basis above (N <= 10).
HermitianOperator interaction_hamiltonian(const SpinBath& bath);

/// Initial product state a|+> + b|->  (x)  prod_k (alpha_k|+> + beta_k|->).
ComplexVector initial_state(const SpinBath& bath);

struct CoherenceMode {
  bool real_clock = false;
  double t_planck = 0.0;

  static CoherenceMode ideal() { return {}; }
  static CoherenceMode realclock(double t_planck) { return {true, t_planck}; }
};

struct Exceedance {
  double t;
  double modulus;
};

struct RecurrenceScan {
  std::vector<double> times;
  std::vector<double> modulus;       ///< |z(t_i)|
  std::vector<double> running_sup;   ///< sup of |z| over [t_i, horizon], refined peaks included
  std::vector<Exceedance> exceedances;
};

/// Samples |z| on n_samples uniform points of [0, horizon] and refines every
/// local maximum above the threshold by golden-section search (1e-6 in t).
RecurrenceScan recurrence_scan(const SpinBath& bath, const CoherenceMode& mode, double horizon,
                               std::size_t n_samples, double threshold);

}  // namespace realclock::zurek
