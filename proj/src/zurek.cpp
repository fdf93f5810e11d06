#include "realclock/zurek.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "realclock/clock_accuracy.hpp"

namespace realclock::zurek {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kGoldenTol = 1e-6;
constexpr std::size_t kMaxHamiltonianAtoms = 10;

double norm2(const AmplitudePair& p) { return std::norm(p[0]) + std::norm(p[1]); }

void require_normalized(const AmplitudePair& p, const char* what, std::size_t k) {
  const double n = norm2(p);
  if (std::abs(n - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "spin bath: " << what;
    if (k != static_cast<std::size_t>(-1)) {
      os << " " << k;
    }
    os << " has squared norm " << n << ", expected 1";
    throw ValidationError(os.str());
  }
}

double modulus_at(const SpinBath& bath, const std::vector<double>& pol, double decay, double t) {
  const double tt[1] = {t};
  complex z[1];
  kernels::serial::sample_coherence(bath.couplings, pol, decay, tt, z);
  return std::abs(z[0]);
}

// Maximizes |z| on [lo, hi] by golden-section search.
Exceedance refine(const SpinBath& bath, const std::vector<double>& pol, double decay, double lo,
                  double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = modulus_at(bath, pol, decay, c);
  double fd = modulus_at(bath, pol, decay, d);
  while (hi - lo > kGoldenTol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = modulus_at(bath, pol, decay, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = modulus_at(bath, pol, decay, d);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, modulus_at(bath, pol, decay, t)};
}

}  // namespace

AmplitudePair random_atom(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  AmplitudePair p{};
  double norm = 0.0;
  do {
    const double r0 = normal(rng);
    const double i0 = normal(rng);
    const double r1 = normal(rng);
    const double i1 = normal(rng);
    p = {complex(r0, i0), complex(r1, i1)};
    norm = std::sqrt(norm2(p));
  } while (norm == 0.0);
  p[0] /= norm;
  p[1] /= norm;
  return p;
}

void SpinBath::validate() const {
  if (couplings.empty()) {
    throw ValidationError("spin bath: needs at least one environment atom");
  }
  if (env.size() != couplings.size()) {
    std::ostringstream os;
    os << "spin bath: " << couplings.size() << " couplings but " << env.size()
       << " atom amplitude pairs";
    throw ValidationError(os.str());
  }
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    if (!std::isfinite(couplings[k])) {
      throw ValidationError("spin bath: couplings must be finite");
    }
    require_normalized(env[k], "atom", k);
  }
  require_normalized(system, "system spin", static_cast<std::size_t>(-1));
}

std::vector<double> SpinBath::polarizations() const {
  std::vector<double> p(env.size());
  for (std::size_t k = 0; k < env.size(); ++k) {
    p[k] = std::norm(env[k][0]) - std::norm(env[k][1]);
  }
  return p;
}

SpinBath SpinBath::random(std::size_t n, double g_lo, double g_hi, std::uint64_t seed,
                          AmplitudePair system) {
  if (n == 0 || !(g_lo <= g_hi)) {
    throw ValidationError("spin bath: random bath needs n >= 1 and g_lo <= g_hi");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coupling(g_lo, g_hi);
  SpinBath bath;
  bath.system = system;
  for (std::size_t k = 0; k < n; ++k) {
    bath.couplings.push_back(coupling(rng));
    bath.env.push_back(random_atom(rng));
  }
  bath.validate();
  return bath;
}

SpinBath SpinBath::commensurate(std::size_t n, double g0, AmplitudePair system) {
  const double h = std::sqrt(0.5);
  SpinBath bath;
  bath.system = system;
  for (std::size_t k = 1; k <= n; ++k) {
    bath.couplings.push_back(static_cast<double>(k) * g0);
    bath.env.push_back({complex(h, 0.0), complex(h, 0.0)});
  }
  bath.validate();
  return bath;
}

complex z_ideal(const SpinBath& bath, double t) {
  bath.validate();
  const std::vector<double> pol = bath.polarizations();
  const double tt[1] = {t};
  complex z[1];
  kernels::serial::sample_coherence(bath.couplings, pol, 0.0, tt, z);
  return z[0];
}

complex brute_force_z(const SpinBath& bath, double t) {
  bath.validate();
  if (bath.size() > kMaxBruteForceAtoms) {
    std::ostringstream os;
    os << "brute_force_z: " << bath.size() << " atoms exceed the limit of " << kMaxBruteForceAtoms;
    throw ResourceError(os.str());
  }
  const complex ab = bath.system[0] * std::conj(bath.system[1]);
  if (ab == complex(0.0, 0.0)) {
    throw DegenerateState("brute_force_z: a b* = 0, the coherence is undefined");
  }
  std::vector<complex> state(std::size_t{2} << bath.size());
  kernels::omp::assemble_bath_state(bath.couplings, bath.env, bath.system, t, state);
  const Eigen::Matrix2cd rho = kernels::omp::trace_out_environment(state);
  return rho(0, 1) / ab;
}

double suppression_rate(const SpinBath& bath, double t_planck) {
  if (!(t_planck > 0.0)) {
    throw ValidationError("real-clock suppression: T_planck must be positive");
  }
  double sum = 0.0;
  for (double g : bath.couplings) {
    sum += 4.0 * g * g;
  }
  return limits::decoherence_exponent(1.0, 1.0, t_planck) * sum;
}

double suppression_envelope(const SpinBath& bath, double t, double t_planck) {
  const double c = std::cbrt(t);
  return std::exp(-suppression_rate(bath, t_planck) * c * c);
}

complex z_realclock(const SpinBath& bath, double t, double t_planck) {
  if (!(t >= 0.0)) {
    throw ValidationError("z_realclock: t must be non-negative");
  }
  bath.validate();
  const std::vector<double> pol = bath.polarizations();
  const double tt[1] = {t};
  complex z[1];
  kernels::serial::sample_coherence(bath.couplings, pol, suppression_rate(bath, t_planck), tt, z);
  return z[0];
}

ReducedState reduced_density(const SpinBath& bath, complex z) {
  bath.validate();
  if (std::abs(z) > 1.0 + 1e-10) {
    std::ostringstream os;
    os << "reduced_density: |z| = " << std::abs(z) << " exceeds 1, state would not be positive";
    throw ValidationError(os.str());
  }
  const complex a = bath.system[0];
  const complex b = bath.system[1];
  ComplexMatrix m(2, 2);
  m(0, 0) = std::norm(a);
  m(1, 1) = std::norm(b);
  m(0, 1) = z * a * std::conj(b);
  m(1, 0) = std::conj(m(0, 1));
  return {std::norm(a), std::norm(b), z, DensityMatrix(std::move(m))};
}

HermitianOperator interaction_hamiltonian(const SpinBath& bath) {
  bath.validate();
  const std::size_t n = bath.size();
  if (n > kMaxHamiltonianAtoms) {
    throw ResourceError("interaction_hamiltonian: at most 10 atoms");
  }
  const std::size_t half = std::size_t{1} << n;
  std::vector<double> diag(2 * half);
  for (std::size_t idx = 0; idx < diag.size(); ++idx) {
    const double s = idx < half ? 1.0 : -1.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += ((idx >> k) & 1u) ? -bath.couplings[k] : bath.couplings[k];
    }
    diag[idx] = s * sum;
  }
  return HermitianOperator::diagonal(diag);
}

ComplexVector initial_state(const SpinBath& bath) {
  bath.validate();
  std::vector<complex> amp(std::size_t{2} << bath.size());
  kernels::serial::assemble_bath_state(bath.couplings, bath.env, bath.system, 0.0, amp);
  return Eigen::Map<ComplexVector>(amp.data(), static_cast<Index>(amp.size()));
}

RecurrenceScan recurrence_scan(const SpinBath& bath, const CoherenceMode& mode, double horizon,
                               std::size_t n_samples, double threshold) {
  bath.validate();
  if (n_samples < 1000) {
    throw ValidationError("recurrence_scan: needs at least 1000 samples");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("recurrence_scan: horizon must be positive");
  }
  if (!(threshold > 0.0)) {
    throw ValidationError("recurrence_scan: threshold must be positive");
  }
  const std::vector<double> pol = bath.polarizations();
  const double decay = mode.real_clock ? suppression_rate(bath, mode.t_planck) : 0.0;

  RecurrenceScan scan;
  scan.times.resize(n_samples);
  const double dt = horizon / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    scan.times[i] = i + 1 == n_samples ? horizon : static_cast<double>(i) * dt;
  }
  std::vector<complex> z(n_samples);
  kernels::omp::sample_coherence(bath.couplings, pol, decay, scan.times, z);
  scan.modulus.resize(n_samples);
  std::transform(z.begin(), z.end(), scan.modulus.begin(), [](complex v) { return std::abs(v); });

  // Best refined peak inside each cell [t_i, t_{i+1}).
  std::vector<double> cell_peak(n_samples, 0.0);
  const auto& m = scan.modulus;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const bool left = i == 0 || m[i] >= m[i - 1];
    const bool right = i + 1 == n_samples || m[i] >= m[i + 1];
    if (!(left && right) || !(m[i] > threshold)) {
      continue;
    }
    const double lo = scan.times[i == 0 ? 0 : i - 1];
    const double hi = scan.times[i + 1 == n_samples ? i : i + 1];
    Exceedance best{scan.times[i], m[i]};
    const Exceedance refined = refine(bath, pol, decay, lo, hi);
    if (refined.modulus > best.modulus) {
      best = refined;
    }
    scan.exceedances.push_back(best);
    const auto cell = std::min(n_samples - 1, static_cast<std::size_t>(best.t / dt));
    cell_peak[cell] = std::max(cell_peak[cell], best.modulus);
  }

  scan.running_sup.resize(n_samples);
  double sup = 0.0;
  for (std::size_t i = n_samples; i-- > 0;) {
    sup = std::max({sup, m[i], cell_peak[i]});
    scan.running_sup[i] = sup;
  }
  return scan;
}

}  // namespace realclock::zurek
