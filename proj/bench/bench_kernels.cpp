// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "realclock/kernels.hpp"
#include "realclock/quadrature.hpp"

using namespace realclock;
namespace k = realclock::kernels;

namespace {

struct SeriesInput {
  std::vector<double> energies;
  ComplexMatrix factors;
  std::vector<double> coefficients;
  std::vector<double> times;
};

SeriesInput series_input(Index dim, std::size_t n_times) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  SeriesInput in;
  for (Index i = 0; i < dim; ++i) {
    in.energies.push_back(n(rng));
  }
  in.factors = ComplexMatrix::Random(dim, 4);
  in.coefficients = {1.0, 0.5, -0.25, 0.125};
  in.times = TimeGrid{-20.0, 20.0, n_times}.points();
  return in;
}

template <auto Kernel>
void bm_trace_series(benchmark::State& state) {
  const SeriesInput in = series_input(state.range(0), 16001);
  std::vector<double> out(in.times.size());
  for (auto _ : state) {
    Kernel(in.energies, in.factors, in.coefficients, in.times, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.times.size()));
}

template <auto Kernel>
void bm_characteristic_sums(benchmark::State& state) {
  const SeriesInput in = series_input(state.range(0), 16001);
  const SimpsonWeights w = simpson_weights(TimeGrid{-20.0, 20.0, 16001});
  for (auto _ : state) {
    auto sums = Kernel(in.energies, in.times, w.fine, w.coarse);
    benchmark::DoNotOptimize(sums.fine.data());
  }
}

struct Bath {
  std::vector<double> couplings;
  std::vector<k::AmplitudePair> env;
  k::AmplitudePair system{complex(0.6, 0.0), complex(0.0, 0.8)};
};

Bath bath(std::size_t n) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  Bath b;
  for (std::size_t i = 0; i < n; ++i) {
    b.couplings.push_back(u(rng));
    b.env.push_back({complex(0.8, 0.0), complex(0.0, 0.6)});
  }
  return b;
}

template <auto Assemble, auto Trace>
void bm_bath_state(benchmark::State& state) {
  const Bath b = bath(static_cast<std::size_t>(state.range(0)));
  std::vector<complex> psi(std::size_t{2} << b.couplings.size());
  for (auto _ : state) {
    Assemble(b.couplings, b.env, b.system, 3.0, psi);
    auto rho = Trace(psi);
    benchmark::DoNotOptimize(rho.data());
  }
}

template <auto Kernel>
void bm_sample_coherence(benchmark::State& state) {
  const Bath b = bath(10);
  const std::vector<double> pol(b.couplings.size(), 0.28);
  const std::vector<double> t = TimeGrid{0.0, 100.0, 100001}.points();
  std::vector<complex> z(t.size());
  for (auto _ : state) {
    Kernel(b.couplings, pol, 0.1, t, z);
    benchmark::DoNotOptimize(z.data());
  }
}

}  // namespace

BENCHMARK(bm_trace_series<k::serial::trace_series>)->Arg(2)->Arg(64)->Arg(256);
BENCHMARK(bm_trace_series<k::omp::trace_series>)->Arg(2)->Arg(64)->Arg(256);
BENCHMARK(bm_characteristic_sums<k::serial::characteristic_sums>)->Arg(2)->Arg(16);
BENCHMARK(bm_characteristic_sums<k::omp::characteristic_sums>)->Arg(2)->Arg(16);
BENCHMARK(bm_bath_state<k::serial::assemble_bath_state, k::serial::trace_out_environment>)
    ->Arg(10)
    ->Arg(14);
BENCHMARK(bm_bath_state<k::omp::assemble_bath_state, k::omp::trace_out_environment>)
    ->Arg(10)
    ->Arg(14);
BENCHMARK(bm_sample_coherence<k::serial::sample_coherence>);
BENCHMARK(bm_sample_coherence<k::omp::sample_coherence>);

BENCHMARK_MAIN();
