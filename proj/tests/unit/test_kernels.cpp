#include <doctest.h>

#include <random>
#include <vector>

#include <omp.h>

#include "realclock/kernels.hpp"
#include "realclock/quadrature.hpp"
#include "support/oracles.hpp"

using namespace realclock;
namespace k = realclock::kernels;

namespace {

struct ThreadCount {
  explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
  int saved;
};

std::vector<double> energies(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> e(d);
  for (auto& v : e) {
    v = u(rng);
  }
  return e;
}

std::vector<k::AmplitudePair> atoms(std::mt19937_64& rng, std::size_t n) {
  std::vector<k::AmplitudePair> out;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexVector v = oracle::random_pure(2, rng);
    out.push_back({v(0), v(1)});
  }
  return out;
}

}  // namespace

TEST_CASE("trace series kernels agree") {
  std::mt19937_64 rng(61);
  const std::vector<double> e = energies(rng, 5);
  const ComplexMatrix a = oracle::random_hermitian(5, rng).leftCols(3);
  const std::vector<double> coef{0.2, -1.0, 0.7};
  const TimeGrid grid{-4.0, 4.0, 1001};
  const std::vector<double> t = grid.points();
  std::vector<double> s(t.size()), p1(t.size()), p4(t.size());
  k::serial::trace_series(e, a, coef, t, s);
  {
    ThreadCount tc(1);
    k::omp::trace_series(e, a, coef, t, p1);
  }
  {
    ThreadCount tc(4);
    k::omp::trace_series(e, a, coef, t, p4);
  }
  CHECK(s == p1);
  CHECK(s == p4);

  // Direct evaluation at one time.
  const double t0 = t[123];
  double want = 0.0;
  for (int c = 0; c < 3; ++c) {
    complex acc{};
    for (int n = 0; n < 5; ++n) {
      acc += a(n, c) * std::polar(1.0, -e[n] * t0);
    }
    want += coef[c] * std::norm(acc);
  }
  CHECK(s[123] == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("characteristic sums do not depend on the thread count") {
  std::mt19937_64 rng(62);
  const std::vector<double> e = energies(rng, 4);
  const TimeGrid grid{-5.0, 5.0, 4001};
  const SimpsonWeights w = simpson_weights(grid);
  const std::vector<double> t = grid.points();
  const auto s = k::serial::characteristic_sums(e, t, w.fine, w.coarse);
  k::CharacteristicSums p1, p4;
  {
    ThreadCount tc(1);
    p1 = k::omp::characteristic_sums(e, t, w.fine, w.coarse);
  }
  {
    ThreadCount tc(4);
    p4 = k::omp::characteristic_sums(e, t, w.fine, w.coarse);
  }
  CHECK(p1.fine == p4.fine);
  CHECK(p1.coarse == p4.coarse);
  CHECK(max_abs(s.fine - p1.fine) < 1e-12);
  CHECK(max_abs(s.coarse - p1.coarse) < 1e-12);
  // Diagonal entries integrate |phi_n|^2 = 1 over the span.
  CHECK(s.fine(2, 2).real() == doctest::Approx(10.0).epsilon(1e-13));
}

TEST_CASE("bath kernels agree") {
  std::mt19937_64 rng(63);
  const std::size_t n = 11;
  std::vector<double> g(n);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (auto& v : g) {
    v = u(rng);
  }
  const auto env = atoms(rng, n);
  const auto sys = atoms(rng, 1)[0];
  std::vector<complex> s(std::size_t{2} << n), p(s.size());
  k::serial::assemble_bath_state(g, env, sys, 3.7, s);
  {
    ThreadCount tc(4);
    k::omp::assemble_bath_state(g, env, sys, 3.7, p);
  }
  CHECK(s == p);

  const Eigen::Matrix2cd rs = k::serial::trace_out_environment(s);
  Eigen::Matrix2cd r1, r4;
  {
    ThreadCount tc(1);
    r1 = k::omp::trace_out_environment(s);
  }
  {
    ThreadCount tc(4);
    r4 = k::omp::trace_out_environment(s);
  }
  CHECK(r1 == r4);
  CHECK((rs - r1).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((rs(0, 0) + rs(1, 1)).real() == doctest::Approx(1.0).epsilon(1e-13));

  std::vector<double> pol(n);
  for (std::size_t i = 0; i < n; ++i) {
    pol[i] = std::norm(env[i][0]) - std::norm(env[i][1]);
  }
  const std::vector<double> t = TimeGrid{0.0, 20.0, 2001}.points();
  std::vector<complex> zs(t.size()), zp(t.size());
  k::serial::sample_coherence(g, pol, 0.3, t, zs);
  {
    ThreadCount tc(4);
    k::omp::sample_coherence(g, pol, 0.3, t, zp);
  }
  CHECK(zs == zp);
}
