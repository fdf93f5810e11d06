#include <doctest.h>

#include <cmath>
#include <numbers>

#include "realclock/clock.hpp"
#include "realclock/errors.hpp"
#include "support/oracles.hpp"

using namespace realclock;

TEST_CASE("gaussian pdf values") {
  const ClockModel c = ClockModel::gaussian(1.0);
  CHECK(pdf(c, 0.0, 0.0).value == doctest::Approx(0.3989422804014326779).epsilon(1e-15));
  CHECK(pdf(c, 0.0, 3.0).value == doctest::Approx(0.004431848411938007176).epsilon(1e-14));
  CHECK_FALSE(pdf(c, 0.0, 0.0).is_delta);
  CHECK(pdf(ClockModel::ideal(), 1.0, 1.0).is_delta);
  CHECK(pdf(ClockModel::gaussian(0.0), 1.0, 1.0).is_delta);
}

TEST_CASE("gaussian pdf integrates to one over ideal time") {
  const ClockModel c = ClockModel::gaussian(2.0);
  const double mass = oracle::integrate([&](double t) { return pdf(c, 0.7, t).value; }, -20.0, 20.0);
  CHECK(std::abs(mass - 1.0) < 1e-8);

  // Non-trivial peak map and a reading-dependent width.
  const ClockModel g = ClockModel::gaussian([](double T) { return 0.5 + 0.1 * std::abs(T); },
                                            PeakMap::affine(-1.0, 2.0));
  for (double reading : {-2.0, 0.0, 3.0}) {
    // Split at the peak so the quadrature sees the narrow bump.
    const double tc = (reading + 1.0) / 2.0;
    auto f = [&](double t) { return pdf(g, reading, t).value; };
    const double m = oracle::integrate(f, -30.0, tc) + oracle::integrate(f, tc, 30.0);
    CHECK(std::abs(m - 1.0) < 1e-10);
  }
}

TEST_CASE("pdf rejects clocks without a density") {
  CHECK_THROWS_AS(pdf(ClockModel::constant_rate(0.1), 0.0, 0.0), UnsupportedKind);
  CHECK_THROWS_AS(pdf(ClockModel::fundamental(1.0, 2.0), 0.0, 0.0), UnsupportedKind);
}

TEST_CASE("sigma for each clock kind") {
  CHECK(sigma(ClockModel::fundamental(1.0, 2.0), 1.0) == doctest::Approx(1.0));
  const double s = sigma(ClockModel::fundamental(1e-3, 10.0), 2.0);
  CHECK(oracle::rel_err(s, oracle::mp("5e-5")) < 1e-14);
  CHECK(sigma(ClockModel::expansion([](double T) { return 0.1 * T; }), 3.0) ==
        doctest::Approx(0.1).epsilon(1e-9));
  CHECK(sigma(ClockModel::constant_rate(0.25), 7.0) == doctest::Approx(0.25));
  CHECK(sigma(ClockModel::ideal(), 5.0) == 0.0);
  CHECK_THROWS_AS(sigma(ClockModel::fundamental(1.0, 2.0), 2.0), DomainError);
  CHECK_THROWS_AS(sigma(ClockModel::gaussian(1.0), 0.0), UnsupportedKind);
  CHECK_THROWS_AS(sigma(ClockModel::expansion([](double T) { return -T; }), 1.0), DomainError);
}

TEST_CASE("integrated sigma") {
  const ClockModel lin = ClockModel::expansion([](double T) { return 0.1 * T; });
  CHECK(integrated_sigma(lin, 0.0, 5.0) == doctest::Approx(0.5));
  CHECK(integrated_sigma(lin, 2.0, 2.0) == 0.0);

  const ClockModel f = ClockModel::fundamental(1.0, 1.0);
  CHECK(integrated_sigma(f, 0.0, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
  // Integrable endpoint singularity handled by tanh-sinh.
  const double q = oracle::integrate([&](double T) { return sigma(f, T); }, 0.0, 1.0, 1e-14);
  CHECK(std::abs(q - 1.5) < 1e-10);

  const ClockModel g = ClockModel::fundamental(0.3, 4.0);
  const double ab = integrated_sigma(g, 0.0, 1.3);
  const double bc = integrated_sigma(g, 1.3, 3.9);
  CHECK(std::abs(ab + bc - integrated_sigma(g, 0.0, 3.9)) < 1e-10);
  // Closed form with T_max = T: (3/2) T_P^{4/3} T^{2/3}.
  const ClockModel h = ClockModel::fundamental(0.2, 3.0);
  CHECK(integrated_sigma(h, 0.0, 3.0) ==
        doctest::Approx(1.5 * std::pow(0.2, 4.0 / 3.0) * std::pow(3.0, 2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("peak map") {
  const PeakMap p = PeakMap::affine(1.0, 2.0);
  CHECK(p(3.0) == 7.0);
  CHECK(p.rate(0.0) == 2.0);
  CHECK(p.inverse(7.0, -10.0, 10.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(PeakMap::affine(0.0, -1.0), ValidationError);
  CHECK_THROWS_AS(p.inverse(100.0, -10.0, 10.0), DomainError);
  const PeakMap id;
  CHECK(id.is_identity());
  CHECK(id.inverse(4.2, 0.0, 1.0) == 4.2);
  const PeakMap curved([](double t) { return t + 0.1 * t * t * t; }, {});
  CHECK(curved.rate(1.0) == doctest::Approx(1.3).epsilon(1e-8));
}

TEST_CASE("clock construction validates parameters") {
  CHECK_THROWS_AS(ClockModel::gaussian(-1.0), ValidationError);
  CHECK_THROWS_AS(ClockModel::constant_rate(-0.1), ValidationError);
  CHECK_THROWS_AS(ClockModel::fundamental(0.0, 1.0), ValidationError);
  CHECK(ClockModel::fundamental(1.0, 2.0).kind_name() == "fundamental");
}
