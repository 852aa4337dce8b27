#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hardy/errors.hpp"
#include "hardy/saddle.hpp"

using namespace hardy;
using std::numbers::pi;

namespace {
const DivisorTable& table() {
  static const DivisorTable t = DivisorTable::build(200'000);
  return t;
}
}  // namespace

TEST_CASE("saddle at n = 1, U = 0 is 2 pi") {
  const auto sp = solve_saddle(1, 0.0);
  CHECK(sp.t_n == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(sp.residual <= 1e-12);
}

TEST_CASE("third-order approximant at n = 1e6, U = 5") {
  const auto sp = solve_saddle(1'000'000, 5.0);
  const double bound = 10.0 * 125.0 * std::pow(1e6, -4.0 / 3.0);
  CHECK(std::abs(sp.t_n - sp.approx3) <= bound);
  CHECK(sp.expansion_errors()[0] > sp.expansion_errors()[1]);
  CHECK(sp.expansion_errors()[1] > sp.expansion_errors()[2]);
}

TEST_CASE("saddle decreases in U") {
  for (std::int64_t n : {1, 17, 5000, 1'000'000}) {
    double prev = solve_saddle(n, 0.0).t_n;
    for (double U : {0.1, 1.0, 3.0, 20.0}) {
      const double t = solve_saddle(n, U).t_n;
      CHECK(t < prev);
      prev = t;
    }
  }
}

TEST_CASE("saddle is a stationary point of the phase") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> pick_n(1, 10'000'000);
  std::uniform_real_distribution<double> pick_u(0.0, 30.0);
  for (int i = 0; i < 300; ++i) {
    const auto n = pick_n(rng);
    const double U = pick_u(rng);
    const auto sp = solve_saddle(n, U);
    REQUIRE(sp.residual <= 1e-12);
    const PhaseFunction f{n, U};
    REQUIRE(std::abs(f.first(sp.t_n)) <= 1e-10 * std::log(sp.t_n));
    REQUIRE(f.second(sp.t_n) > 0.0);
  }
}

TEST_CASE("second derivative of the phase matches a finite difference") {
  const PhaseFunction f{12345, 2.5};
  for (double t : {300.0, 3000.0}) {
    const double h = 1e-3 * t;
    const double fd = (f.first(t + h) - f.first(t - h)) / (2.0 * h);
    CHECK(std::abs(fd - f.second(t)) <= 1e-6 * f.second(t));
  }
}

TEST_CASE("saddle argument checks") {
  CHECK_THROWS_AS((void)solve_saddle(0, 1.0), RangeError);
  CHECK_THROWS_AS((void)solve_saddle(5, -1.0), RangeError);
}

TEST_CASE("summation range") {
  const auto r = summation_range(2.0 * pi, 0.0);
  CHECK(r.T0 == 1.0);
  CHECK(r.T1 == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
  CHECK(r.n_lo == 1);
  CHECK(r.n_hi == 1);
  CHECK(r.count() == 1);
  const auto r0 = summation_range(1234.5, 0.0);
  CHECK(r0.N0 == r0.T0);
  CHECK(r0.N1 == r0.T1);
  const auto r10 = summation_range(1000.0, 10.0);
  CHECK(r10.N0 / r10.T0 == doctest::Approx(std::sqrt(1.01)).epsilon(1e-14));
  CHECK(r10.T1 < r10.T0);
  CHECK(r10.N1 < r10.N0);
  CHECK_THROWS_AS((void)summation_range(-1.0, 0.0), RangeError);
  CHECK_THROWS_AS((void)summation_range(100.0, 10.5), RangeError);
}

TEST_CASE("bracketing between the n range and the t range") {
  for (double T : {500.0, 2000.0}) {
    for (double U : {0.0, 3.0}) {
      const auto r = summation_range(T, U);
      const auto lo = static_cast<std::int64_t>(std::ceil(r.N1));
      const auto hi = static_cast<std::int64_t>(std::floor(r.N0));
      for (std::int64_t n = std::max<std::int64_t>(1, lo - 20); n <= hi + 20; ++n) {
        const double t = solve_saddle(n, U).t_n;
        REQUIRE((n >= lo && n <= hi) == (t >= T / 2.0 && t <= T));
      }
    }
  }
}

TEST_CASE("formula term at U = 0") {
  for (std::int64_t n : {1, 2, 97, 4096, 99991}) {
    const auto term = formula_term(n, 0.0, table());
    const double nu = std::cbrt(static_cast<double>(n) * n);
    const double expect = 2.0 * pi * std::sqrt(2.0 / 3.0) * table().d3(n) * std::pow(n, -1.0 / 6.0) *
                          std::cos(3.0 * pi * nu + pi / 8.0);
    CHECK(std::abs(term.exact_term.real() - expect) <= 1e-10 * (1.0 + std::abs(term.exact_term)));
    CHECK(std::abs(term.k_factor - 1.0) <= 1e-12);
    CHECK(std::abs(term.exact_term - term.thm1_term) <= 1e-10 * std::abs(term.exact_term));
  }
}

TEST_CASE("k factor deviation scales as U^2 n^(-2/3)") {
  const std::int64_t n = 100'000;
  const double k1 = std::abs(formula_term(n, 1.0, table()).k_factor - 1.0);
  const double k2 = std::abs(formula_term(n, 2.0, table()).k_factor - 1.0);
  const double k4 = std::abs(formula_term(n, 4.0, table()).k_factor - 1.0);
  CHECK(k2 / k1 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(k4 / k2 == doctest::Approx(4.0).epsilon(0.05));
  const double lead = std::pow(static_cast<double>(n), -2.0 / 3.0);
  CHECK(k1 / lead >= 1.0 / (3.0 * 12.0 * pi));
  CHECK(k1 / lead <= 3.0 / (12.0 * pi));
}
