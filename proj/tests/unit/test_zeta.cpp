#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hardy/errors.hpp"
#include "hardy/zeta.hpp"

using namespace hardy;

TEST_CASE("chi at the centre is one") {
  const auto c = chi_factor({0.5, 0.0});
  CHECK(std::abs(c.value - 1.0) < 1e-14);
  CHECK(std::abs(c.argument) < 1e-14);
}

TEST_CASE("chi is unimodular on the critical line") {
  for (double t : {1.0, 10.0, 49.9, 50.0, 1000.0, 99999.0}) {
    CHECK(std::abs(chi_factor({0.5, t}).modulus - 1.0) <= 1e-12);
  }
}

TEST_CASE("chi modulus and argument reproduce the value") {
  for (double sigma : {0.2, 0.5, 0.9}) {
    for (double t : {3.0, 70.0}) {
      const auto c = chi_factor({sigma, t});
      CHECK(std::abs(std::polar(c.modulus, c.argument) - c.value) <= 1e-12 * c.modulus);
    }
  }
}

TEST_CASE("both chi branches agree near the switch height") {
  for (double sigma : {0.3, 0.5, 0.7}) {
    const ComplexValue s{sigma, 60.0};
    const auto a = detail::log_chi_exact(s);
    const auto b = detail::log_chi_asymptotic(s);
    CHECK(std::abs(a.real() - b.real()) < 1e-11);
    const double dphase = std::remainder(a.imag() - b.imag(), 2.0 * std::numbers::pi);
    CHECK(std::abs(dphase) < 1e-10);
  }
}

TEST_CASE("functional equation at 0.3 + 500i") {
  const ComplexValue s{0.3, 500.0};
  const ComplexValue z = zeta_oracle(s);
  const ComplexValue rhs = chi_factor(s).value * zeta_oracle(1.0 - s);
  CHECK(std::abs(z - rhs) <= 1e-8 * std::abs(z));
}

TEST_CASE("chi domain errors") {
  CHECK_THROWS_AS((void)chi_factor({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS((void)chi_factor({-2.0, 0.0}), DomainError);
  CHECK_THROWS_AS((void)chi_factor({0.0, 0.0}), DomainError);
  CHECK_THROWS_AS((void)chi_factor({std::nan(""), 1.0}), DomainError);
  CHECK_NOTHROW((void)chi_factor({2.0, 0.0}));
}

TEST_CASE("zeta at one half") {
  CHECK(zeta_half_oracle(0.0, 20).real() == doctest::Approx(-1.4603545088095868).epsilon(1e-15));
  CHECK(zeta_eta_borwein({0.5, 0.0}, 25).real() == doctest::Approx(-1.4603545088095868).epsilon(1e-15));
}

TEST_CASE("oracle and eta series agree at moderate height") {
  for (double t : {5.0, 30.0, 80.0}) {
    const ComplexValue s{0.5, t};
    CHECK(std::abs(zeta_oracle(s, 20) - zeta_eta_borwein(s, 20)) < 1e-12);
  }
}

TEST_CASE("zeta conjugate symmetry") {
  const ComplexValue a = zeta_oracle({0.5, 21.0});
  const ComplexValue b = zeta_oracle({0.5, -21.0});
  CHECK(std::abs(a - std::conj(b)) <= 1e-12);
}

TEST_CASE("first zero of Z by bisection") {
  double lo = 14.0;
  double hi = 14.2;
  double flo = hardy_z(lo, ZMethod::Oracle).z;
  REQUIRE(flo * hardy_z(hi, ZMethod::Oracle).z < 0.0);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = hardy_z(mid, ZMethod::Oracle).z;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  CHECK(lo == doctest::Approx(14.134725141734693).epsilon(1e-12));
  CHECK(std::abs(zeta_half_oracle(14.134725141)) <= 1e-6);
  CHECK(std::abs(hardy_z(14.134725141, ZMethod::Oracle).z) <= 1e-5);
}

TEST_CASE("Z is even") {
  for (double t : {100.0, 1000.0}) {
    CHECK(std::abs(hardy_z(-t, ZMethod::RiemannSiegel).z - hardy_z(t, ZMethod::RiemannSiegel).z) <= 1e-9);
  }
}

TEST_CASE("Riemann-Siegel matches the oracle") {
  for (double t : {100.0, 523.7, 7000.0, 55555.0, 1e5}) {
    const auto fast = hardy_z(t, ZMethod::RiemannSiegel);
    const auto slow = hardy_z(t, ZMethod::Oracle);
    CHECK(std::abs(fast.z - slow.z) <= 1e-6);
    CHECK(std::abs(fast.z - slow.z) <= fast.est_error);
    CHECK(slow.imag_residue <= 1e-10 * std::max(1.0, std::abs(slow.z)));
  }
}

TEST_CASE("Riemann-Siegel range and argument checks") {
  CHECK_THROWS_AS((void)hardy_z(49.0, ZMethod::RiemannSiegel), RangeError);
  CHECK_THROWS_AS((void)zeta_half_oracle(10.0, 9), RangeError);
  CHECK_THROWS_AS((void)zeta_half_oracle(10.0, 31), RangeError);
  CHECK_THROWS_AS((void)zeta_half_oracle(-1.0), RangeError);
  CHECK_THROWS_AS((void)hardy_z(INFINITY, ZMethod::Oracle), DomainError);
  CHECK_THROWS_AS((void)hardy_z(-1e30, ZMethod::RiemannSiegel), RangeError);
  CHECK_THROWS_AS((void)hardy_z(2e7, ZMethod::Oracle), RangeError);
}

TEST_CASE("theta is odd and matches the reduced form") {
  for (double t : {10.0, 75.0, 3000.0}) {
    CHECK(riemann_siegel_theta(-t) == -riemann_siegel_theta(t));
    const double diff = std::remainder(riemann_siegel_theta(t) - riemann_siegel_theta_reduced(t), 2.0 * std::numbers::pi);
    CHECK(std::abs(diff) < 1e-9);
  }
}

TEST_CASE("Riemann-Siegel coefficients at p = 1/2") {
  const auto c = detail::rs_coefficients(0.5);
  // cos(2 pi (1/4 - 1/2 - 1/16)) / cos(pi)
  CHECK(std::isfinite(c[0]));
  CHECK(c[0] == doctest::Approx(0.38268343236508984).epsilon(1e-12));
}
