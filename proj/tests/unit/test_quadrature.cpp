#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hardy/errors.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/zeta.hpp"

using namespace hardy;

TEST_CASE("empty range integrates to zero") {
  for (auto kind : {MomentKind::M1, MomentKind::M2shift, MomentKind::M3shift, MomentKind::M3conj, MomentKind::M4}) {
    QuadratureSpec spec;
    spec.a = 700.0;
    spec.b = 700.0;
    const auto r = integrate_range(kind, 1.0, spec);
    CHECK(r.value == 0.0);
    CHECK(r.evaluations == 0);
  }
}

TEST_CASE("polynomials and smooth functions") {
  QuadratureSpec spec;
  spec.a = 0.0;
  spec.b = 3.0;
  const auto r = integrate_oscillatory([](double x) { return x * x * x - 2.0 * x; }, spec);
  CHECK(r.value == doctest::Approx(81.0 / 4.0 - 9.0).epsilon(1e-13));
  spec.a = 100.0;
  spec.b = 900.0;
  const auto s = integrate_oscillatory([](double x) { return std::cos(x * std::log(x)); }, spec);
  QuadratureSpec simpson = spec;
  simpson.panel_rule = PanelRule::AdaptiveSimpson;
  simpson.abs_tol = 1e-8;
  const auto t = integrate_oscillatory([](double x) { return std::cos(x * std::log(x)); }, simpson);
  CHECK(std::abs(s.value - t.value) < 1e-7);
}

TEST_CASE("interval additivity") {
  QuadratureSpec spec;
  spec.a = 500.0;
  spec.b = 750.0;
  const auto left = integrate_range(MomentKind::M3shift, 1.0, spec);
  spec.a = 750.0;
  spec.b = 1000.0;
  const auto right = integrate_range(MomentKind::M3shift, 1.0, spec);
  const auto whole = integrate_moment(MomentKind::M3shift, 1000.0, 1.0);
  CHECK(std::abs(left.value + right.value - whole.value) <=
        left.est_error + right.est_error + whole.est_error + 1e-9 * std::abs(whole.value));
}

TEST_CASE("cubic moment agrees with dense Simpson") {
  const auto r = integrate_moment(MomentKind::M3shift, 1000.0, 0.0);
  const double h = zero_spacing(1000.0) / (4.0 * 12.0);
  const auto n = static_cast<std::int64_t>(std::ceil(500.0 / h));
  const double dense = simpson_fixed(
      [](double t) {
        const double z = hardy_z_value(t);
        return z * z * z;
      },
      500.0, 1000.0, n);
  CHECK(std::abs(r.value - dense) <= 1e-4 * std::abs(dense));
}

TEST_CASE("halving panels changes the result by less than est_error") {
  QuadratureSpec coarse;
  const auto a = integrate_moment(MomentKind::M3shift, 2000.0, 2.0, coarse);
  QuadratureSpec fine;
  fine.points_per_oscillation = 24;
  const auto b = integrate_moment(MomentKind::M3shift, 2000.0, 2.0, fine);
  CHECK(std::abs(a.value - b.value) <= std::max(a.est_error, 1e-9 * std::abs(a.value)) + b.est_error);
}

TEST_CASE("odd powers of Z integrate evenly") {
  QuadratureSpec spec;
  spec.a = -500.0;
  spec.b = 500.0;
  const auto both = integrate_range(MomentKind::M3shift, 0.0, spec);
  spec.a = 0.0;
  const auto half = integrate_range(MomentKind::M3shift, 0.0, spec);
  CHECK(std::abs(both.value - 2.0 * half.value) <= 1e-8 * std::abs(both.value));
}

TEST_CASE("first moment diagnostic") {
  const auto r = first_moment_diag(1000.0);
  CHECK(r.diagnostic == doctest::Approx(r.value / std::pow(1000.0, 0.25)));
  CHECK(std::abs(r.diagnostic) <= 5.0);
}

TEST_CASE("head is cached and reused") {
  const auto a = integrate_moment(MomentKind::M4, 150.0, 0.0);
  const auto b = integrate_moment(MomentKind::M4, 150.0, 0.0);
  CHECK(a.value == b.value);
  QuadratureSpec spec;
  spec.a = 0.0;
  spec.b = 150.0;
  const auto direct = integrate_range(MomentKind::M4, 0.0, spec);
  CHECK(std::abs(direct.value - a.value) <= 1e-6 * std::abs(a.value));
}

TEST_CASE("cumulative profile matches the direct integral") {
  const auto profile = cumulative_moment(MomentKind::M1, 0.0, {200.0, 400.0, 800.0});
  REQUIRE(profile.size() == 3);
  const auto direct = first_moment_diag(800.0);
  CHECK(std::abs(profile.back().value - direct.value) < 1e-6);
}

TEST_CASE("fourth moment is near the Ingham main term") {
  const auto r = integrate_moment(MomentKind::M4, 1000.0, 0.0);
  CHECK(r.diagnostic >= 0.7);
  CHECK(r.diagnostic <= 1.3);
}

TEST_CASE("quadrature argument checks") {
  CHECK_THROWS_AS((void)integrate_moment(MomentKind::M1, 99.0, 0.0), RangeError);
  CHECK_THROWS_AS((void)integrate_moment(MomentKind::M1, 2e5, 0.0), RangeError);
  CHECK_THROWS_AS((void)integrate_moment(MomentKind::M3shift, 400.0, 21.0), RangeError);
  QuadratureSpec bad;
  bad.points_per_oscillation = 4;
  CHECK_THROWS_AS((void)integrate_moment(MomentKind::M1, 200.0, 0.0, bad), RangeError);
  QuadratureSpec reversed;
  reversed.a = 2.0;
  reversed.b = 1.0;
  CHECK_THROWS_AS((void)integrate_range(MomentKind::M1, 0.0, reversed), RangeError);
  CHECK_THROWS_AS((void)parse_moment_kind("m7"), DomainError);
  CHECK(parse_moment_kind("m3conj") == MomentKind::M3conj);
}

TEST_CASE("unreachable tolerance is reported") {
  QuadratureSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-300;
  spec.max_refinements = 1;
  const auto f = [](double x) { return std::sqrt(x); };
  CHECK_THROWS_AS((void)integrate_oscillatory(f, spec), ConvergenceError);
  spec.strict = false;
  CHECK_FALSE(integrate_oscillatory(f, spec).converged);
}
