#pragma once

#include <array>
#include <complex>

namespace hardy {

using ComplexValue = std::complex<double>;

/// Height at which chi_factor switches from the Gamma-based formula to the
/// Stirling expansion, and below which Riemann-Siegel is not used.
inline constexpr double kAsymptoticHeight = 50.0;
inline constexpr double kRiemannSiegelMaxHeight = 1e12;
inline constexpr double kOracleMaxHeight = 1e7;

/// chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s), split as modulus * exp(i * argument).
/// The argument is continuous along vertical lines and vanishes at s = 1/2.
struct ChiDecomposition {
  double modulus = 0.0;
  double argument = 0.0;
  ComplexValue value{};
};

enum class ZMethod { RiemannSiegel, Oracle };

struct ZEvaluation {
  double t = 0.0;
  double z = 0.0;
  ZMethod method = ZMethod::Oracle;
  double est_error = 0.0;
  /// |Im(chi^(-1/2) zeta)| of the complex route; zero for Riemann-Siegel,
  /// which produces a real value directly.
  double imag_residue = 0.0;
};

/// Continuous branch of log chi(s). Uses the Stirling expansion for
/// |Im s| >= kAsymptoticHeight and the exact Gamma formula below.
/// Throws DomainError at s = 1, at s in {0, -2, -4, ...}, and for non-finite s.
[[nodiscard]] ComplexValue log_chi(ComplexValue s);

[[nodiscard]] ChiDecomposition chi_factor(ComplexValue s);

/// Riemann-Siegel theta: theta(t) = -arg chi(1/2 + it) / 2, odd in t.
[[nodiscard]] double riemann_siegel_theta(double t);

/// theta(t) reduced to [-pi, pi), computed in extended precision for large t.
[[nodiscard]] double riemann_siegel_theta_reduced(double t);

/// zeta(s) by Euler-Maclaurin summation. digits in [10, 30]; digits > 15
/// switches to 50-digit software floating point.
[[nodiscard]] ComplexValue zeta_oracle(ComplexValue s, int digits = 15);

/// zeta(1/2 + it) to the requested number of significant digits.
/// Throws RangeError for digits outside [10, 30] or t < 0, DomainError for non-finite t.
[[nodiscard]] ComplexValue zeta_half_oracle(double t, int digits = 15);

/// zeta(s) from the alternating eta series with Borwein's acceleration, run in
/// 120-digit arithmetic. The series cancels about 0.68|t| digits, so this is
/// limited to |Im s| <= 100; it serves as an independent check of zeta_oracle.
[[nodiscard]] ComplexValue zeta_eta_borwein(ComplexValue s, int digits);

/// Hardy's Z(t). Negative t is reduced by evenness. RiemannSiegel requires |t| >= 50.
[[nodiscard]] ZEvaluation hardy_z(double t, ZMethod method);

/// Z(t) by the fastest valid route: Riemann-Siegel for |t| >= 50, oracle below.
[[nodiscard]] double hardy_z_value(double t);

namespace detail {

[[nodiscard]] ComplexValue log_chi_exact(ComplexValue s);
[[nodiscard]] ComplexValue log_chi_asymptotic(ComplexValue s);

/// Riemann-Siegel remainder coefficients C0..C4 at fractional part p in [0, 1).
[[nodiscard]] std::array<double, 5> rs_coefficients(double p);

struct RiemannSiegelParts {
  double main_sum = 0.0;
  double remainder = 0.0;
  double last_term = 0.0;
};
[[nodiscard]] RiemannSiegelParts riemann_siegel(double t);

}  // namespace detail

}  // namespace hardy
