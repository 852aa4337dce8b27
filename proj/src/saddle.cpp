#include "hardy/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

using std::numbers::pi;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr long double kTwoPiL = 2.0L * kPiL;

// n^(2/3), correctly rounded up to an ulp.
double two_thirds_power(std::int64_t n) {
  const double nd = static_cast<double>(n);
  return std::cbrt(nd * nd);
}

long double reduce_two_pi(long double x) {
  return x - kTwoPiL * std::nearbyint(x / kTwoPiL);
}

}  // namespace

double PhaseFunction::value(double t) const {
  const double two_pi = 2.0 * pi;
  return t * std::log(t / two_pi) + 0.5 * (t + U) * std::log((t + U) / two_pi) - 1.5 * t -
         t * std::log(static_cast<double>(n));
}

double PhaseFunction::first(double t) const {
  const double two_pi = 2.0 * pi;
  return std::log(t / two_pi) + 0.5 * std::log((t + U) / two_pi) - std::log(static_cast<double>(n));
}

double PhaseFunction::second(double t) const { return (3.0 * t + 2.0 * U) / (2.0 * t * (t + U)); }

std::array<double, 3> SaddlePoint::expansion_errors() const {
  const double nu = two_thirds_power(n);
  return {std::abs(offset), std::abs(offset + U / 3.0), std::abs(offset + U / 3.0 - U * U / (18.0 * pi * nu))};
}

namespace detail {

SaddlePoint solve_saddle_signed(std::int64_t n, double U) {
  if (n < 1) throw RangeError("solve_saddle: n must be positive");
  if (!std::isfinite(U)) throw DomainError("solve_saddle: non-finite U");
  const double nu = two_thirds_power(n);
  const double t0 = 2.0 * pi * nu;
  if (U < 0.0 && t0 <= 3.0 * -U) throw RangeError("solve_saddle: negative shift too large for n");

  // With t = t0 + delta and t0^3 = 8 pi^3 n^2 the equation becomes
  // t0^2 (3 delta + U) + t0 (3 delta^2 + 2 delta U) + delta^2 (delta + U) = 0.
  const double t0sq = t0 * t0;
  double delta = 0.0;
  int it = 0;
  for (; it < 64; ++it) {
    const double g = t0sq * (3.0 * delta + U) + t0 * delta * (3.0 * delta + 2.0 * U) + delta * delta * (delta + U);
    const double t = t0 + delta;
    const double dg = t * (3.0 * t + 2.0 * U);
    const double step = g / dg;
    delta -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(delta))) break;
  }
  if (it == 64) {
    throw ConvergenceError("solve_saddle: no convergence for n = " + std::to_string(n) + ", U = " + std::to_string(U));
  }

  SaddlePoint sp;
  sp.n = n;
  sp.U = U;
  sp.offset = delta;
  sp.t_n = t0 + delta;
  sp.iterations = it + 1;
  const long double tl = sp.t_n;
  const long double target = 8.0L * kPiL * kPiL * kPiL * static_cast<long double>(n) * static_cast<long double>(n);
  sp.residual = static_cast<double>(std::abs(tl * tl * (tl + U) - target) / target);
  sp.approx1 = t0;
  sp.approx2 = t0 - U / 3.0;
  sp.approx3 = t0 - U / 3.0 + U * U / (18.0 * pi * nu);
  if (!(sp.t_n > 0.0)) throw ConvergenceError("solve_saddle: non-positive root");
  return sp;
}

FormulaTerm formula_term_signed(std::int64_t n, double U, const DivisorTable& table) {
  const SaddlePoint sp = solve_saddle_signed(n, U);
  const ComplexValue h = h_shift(n, U, table).value;
  const double t = sp.t_n;
  const double delta = sp.offset;
  const double t0 = sp.approx1;
  const long double nu = std::cbrt(static_cast<long double>(n) * static_cast<long double>(n));
  const double log_n = std::log(static_cast<double>(n));

  // Saddle-point form: sqrt(2 pi) e^(-iU/2) e^(-pi i/8) h n^(-1/2)
  //   sqrt(2t(t+U)/(3t+2U)) e^(-3it/2) ((t+U)/2pi)^(iU/2)
  const double amplitude =
      std::sqrt(2.0 * pi) / std::sqrt(static_cast<double>(n)) * std::sqrt(2.0 * t * (t + U) / (3.0 * t + 2.0 * U));
  // -3t/2 split as -3 pi n^(2/3) - 3 delta/2 so the large part is carried in extended precision.
  const long double phase_exact = -0.5L * U - 3.0L * kPiL * nu - 1.5L * delta +
                                  0.5L * U * std::log((static_cast<long double>(t) + U) / kTwoPiL) - kPiL / 8.0L;
  FormulaTerm out;
  out.n = n;
  out.U = U;
  out.exact_term = h * std::polar(amplitude, static_cast<double>(reduce_two_pi(phase_exact)));

  // {1 + K}: ratio of the saddle amplitude-phase product to 2 pi sqrt(2/3) n^(-1/6+iU/3) e^(-3 pi i n^(2/3)).
  // The phase difference is -U/2 - 3 delta/2 + (U/2) log(1 + (delta + U)/t0).
  const double k_phase = -0.5 * U - 1.5 * delta + 0.5 * U * std::log1p((delta + U) / t0);
  const double k_modulus = std::sqrt(3.0 * t * (t + U) / (t0 * (3.0 * t + 2.0 * U)));
  out.k_factor = std::polar(k_modulus, k_phase);

  const double lead_modulus = 2.0 * pi * std::sqrt(2.0 / 3.0) / std::cbrt(std::sqrt(static_cast<double>(n)));
  const long double lead_phase = static_cast<long double>(U) / 3.0L * log_n - 3.0L * kPiL * nu - kPiL / 8.0L;
  out.thm1_term = h * std::polar(lead_modulus, static_cast<double>(reduce_two_pi(lead_phase))) * out.k_factor;
  return out;
}

}  // namespace detail

SaddlePoint solve_saddle(std::int64_t n, double U) {
  if (U < 0.0) throw RangeError("solve_saddle: U must be non-negative");
  return detail::solve_saddle_signed(n, U);
}

SummationRange summation_range(double T, double U) {
  if (!(T > 0.0) || !std::isfinite(T)) throw RangeError("summation_range: T must be positive");
  if (!(U >= 0.0) || U > std::sqrt(T)) throw RangeError("summation_range: U must lie in [0, sqrt(T)]");
  // T^(3/2) / sqrt(8 pi^3) = (T / 2pi)^(3/2), which keeps T = 2pi exact.
  const double two_pi = 2.0 * pi;
  const double x = T / two_pi;
  const double half = x / 2.0;
  SummationRange r;
  r.T = T;
  r.U = U;
  r.T0 = std::pow(x, 1.5);
  r.T1 = std::pow(half, 1.5);
  r.N0 = U == 0.0 ? r.T0 : x * std::sqrt((T + U) / two_pi);
  r.N1 = U == 0.0 ? r.T1 : half * std::sqrt((T / 2.0 + U) / two_pi);
  r.n_lo = static_cast<std::int64_t>(std::ceil(r.T1));
  r.n_hi = static_cast<std::int64_t>(std::floor(r.T0));
  return r;
}

FormulaTerm formula_term(std::int64_t n, double U, const DivisorTable& table) {
  if (U < 0.0) throw RangeError("formula_term: U must be non-negative");
  return detail::formula_term_signed(n, U, table);
}

}  // namespace hardy
