#pragma once

#include <array>
#include <cstdint>

#include "hardy/divisor.hpp"
#include "hardy/zeta.hpp"

namespace hardy {

/// f_n(t) = t log(t/2pi) + (t+U)/2 log((t+U)/2pi) - 3t/2 - t log n, the phase of the
/// n-th term of the shifted cubic Dirichlet polynomial against chi^(-3/2).
struct PhaseFunction {
  std::int64_t n = 1;
  double U = 0.0;

  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double first(double t) const;
  /// (3t + 2U) / (2t(t + U)); positive for t > 0.
  [[nodiscard]] double second(double t) const;
};

/// Positive root t_n of t^2 (t + U) = 8 pi^3 n^2 and its asymptotic approximants.
struct SaddlePoint {
  std::int64_t n = 0;
  double U = 0.0;
  double t_n = 0.0;
  /// t_n - 2 pi n^(2/3), solved for directly so small expansion errors stay resolvable.
  double offset = 0.0;
  /// |t_n^2 (t_n + U) - 8 pi^3 n^2| / (8 pi^3 n^2)
  double residual = 0.0;
  double approx1 = 0.0;  // 2 pi n^(2/3)
  double approx2 = 0.0;  // 2 pi n^(2/3) - U/3
  double approx3 = 0.0;  // 2 pi n^(2/3) - U/3 + U^2 n^(-2/3) / (18 pi)
  int iterations = 0;

  /// |t_n - approx_k| for k = 1, 2, 3, evaluated from the offset.
  [[nodiscard]] std::array<double, 3> expansion_errors() const;
};

/// Newton on g(t) = t^2 (t + U) - 8 pi^3 n^2 from the seed 2 pi n^(2/3).
/// Requires n >= 1 and U >= 0. Throws ConvergenceError after 64 iterations.
[[nodiscard]] SaddlePoint solve_saddle(std::int64_t n, double U);

struct SummationRange {
  double T = 0.0;
  double U = 0.0;
  double T0 = 0.0;
  double T1 = 0.0;
  double N0 = 0.0;
  double N1 = 0.0;
  std::int64_t n_lo = 0;  // ceil(T1)
  std::int64_t n_hi = 0;  // floor(T0)

  [[nodiscard]] std::int64_t count() const noexcept { return n_hi >= n_lo ? n_hi - n_lo + 1 : 0; }
};

/// T0 = T^(3/2) / sqrt(8 pi^3), T1 = (T/2)^(3/2) / sqrt(8 pi^3), and the shifted
/// N0, N1. Requires T > 0 and 0 <= U <= sqrt(T).
[[nodiscard]] SummationRange summation_range(double T, double U);

/// One term of the explicit formula in two shapes: the saddle-point form built
/// from the exact t_n, and the h(n,U) n^(-1/6+iU/3) e^(-3 pi i n^(2/3) - pi i/8) {1+K}
/// shape with {1+K} = k_factor computed from the exact saddle.
struct FormulaTerm {
  std::int64_t n = 0;
  double U = 0.0;
  ComplexValue exact_term{};
  ComplexValue thm1_term{};
  ComplexValue k_factor{};
};

[[nodiscard]] FormulaTerm formula_term(std::int64_t n, double U, const DivisorTable& table);

namespace detail {

/// Same as solve_saddle / formula_term but accepting U < 0, which the conjugate
/// integral Z^2(t+U) Z(t) needs. Requires 2 pi n^(2/3) > 3|U|.
[[nodiscard]] SaddlePoint solve_saddle_signed(std::int64_t n, double U);
[[nodiscard]] FormulaTerm formula_term_signed(std::int64_t n, double U, const DivisorTable& table);

}  // namespace detail

}  // namespace hardy
