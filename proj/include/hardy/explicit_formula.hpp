#pragma once

#include <cstdint>
#include <string>

#include "hardy/divisor.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/zeta.hpp"

namespace hardy {

/// Exact317 sums the saddle-point form built from the exact t_n; Theorem1 sums
/// h(n,U) n^(-1/6+iU/3) e^(-3 pi i n^(2/3) - pi i/8) {1 + K(n,U)}.
enum class FormulaVariant { Exact317, Theorem1 };

[[nodiscard]] std::string to_string(FormulaVariant v);
/// Accepts exact / exact317 and thm1 / theorem1.
[[nodiscard]] FormulaVariant parse_formula_variant(const std::string& name);

struct RhsOptions {
  FormulaVariant variant = FormulaVariant::Exact317;
  /// Sum for Z(t+U)^2 Z(t): the same terms with U replaced by -U.
  bool conjugate = false;
  /// Accumulate from the top of the range down.
  bool reverse = false;
};

/// Sum of formula terms over ceil(T1) <= n <= floor(T0). Requires T > 0,
/// 0 <= U <= sqrt(T) and table.bound() >= floor(T0); throws RangeError otherwise.
[[nodiscard]] ComplexValue rhs_sum(double T, double U, const DivisorTable& table, const RhsOptions& options = {});

struct MomentComparison {
  double T = 0.0;
  double U = 0.0;
  double lhs = 0.0;
  double lhs_est_error = 0.0;
  ComplexValue rhs{};
  double abs_diff = 0.0;   // |lhs - Re rhs|
  double im_leak = 0.0;    // |Im rhs|
  double normalized = 0.0; // abs_diff / T^(3/4)
  std::int64_t n_terms = 0;
  std::int64_t evaluations = 0;
  FormulaVariant variant = FormulaVariant::Exact317;
  bool conjugate = false;
};

/// Integral of Z^2(t) Z(t+U) (or Z^2(t+U) Z(t) when conjugate) over [T/2, T] against rhs_sum.
[[nodiscard]] MomentComparison compare_theorem1(double T, double U, const QuadratureSpec& spec, const DivisorTable& table,
                                                FormulaVariant variant = FormulaVariant::Exact317,
                                                bool conjugate = false);

/// Header and one row: T,U,variant,lhs,rhs_re,rhs_im,abs_diff,normalized,n_terms,evaluations.
[[nodiscard]] std::string comparison_csv_header();
[[nodiscard]] std::string comparison_csv_row(const MomentComparison& c);

/// Least-squares fit of K(n,U) = 1 + K against d2 U^2 n^(-2/3) over n in [n_lo, n_hi].
struct KFit {
  ComplexValue d2{};
  double max_residual = 0.0;
  std::int64_t samples = 0;
};
[[nodiscard]] KFit fit_k_leading(double U, std::int64_t n_lo, std::int64_t n_hi, const DivisorTable& table);

/// 17 significant digits, the CSV number format.
[[nodiscard]] std::string format_double(double x);

}  // namespace hardy
