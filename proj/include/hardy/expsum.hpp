#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hardy/divisor.hpp"
#include "hardy/zeta.hpp"

namespace hardy {

/// sum_{N < n <= N'} d3(n) e^(i alpha n^(2/3)). Requires 1 <= N < N' <= 2N <= table.bound().
[[nodiscard]] ComplexValue exp_sum_d3(double alpha, std::int64_t N, std::int64_t Nprime, const DivisorTable& table);

struct PlainExpSum {
  ComplexValue value{};
  /// |T(alpha, N)| |alpha| / N^(1/3); NaN when alpha = 0.
  double normalized = 0.0;
};

/// sum_{N < n <= N'} e^(i alpha n^(2/3)). Requires 1 <= N < N' <= 2N.
[[nodiscard]] PlainExpSum exp_sum_plain(double alpha, std::int64_t N, std::int64_t Nprime);

/// Largest N accepted by mean_square_exact.
inline constexpr std::int64_t kMaxPairwiseN = 100'000;

/// Integral of |S(alpha, N)|^2 over [A, B] with N' = 2N, from the closed form
/// (B-A) sum d3(n)^2 + 2 sum_{m<n} d3(m) d3(n) (sin(B delta) - sin(A delta)) / delta,
/// delta = n^(2/3) - m^(2/3). Requires A <= B, N <= kMaxPairwiseN, 2N <= table.bound().
[[nodiscard]] double mean_square_exact(double A, double B, std::int64_t N, const DivisorTable& table);

/// Number of alpha samples used by scans and the quadrature mean square on [A, B]:
/// the largest of 4 ceil((B-A) N^(2/3)), ceil(10 N^(2/3)) and the count that keeps the
/// spacing below 0.1 (2N)^(-2/3) 2 pi.
[[nodiscard]] std::int64_t scan_sample_count(double A, double B, std::int64_t N);

/// Trapezoid rule with Euler-Maclaurin endpoint corrections through h^4 over
/// scan_sample_count(A, B, N) intervals.
[[nodiscard]] double mean_square_quadrature(double A, double B, std::int64_t N, const DivisorTable& table);

struct GoodPoint {
  double C = 0.0;
  double magnitude = 0.0;
  /// N^(2/3) log^(9/2) N
  double bound = 0.0;
  bool within_bound = false;
};

/// Minimum of |S(alpha, N)| over the scan grid, refined by golden-section search.
/// Requires B - A >= 0.1 and the table conditions of mean_square_exact.
[[nodiscard]] GoodPoint find_good_point(double A, double B, std::int64_t N, const DivisorTable& table);

struct ExpSumSample {
  double alpha = 0.0;
  ComplexValue S{};
};

struct ExpSumScan {
  std::int64_t N = 0;
  double A = 0.0;
  double B = 0.0;
  std::vector<ExpSumSample> grid;
  /// NaN when N exceeds kMaxPairwiseN.
  double ms_exact = 0.0;
  double ms_quad = 0.0;
  /// ms_exact / (N^(4/3) log^9 N), falling back to ms_quad above kMaxPairwiseN.
  double ratio = 0.0;
  std::optional<GoodPoint> good_point;
};

/// Full scan: grid, both mean squares, ratio and the good point.
[[nodiscard]] ExpSumScan scan_exp_sum(double A, double B, std::int64_t N, const DivisorTable& table,
                                      bool locate_point = true);

/// alpha,S_re,S_im,abs_S rows.
[[nodiscard]] std::string scan_csv(const ExpSumScan& scan);
/// {N, A, B, ms_exact, ms_quad, ratio, C, abs_S_at_C, bound}
[[nodiscard]] std::string scan_summary_json(const ExpSumScan& scan);

}  // namespace hardy
