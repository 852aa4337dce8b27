#include "hardy/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "hardy/errors.hpp"
#include "hardy/explicit_formula.hpp"
#include "hardy/parallel.hpp"
#include "hardy/summation.hpp"

namespace hardy {

namespace {

using std::numbers::pi;

void check_range(std::int64_t N, std::int64_t Nprime, const char* what) {
  if (N < 1 || Nprime <= N || Nprime > 2 * N) {
    throw RangeError(std::string(what) + ": need 1 <= N < N' <= 2N, got N = " + std::to_string(N) +
                     ", N' = " + std::to_string(Nprime));
  }
}

double two_thirds(std::int64_t n) { return std::exp(2.0 / 3.0 * std::log(static_cast<double>(n))); }

// Weights and frequencies of S(alpha, N) with N' = 2N.
struct Terms {
  std::vector<double> w;
  std::vector<double> p;
};

Terms make_terms(std::int64_t N, const DivisorTable& table) {
  if (N < 1) throw RangeError("expsum: N must be positive");
  if (2 * N > table.bound()) {
    throw RangeError("expsum: divisor table bound " + std::to_string(table.bound()) + " below 2N = " +
                     std::to_string(2 * N));
  }
  Terms t;
  t.w.reserve(static_cast<std::size_t>(N));
  t.p.reserve(static_cast<std::size_t>(N));
  for (std::int64_t n = N + 1; n <= 2 * N; ++n) {
    t.w.push_back(table.d3(n));
    t.p.push_back(two_thirds(n));
  }
  return t;
}

// Derivative of order k in alpha of S: sum w (i p)^k e^(i alpha p).
ComplexValue s_derivative(const Terms& t, double alpha, int k) {
  CompensatedComplexSum acc;
  const ComplexValue ik = std::pow(ComplexValue{0.0, 1.0}, k);
  for (std::size_t j = 0; j < t.w.size(); ++j) {
    const double phase = alpha * t.p[j];
    acc.add(t.w[j] * std::pow(t.p[j], k) * ComplexValue{std::cos(phase), std::sin(phase)});
  }
  return ik * acc.value();
}

ComplexValue s_value(const Terms& t, double alpha) {
  CompensatedComplexSum acc;
  for (std::size_t j = 0; j < t.w.size(); ++j) {
    const double phase = alpha * t.p[j];
    acc.add(t.w[j] * ComplexValue{std::cos(phase), std::sin(phase)});
  }
  return acc.value();
}

std::vector<ExpSumSample> sample_grid(const Terms& t, double A, double B, std::int64_t M) {
  std::vector<ExpSumSample> grid(static_cast<std::size_t>(M) + 1);
  const double h = (B - A) / static_cast<double>(M);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double alpha = i == grid.size() - 1 ? B : A + h * static_cast<double>(i);
    grid[i] = {alpha, s_value(t, alpha)};
  });
  return grid;
}

// h^2/12 (f'(B) - f'(A)) - h^4/720 (f'''(B) - f'''(A)) for f = |S|^2.
double endpoint_correction(const Terms& t, double A, double B, double h) {
  const auto derivs = [&](double alpha) {
    const ComplexValue s0 = s_value(t, alpha);
    const ComplexValue s1 = s_derivative(t, alpha, 1);
    const ComplexValue s2 = s_derivative(t, alpha, 2);
    const ComplexValue s3 = s_derivative(t, alpha, 3);
    const double f1 = 2.0 * (s1 * std::conj(s0)).real();
    const double f3 = 2.0 * (s3 * std::conj(s0) + 3.0 * s2 * std::conj(s1)).real();
    return std::pair{f1, f3};
  };
  const auto [a1, a3] = derivs(A);
  const auto [b1, b3] = derivs(B);
  return h * h / 12.0 * (b1 - a1) - std::pow(h, 4) / 720.0 * (b3 - a3);
}

double trapezoid(const std::vector<ExpSumSample>& grid) {
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = std::norm(grid[i].S);
  f.front() *= 0.5;
  f.back() *= 0.5;
  const double h = (grid.back().alpha - grid.front().alpha) / static_cast<double>(grid.size() - 1);
  return pairwise_sum<double>(f) * h;
}

GoodPoint refine_minimum(const Terms& t, const std::vector<ExpSumSample>& grid, std::int64_t N) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i].S) < std::abs(grid[best].S)) best = i;
  }
  double lo = grid[best == 0 ? 0 : best - 1].alpha;
  double hi = grid[std::min(best + 1, grid.size() - 1)].alpha;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = std::abs(s_value(t, x1));
  double f2 = std::abs(s_value(t, x2));
  for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = std::abs(s_value(t, x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = std::abs(s_value(t, x2));
    }
  }
  GoodPoint gp;
  gp.C = grid[best].alpha;
  gp.magnitude = std::abs(grid[best].S);
  const double xc = f1 < f2 ? x1 : x2;
  const double fc = std::min(f1, f2);
  if (fc < gp.magnitude) {
    gp.C = xc;
    gp.magnitude = fc;
  }
  const double ln = std::log(static_cast<double>(N));
  gp.bound = std::cbrt(static_cast<double>(N) * static_cast<double>(N)) * std::pow(ln, 4.5);
  gp.within_bound = gp.magnitude <= gp.bound;
  return gp;
}

void check_interval(double A, double B) {
  if (!std::isfinite(A) || !std::isfinite(B)) throw DomainError("expsum: non-finite interval");
  if (A > B) throw RangeError("expsum: need A <= B");
}

}  // namespace

ComplexValue exp_sum_d3(double alpha, std::int64_t N, std::int64_t Nprime, const DivisorTable& table) {
  check_range(N, Nprime, "exp_sum_d3");
  if (Nprime > table.bound()) throw RangeError("exp_sum_d3: N' exceeds the divisor table");
  if (!std::isfinite(alpha)) throw DomainError("exp_sum_d3: non-finite alpha");
  CompensatedComplexSum acc;
  for (std::int64_t n = N + 1; n <= Nprime; ++n) {
    const double w = table.d3(n);
    if (alpha == 0.0) {
      acc.add({w, 0.0});
      continue;
    }
    const double phase = alpha * two_thirds(n);
    acc.add(w * ComplexValue{std::cos(phase), std::sin(phase)});
  }
  return acc.value();
}

PlainExpSum exp_sum_plain(double alpha, std::int64_t N, std::int64_t Nprime) {
  check_range(N, Nprime, "exp_sum_plain");
  if (!std::isfinite(alpha)) throw DomainError("exp_sum_plain: non-finite alpha");
  PlainExpSum out;
  if (alpha == 0.0) {
    out.value = {static_cast<double>(Nprime - N), 0.0};
    out.normalized = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  CompensatedComplexSum acc;
  for (std::int64_t n = N + 1; n <= Nprime; ++n) {
    const double phase = alpha * two_thirds(n);
    acc.add({std::cos(phase), std::sin(phase)});
  }
  out.value = acc.value();
  out.normalized = std::abs(out.value) * std::abs(alpha) / std::cbrt(static_cast<double>(N));
  return out;
}

double mean_square_exact(double A, double B, std::int64_t N, const DivisorTable& table) {
  check_interval(A, B);
  if (N > kMaxPairwiseN) throw RangeError("mean_square_exact: N above the pairwise limit 1e5");
  if (N < 1) throw RangeError("mean_square_exact: N must be positive");
  if (2 * N > table.bound()) throw RangeError("mean_square_exact: divisor table too small for 2N");
  if (A == B) return 0.0;
  const std::size_t count = static_cast<std::size_t>(N);
  std::vector<double> w(count);
  std::vector<double> cube(count);
  std::vector<double> p(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto n = N + 1 + static_cast<std::int64_t>(j);
    w[j] = table.d3(n);
    cube[j] = std::cbrt(static_cast<double>(n));
    p[j] = cube[j] * cube[j];
  }
  const double half_sum = 0.5 * (A + B);
  const double half_diff = 0.5 * (B - A);

  // Rows m of the upper triangle, in fixed chunks.
  const auto chunks = make_chunks(0, static_cast<long long>(count), 64);
  std::vector<CompensatedSum> partial(chunks.size());
  parallel_for(chunks.size(), [&](std::size_t c) {
    CompensatedSum acc;
    for (long long m = chunks[c].begin; m < chunks[c].end; ++m) {
      const double am = cube[m];
      CompensatedSum row;
      for (std::size_t n = static_cast<std::size_t>(m) + 1; n < count; ++n) {
        const double an = cube[n];
        // n^(2/3) - m^(2/3) = (n - m)(a_n + a_m) / (a_n^2 + a_n a_m + a_m^2)
        const double delta = static_cast<double>(n - static_cast<std::size_t>(m)) * (an + am) /
                             (an * an + an * am + am * am);
        // sin(B d) - sin(A d) = 2 cos((A+B)d/2) sin((B-A)d/2)
        row.add(w[n] * 2.0 * std::cos(half_sum * delta) * std::sin(half_diff * delta) / delta);
      }
      acc.add(2.0 * w[m] * row.value());
    }
    partial[c] = acc;
  });
  CompensatedSum total;
  for (const auto& p : partial) total.merge(p);
  const double diag = static_cast<double>(table.d3sq_prefix(2 * N) - table.d3sq_prefix(N));
  return (B - A) * diag + total.value();
}

std::int64_t scan_sample_count(double A, double B, std::int64_t N) {
  check_interval(A, B);
  const double nu = std::cbrt(static_cast<double>(N) * static_cast<double>(N));
  const double nu2 = std::cbrt(4.0 * static_cast<double>(N) * static_cast<double>(N));
  const auto by_width = 4 * static_cast<std::int64_t>(std::ceil((B - A) * nu));
  const auto by_count = static_cast<std::int64_t>(std::ceil(10.0 * nu));
  const auto by_spacing = static_cast<std::int64_t>(std::ceil((B - A) * nu2 / (0.2 * pi)));
  return std::max({by_width, by_count, by_spacing, std::int64_t{2}});
}

double mean_square_quadrature(double A, double B, std::int64_t N, const DivisorTable& table) {
  check_interval(A, B);
  if (A == B) return 0.0;
  const Terms t = make_terms(N, table);
  const std::int64_t M = scan_sample_count(A, B, N);
  const auto grid = sample_grid(t, A, B, M);
  return trapezoid(grid) - endpoint_correction(t, A, B, (B - A) / static_cast<double>(M));
}

GoodPoint find_good_point(double A, double B, std::int64_t N, const DivisorTable& table) {
  check_interval(A, B);
  if (B - A < 0.1) throw RangeError("find_good_point: need B - A >= 0.1");
  if (N > kMaxPairwiseN) throw RangeError("find_good_point: N above 1e5");
  const Terms t = make_terms(N, table);
  const auto grid = sample_grid(t, A, B, scan_sample_count(A, B, N));
  return refine_minimum(t, grid, N);
}

ExpSumScan scan_exp_sum(double A, double B, std::int64_t N, const DivisorTable& table, bool locate_point) {
  check_interval(A, B);
  if (A == B) throw RangeError("scan_exp_sum: empty interval");
  const Terms t = make_terms(N, table);
  const std::int64_t M = scan_sample_count(A, B, N);
  ExpSumScan scan;
  scan.N = N;
  scan.A = A;
  scan.B = B;
  scan.grid = sample_grid(t, A, B, M);
  scan.ms_quad = trapezoid(scan.grid) - endpoint_correction(t, A, B, (B - A) / static_cast<double>(M));
  const double ln = std::log(static_cast<double>(N));
  const double scale = std::pow(static_cast<double>(N), 4.0 / 3.0) * std::pow(ln, 9);
  if (N <= kMaxPairwiseN) {
    scan.ms_exact = mean_square_exact(A, B, N, table);
    scan.ratio = scan.ms_exact / scale;
  } else {
    scan.ms_exact = std::numeric_limits<double>::quiet_NaN();
    scan.ratio = scan.ms_quad / scale;
  }
  if (locate_point && B - A >= 0.1) scan.good_point = refine_minimum(t, scan.grid, N);
  return scan;
}

std::string scan_csv(const ExpSumScan& scan) {
  std::string out = "alpha,S_re,S_im,abs_S\n";
  for (const auto& s : scan.grid) {
    out += format_double(s.alpha) + "," + format_double(s.S.real()) + "," + format_double(s.S.imag()) + "," +
           format_double(std::abs(s.S)) + "\n";
  }
  return out;
}

std::string scan_summary_json(const ExpSumScan& scan) {
  const auto num = [](double x) -> nlohmann::json { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); };
  nlohmann::json j;
  j["N"] = scan.N;
  j["A"] = scan.A;
  j["B"] = scan.B;
  j["ms_exact"] = num(scan.ms_exact);
  j["ms_quad"] = num(scan.ms_quad);
  j["ratio"] = num(scan.ratio);
  if (scan.good_point) {
    j["C"] = scan.good_point->C;
    j["abs_S_at_C"] = scan.good_point->magnitude;
    j["bound"] = scan.good_point->bound;
  } else {
    j["C"] = nullptr;
    j["abs_S_at_C"] = nullptr;
    j["bound"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace hardy
