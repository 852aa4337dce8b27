#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "hardy/errors.hpp"
#include "hardy/expsum.hpp"

using namespace hardy;
using std::numbers::pi;

namespace {
const DivisorTable& table() {
  static const DivisorTable t = DivisorTable::build(40'000);
  return t;
}
}  // namespace

TEST_CASE("zero frequency gives the d3 partial sum") {
  const ComplexValue s = exp_sum_d3(0.0, 1000, 2000, table());
  std::int64_t sum = 0;
  for (std::int64_t n = 1001; n <= 2000; ++n) sum += table().d3(n);
  CHECK(s.real() == static_cast<double>(sum));
  CHECK(s.imag() == 0.0);
}

TEST_CASE("two-term hand expansion") {
  for (double alpha : {0.3, 1.7, 3.0 * pi}) {
    const ComplexValue expect = 3.0 * std::polar(1.0, alpha * std::cbrt(9.0)) + 6.0 * std::polar(1.0, alpha * std::cbrt(16.0));
    CHECK(std::abs(exp_sum_d3(alpha, 2, 4, table()) - expect) < 1e-13);
  }
}

TEST_CASE("triangle inequality") {
  double total = 0.0;
  for (std::int64_t n = 5001; n <= 10000; ++n) total += table().d3(n);
  for (double alpha : {0.5, 3.0 * pi}) CHECK(std::abs(exp_sum_d3(alpha, 5000, 10000, table())) <= total);
}

TEST_CASE("unweighted sum") {
  CHECK(exp_sum_plain(0.0, 100, 170).value == ComplexValue(70.0, 0.0));
  CHECK(std::isnan(exp_sum_plain(0.0, 100, 170).normalized));
  const auto p = exp_sum_plain(3.0 * pi, 10'000, 20'000);
  CHECK(p.normalized <= 50.0);
  const auto q = exp_sum_plain(-3.0 * pi, 10'000, 20'000);
  CHECK(std::abs(q.value - std::conj(p.value)) < 1e-9);
}

TEST_CASE("range checks") {
  CHECK_THROWS_AS((void)exp_sum_d3(1.0, 10, 10, table()), RangeError);
  CHECK_THROWS_AS((void)exp_sum_d3(1.0, 10, 21, table()), RangeError);
  CHECK_THROWS_AS((void)exp_sum_d3(1.0, 30'000, 40'001, table()), RangeError);
  CHECK_THROWS_AS((void)mean_square_exact(1.0, 4.0, 30'000, table()), RangeError);
  CHECK_THROWS_AS((void)mean_square_exact(4.0, 1.0, 100, table()), RangeError);
  CHECK_THROWS_AS((void)find_good_point(1.0, 1.05, 100, table()), RangeError);
}

TEST_CASE("mean square basics") {
  CHECK(mean_square_exact(2.0, 2.0, 1000, table()) == 0.0);
  // N = 1: the range (1, 2] holds only n = 2
  CHECK(mean_square_exact(1.0, 4.0, 1, table()) == doctest::Approx(3.0 * 9.0).epsilon(1e-15));
}

TEST_CASE("exact and quadrature mean squares agree") {
  const double exact = mean_square_exact(1.0, 4.0, 1000, table());
  const double quad = mean_square_quadrature(1.0, 4.0, 1000, table());
  CHECK(std::abs(exact - quad) <= 1e-6 * exact);
  CHECK(exact >= 0.0);
}

TEST_CASE("mean square lower bound from the diagonal") {
  for (std::int64_t N : {50, 300}) {
    for (auto [A, B] : {std::pair{1.0, 4.0}, std::pair{0.0, 0.5}, std::pair{2.0, 12.0}}) {
      const double ms = mean_square_exact(A, B, N, table());
      double diag = 0.0;
      double cross = 0.0;
      for (std::int64_t m = N + 1; m <= 2 * N; ++m) {
        diag += std::pow(table().d3(m), 2);
        for (std::int64_t n = N + 1; n <= 2 * N; ++n) {
          if (m == n) continue;
          const double delta = std::abs(std::cbrt(double(m) * m) - std::cbrt(double(n) * n));
          cross += table().d3(m) * table().d3(n) * 2.0 / ((B - A) * delta);
        }
      }
      CHECK(ms >= 0.0);
      CHECK(ms >= (B - A) * std::max(0.0, diag - cross) - 1e-9 * ms);
    }
  }
}

TEST_CASE("good point") {
  const GoodPoint gp = find_good_point(1.0, 4.0, 1000, table());
  CHECK(gp.C >= 1.0);
  CHECK(gp.C <= 4.0);
  CHECK(gp.bound == doctest::Approx(100.0 * std::pow(std::log(1000.0), 4.5)));
  CHECK(gp.within_bound);
  const GoodPoint narrow = find_good_point(1.0, 1.1, 1000, table());
  CHECK(narrow.C >= 1.0);
  CHECK(narrow.C <= 1.1);
}

TEST_CASE("scan consistency and certificate") {
  const ExpSumScan scan = scan_exp_sum(1.0, 4.0, 500, table());
  REQUIRE(scan.good_point.has_value());
  double min_sq = 1e300;
  for (const auto& s : scan.grid) min_sq = std::min(min_sq, std::norm(s.S));
  CHECK(scan.ms_exact / 3.0 >= min_sq);
  CHECK(scan.good_point->magnitude * scan.good_point->magnitude <= min_sq + 1e-9);
  CHECK(std::abs(scan.ms_quad - mean_square_quadrature(1.0, 4.0, 500, table())) == 0.0);
  const double spacing = scan.grid[1].alpha - scan.grid[0].alpha;
  CHECK(spacing <= 0.1 * std::pow(1000.0, -2.0 / 3.0) * 2.0 * pi + 1e-15);

  const auto j = nlohmann::json::parse(scan_summary_json(scan));
  for (const char* key : {"N", "A", "B", "ms_exact", "ms_quad", "ratio", "C", "abs_S_at_C", "bound"}) CHECK(j.contains(key));
  std::istringstream csv(scan_csv(scan));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "alpha,S_re,S_im,abs_S");
}
