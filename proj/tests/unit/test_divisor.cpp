#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "hardy/divisor.hpp"
#include "hardy/errors.hpp"

using namespace hardy;

namespace {
const DivisorTable& table() {
  static const DivisorTable t = DivisorTable::build(20'000);
  return t;
}
}  // namespace

TEST_CASE("small divisor values") {
  CHECK(table().d(1) == 1);
  CHECK(table().d3(1) == 1);
  for (int p : {2, 3, 5, 7}) CHECK(table().d3(p) == 3);
  CHECK(table().d3(4) == 6);
  CHECK(table().d3(8) == 10);
  CHECK(table().d(12) == 6);
}

TEST_CASE("prefix sums of d3 squared") {
  CHECK(sum_d3_squared(0, table()) == 0);
  CHECK(sum_d3_squared(1, table()) == 1);
  CHECK(sum_d3_squared(10, table()) == 371);
  const auto prefix = table().d3sq_prefix_values();
  for (std::size_t n = 2; n < prefix.size(); ++n) CHECK_FALSE(prefix[n] < prefix[n - 1]);
}

TEST_CASE("brute force d3") {
  CHECK(d3_bruteforce(1) == 1);
  CHECK(d3_bruteforce(6) == 9);
  CHECK(d3_bruteforce(9) == 6);
  for (std::int64_t n = 1; n <= 3000; ++n) REQUIRE(table().d3(n) == d3_bruteforce(n));
  CHECK_THROWS_AS((void)d3_bruteforce(0), RangeError);
  CHECK_THROWS_AS((void)d3_bruteforce(1'000'001), RangeError);
}

TEST_CASE("d3 is multiplicative") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> pick(1, 140);
  for (int i = 0; i < 500; ++i) {
    const auto m = pick(rng);
    const auto n = pick(rng);
    if (std::gcd(m, n) != 1) continue;
    CHECK(table().d3(m * n) == table().d3(m) * table().d3(n));
  }
}

TEST_CASE("hyperbola identity for the d3 summatory function") {
  // sum_{n<=x} d3(n) = sum_{k<=x} D(x/k), D the divisor summatory function
  const std::int64_t x = 10'000;
  std::vector<std::int64_t> D(x + 1, 0);
  for (std::int64_t n = 1; n <= x; ++n) D[n] = D[n - 1] + table().d(n);
  std::int64_t lhs = 0;
  for (std::int64_t n = 1; n <= x; ++n) lhs += table().d3(n);
  std::int64_t rhs = 0;
  for (std::int64_t k = 1; k <= x; ++k) rhs += D[x / k];
  CHECK(lhs == rhs);
}

TEST_CASE("shifted coefficient") {
  CHECK(std::abs(h_shift(1, 2.5, table()).value - 1.0) < 1e-15);
  for (std::int64_t n = 1; n <= 1000; ++n) REQUIRE(h_shift(n, 0.0, table()).value == ComplexValue(table().d3(n), 0.0));
  for (double U : {0.3, 1.0, 7.0}) {
    const ComplexValue expect = 2.0 + std::polar(1.0, -U * std::log(2.0));
    CHECK(std::abs(h_shift(2, U, table()).value - expect) < 1e-14);
  }
  CHECK_THROWS_AS((void)h_shift(20'001, 1.0, table()), RangeError);
}

TEST_CASE("h is multiplicative and bounded by d3") {
  for (double U : {0.0, 0.7, 3.2}) {
    for (std::int64_t m = 2; m <= 100; ++m) {
      for (std::int64_t n = m + 1; m * n <= 10'000; n += 7) {
        if (std::gcd(m, n) != 1) continue;
        const ComplexValue lhs = h_shift(m * n, U, table()).value;
        const ComplexValue rhs = h_shift(m, U, table()).value * h_shift(n, U, table()).value;
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * table().d3(m * n));
      }
    }
  }
  for (double U : {0.0, 1.0, 10.0}) {
    for (std::int64_t n = 1; n <= 10'000; n += 3) REQUIRE(std::abs(h_shift(n, U, table()).value) <= table().d3(n) + 1e-12);
  }
}

TEST_CASE("table range checks") {
  CHECK_THROWS_AS((void)DivisorTable::build(0), RangeError);
  CHECK_THROWS_AS((void)DivisorTable::build(kMaxSieveBound + 1), RangeError);
  CHECK_THROWS_AS((void)table().d3(0), RangeError);
  CHECK_THROWS_AS((void)table().d3(20'001), RangeError);
  CHECK_THROWS_AS((void)sum_d3_squared(20'001, table()), RangeError);
}

TEST_CASE("factorisation") {
  const auto f = table().factorize(360);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<std::uint32_t, int>{2, 3});
  CHECK(f[1] == std::pair<std::uint32_t, int>{3, 2});
  CHECK(f[2] == std::pair<std::uint32_t, int>{5, 1});
  CHECK(table().factorize(1).empty());
}

TEST_CASE("sieve cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "hardy_sieve_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "t.bin";
  const DivisorTable small = DivisorTable::build(500);
  small.save(path);
  CHECK(std::filesystem::file_size(path) == 16 + 500 * 16);
  const DivisorTable back = DivisorTable::load(path);
  CHECK(back.bound() == 500);
  for (std::int64_t n = 1; n <= 500; ++n) {
    REQUIRE(back.d(n) == small.d(n));
    REQUIRE(back.d3(n) == small.d3(n));
    REQUIRE(back.d3sq_prefix(n) == small.d3sq_prefix(n));
  }
  std::filesystem::resize_file(path, 100);
  CHECK_THROWS_AS((void)DivisorTable::load(path), ResourceError);
  {
    std::ofstream bad(path, std::ios::binary | std::ios::trunc);
    bad << "NOTASIEVE...............";
  }
  CHECK_THROWS_AS((void)DivisorTable::load(path), ResourceError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("load_or_build_table honours the cache directory") {
  const auto dir = std::filesystem::temp_directory_path() / "hardy_cache_env_test";
  std::filesystem::remove_all(dir);
  setenv("HARDY_CACHE_DIR", dir.c_str(), 1);
  const auto t1 = load_or_build_table(300);
  CHECK(std::filesystem::exists(dir / "d3sieve_300.bin"));
  const auto t2 = load_or_build_table(300);
  CHECK(t2->d3sq_prefix(300) == t1->d3sq_prefix(300));
  unsetenv("HARDY_CACHE_DIR");
  std::filesystem::remove_all(dir);
}
