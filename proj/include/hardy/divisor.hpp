#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hardy/zeta.hpp"

namespace hardy {

inline constexpr std::int64_t kMaxSieveBound = 100'000'000;

/// Sieved d(n), d3(n) and prefix sums of d3(n)^2 for 1 <= n <= bound.
/// Immutable once built; share freely across threads.
class DivisorTable {
 public:
  /// Dirichlet-convolution sieve: d = 1 * 1, d3 = d * 1.
  /// Throws RangeError unless 1 <= bound <= kMaxSieveBound, ResourceError on allocation failure.
  static DivisorTable build(std::int64_t bound);

  [[nodiscard]] std::int64_t bound() const noexcept { return bound_; }
  [[nodiscard]] std::uint32_t d(std::int64_t n) const { return d_[checked(n)]; }
  [[nodiscard]] std::uint32_t d3(std::int64_t n) const { return d3_[checked(n)]; }
  /// sum_{m <= n} d3(m)^2; n = 0 gives 0.
  [[nodiscard]] std::uint64_t d3sq_prefix(std::int64_t n) const;
  [[nodiscard]] std::uint32_t smallest_prime_factor(std::int64_t n) const { return spf_[checked(n)]; }

  /// Raw arrays indexed by n (slot 0 is unused).
  [[nodiscard]] std::span<const std::uint32_t> d_values() const noexcept { return d_; }
  [[nodiscard]] std::span<const std::uint32_t> d3_values() const noexcept { return d3_; }
  [[nodiscard]] std::span<const std::uint64_t> d3sq_prefix_values() const noexcept { return prefix_; }

  /// Prime factorisation of n as (prime, exponent) pairs in increasing order.
  [[nodiscard]] std::vector<std::pair<std::uint32_t, int>> factorize(std::int64_t n) const;

  /// Binary cache file: "D3SIEVE1", u64 bound, then d, d3 (u32) and prefix (u64), all little-endian.
  void save(const std::filesystem::path& path) const;
  static DivisorTable load(const std::filesystem::path& path);

 private:
  DivisorTable() = default;
  std::size_t checked(std::int64_t n) const;
  void build_spf();

  std::int64_t bound_ = 0;
  std::vector<std::uint32_t> d_;
  std::vector<std::uint32_t> d3_;
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint32_t> spf_;
};

/// Cache directory: $HARDY_CACHE_DIR, default ./cache.
[[nodiscard]] std::filesystem::path sieve_cache_dir();
[[nodiscard]] std::filesystem::path sieve_cache_path(std::int64_t bound);

/// Loads a cached table of exactly this bound, or builds and stores one.
/// A cache that cannot be written is not an error.
[[nodiscard]] std::shared_ptr<const DivisorTable> load_or_build_table(std::int64_t bound);

/// Number of ordered triples (k, l, m) with klm = n, by direct enumeration. 1 <= n <= 1e6.
[[nodiscard]] std::int64_t d3_bruteforce(std::int64_t n);

struct ShiftedCoefficient {
  std::int64_t n = 0;
  double U = 0.0;
  ComplexValue value{};
};

/// h(n, U) = n^(-iU) sum_{delta | n} d(delta) delta^(iU), over divisors generated
/// from the sieve factorisation. Exact at U = 0. Throws RangeError if n > table.bound().
[[nodiscard]] ShiftedCoefficient h_shift(std::int64_t n, double U, const DivisorTable& table);

/// Exact sum_{n <= x} d3(n)^2 from the prefix array.
[[nodiscard]] std::uint64_t sum_d3_squared(std::int64_t x, const DivisorTable& table);

/// sum_{n <= x} d3(n)^2 / (x log^8 x); x >= 2.
[[nodiscard]] double d3_squared_ratio(std::int64_t x, const DivisorTable& table);

}  // namespace hardy
