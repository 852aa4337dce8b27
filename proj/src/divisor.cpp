#include "hardy/divisor.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <system_error>

#include "hardy/errors.hpp"
#include "hardy/summation.hpp"

namespace hardy {

namespace {

constexpr std::array<char, 8> kMagic{'D', '3', 'S', 'I', 'E', 'V', 'E', '1'};

template <typename T>
void write_le(std::ostream& out, std::span<const T> values) {
  static_assert(std::is_unsigned_v<T>);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (T v : values) {
      std::array<unsigned char, sizeof(T)> bytes{};
      for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<unsigned char>(v >> (8 * b));
      out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
    }
  }
}

template <typename T>
void read_le(std::istream& in, std::span<T> values) {
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  if constexpr (std::endian::native != std::endian::little) {
    for (T& v : values) {
      const auto* bytes = reinterpret_cast<const unsigned char*>(&v);
      T r = 0;
      for (std::size_t b = 0; b < sizeof(T); ++b) r |= static_cast<T>(bytes[b]) << (8 * b);
      v = r;
    }
  }
}

}  // namespace

DivisorTable DivisorTable::build(std::int64_t bound) {
  if (bound < 1 || bound > kMaxSieveBound) {
    throw RangeError("build_divisor_table: bound must lie in [1, 1e8], got " + std::to_string(bound));
  }
  DivisorTable table;
  table.bound_ = bound;
  const auto size = static_cast<std::size_t>(bound) + 1;
  try {
    table.d_.assign(size, 0);
    table.d3_.assign(size, 0);
    table.prefix_.assign(size, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("build_divisor_table: cannot allocate tables for bound " + std::to_string(bound));
  }
  // d = 1 * 1
  for (std::size_t i = 1; i < size; ++i) {
    for (std::size_t j = i; j < size; j += i) ++table.d_[j];
  }
  // d3 = d * 1
  for (std::size_t i = 1; i < size; ++i) {
    const std::uint32_t di = table.d_[i];
    for (std::size_t j = i; j < size; j += i) table.d3_[j] += di;
  }
  std::uint64_t running = 0;
  for (std::size_t n = 1; n < size; ++n) {
    const std::uint64_t sq = static_cast<std::uint64_t>(table.d3_[n]) * table.d3_[n];
    if (__builtin_add_overflow(running, sq, &running)) {
      throw RangeError("build_divisor_table: d3^2 prefix overflows 64 bits");
    }
    table.prefix_[n] = running;
  }
  table.build_spf();
  return table;
}

void DivisorTable::build_spf() {
  const auto size = static_cast<std::size_t>(bound_) + 1;
  try {
    spf_.assign(size, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("build_divisor_table: cannot allocate factor sieve");
  }
  if (size > 1) spf_[1] = 1;
  for (std::size_t i = 2; i < size; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i * i >= size) continue;
    for (std::size_t j = i * i; j < size; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::size_t DivisorTable::checked(std::int64_t n) const {
  if (n < 1 || n > bound_) {
    throw RangeError("divisor table: n = " + std::to_string(n) + " outside [1, " + std::to_string(bound_) + "]");
  }
  return static_cast<std::size_t>(n);
}

std::uint64_t DivisorTable::d3sq_prefix(std::int64_t n) const {
  if (n == 0) return 0;
  return prefix_[checked(n)];
}

std::vector<std::pair<std::uint32_t, int>> DivisorTable::factorize(std::int64_t n) const {
  std::size_t m = checked(n);
  std::vector<std::pair<std::uint32_t, int>> out;
  while (m > 1) {
    const std::uint32_t p = spf_[m];
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

void DivisorTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("sieve cache: cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  const std::array<std::uint64_t, 1> header{static_cast<std::uint64_t>(bound_)};
  write_le<std::uint64_t>(out, header);
  write_le<std::uint32_t>(out, std::span(d_).subspan(1));
  write_le<std::uint32_t>(out, std::span(d3_).subspan(1));
  write_le<std::uint64_t>(out, std::span(prefix_).subspan(1));
  if (!out) throw ResourceError("sieve cache: write to " + path.string() + " failed");
}

DivisorTable DivisorTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("sieve cache: cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ResourceError("sieve cache: bad magic in " + path.string());
  std::array<std::uint64_t, 1> header{};
  read_le<std::uint64_t>(in, header);
  const auto bound = static_cast<std::int64_t>(header[0]);
  if (!in || bound < 1 || bound > kMaxSieveBound) throw ResourceError("sieve cache: bad bound in " + path.string());

  std::error_code ec;
  const auto expected = 16 + static_cast<std::uintmax_t>(bound) * 16;
  if (std::filesystem::file_size(path, ec) != expected || ec) {
    throw ResourceError("sieve cache: truncated or oversized file " + path.string());
  }
  DivisorTable table;
  table.bound_ = bound;
  const auto size = static_cast<std::size_t>(bound) + 1;
  try {
    table.d_.assign(size, 0);
    table.d3_.assign(size, 0);
    table.prefix_.assign(size, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("sieve cache: cannot allocate tables");
  }
  read_le<std::uint32_t>(in, std::span(table.d_).subspan(1));
  read_le<std::uint32_t>(in, std::span(table.d3_).subspan(1));
  read_le<std::uint64_t>(in, std::span(table.prefix_).subspan(1));
  if (!in) throw ResourceError("sieve cache: short read from " + path.string());
  table.build_spf();
  return table;
}

std::filesystem::path sieve_cache_dir() {
  if (const char* env = std::getenv("HARDY_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return "cache";
}

std::filesystem::path sieve_cache_path(std::int64_t bound) {
  return sieve_cache_dir() / ("d3sieve_" + std::to_string(bound) + ".bin");
}

std::shared_ptr<const DivisorTable> load_or_build_table(std::int64_t bound) {
  const auto path = sieve_cache_path(bound);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      auto table = DivisorTable::load(path);
      if (table.bound() == bound) return std::make_shared<const DivisorTable>(std::move(table));
    } catch (const ResourceError&) {
      // unreadable cache: rebuild below and overwrite
    }
  }
  auto table = std::make_shared<const DivisorTable>(DivisorTable::build(bound));
  std::filesystem::create_directories(path.parent_path(), ec);
  if (!ec) {
    try {
      table->save(path);
    } catch (const ResourceError&) {
    }
  }
  return table;
}

std::int64_t d3_bruteforce(std::int64_t n) {
  if (n < 1 || n > 1'000'000) throw RangeError("d3_bruteforce: n must lie in [1, 1e6]");
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= n; ++k) {
    if (n % k != 0) continue;
    const std::int64_t rest = n / k;
    for (std::int64_t l = 1; l <= rest; ++l) {
      if (rest % l == 0) ++count;  // m = rest / l is then determined
    }
  }
  return count;
}

ShiftedCoefficient h_shift(std::int64_t n, double U, const DivisorTable& table) {
  if (n < 1 || n > table.bound()) {
    throw RangeError("h_shift: n = " + std::to_string(n) + " exceeds table bound " + std::to_string(table.bound()));
  }
  if (!std::isfinite(U)) throw DomainError("h_shift: non-finite U");
  std::vector<std::int64_t> divisors{1};
  for (const auto& [p, e] : table.factorize(n)) {
    const std::size_t base = divisors.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * pk);
    }
  }
  CompensatedComplexSum acc;
  const double log_n = std::log(static_cast<double>(n));
  for (std::int64_t delta : divisors) {
    const double weight = table.d(delta);
    if (U == 0.0) {
      acc.add({weight, 0.0});
    } else {
      // (delta / n)^(iU)
      const double phase = U * (std::log(static_cast<double>(delta)) - log_n);
      acc.add(weight * std::polar(1.0, phase));
    }
  }
  return {n, U, acc.value()};
}

std::uint64_t sum_d3_squared(std::int64_t x, const DivisorTable& table) {
  if (x < 0 || x > table.bound()) throw RangeError("sum_d3_squared: x outside table");
  return table.d3sq_prefix(x);
}

double d3_squared_ratio(std::int64_t x, const DivisorTable& table) {
  if (x < 2) throw RangeError("d3_squared_ratio: x must be at least 2");
  const double lx = std::log(static_cast<double>(x));
  return static_cast<double>(sum_d3_squared(x, table)) / (static_cast<double>(x) * std::pow(lx, 8));
}

}  // namespace hardy
