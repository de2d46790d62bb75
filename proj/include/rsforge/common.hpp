#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rsforge {

using i64 = std::int64_t;
using Rat = boost::rational<i64>;

// Exit-code-bearing error families. The CLI maps these onto process exit
// codes; library callers catch them like any std::exception.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr i64 kDefaultEnumerationCap = 10'000'000;

// Effective enumeration cap: RSFORGE_CAP when set, else the built-in default.
i64 default_cap();

inline void require_cap(i64 work, i64 cap, const char* what) {
  if (work > cap)
    throw ResourceCapError(std::string(what) + ": " + std::to_string(work) +
                           " entries exceeds cap " + std::to_string(cap));
}

// Width in bits of a fixed-width field able to hold `alphabet` distinct
// symbols. A one-symbol alphabet carries no information: width 0.
int ceil_log2(i64 alphabet);

// MSB-first rendering of `value` in exactly `width` bits.
std::string to_bits(std::uint64_t value, int width);

inline i64 rat_floor(const Rat& r) {
  i64 q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

i64 ipow(i64 base, int exp);

// Splits [0, total) into roughly even chunks, runs fn(begin, end) on up to
// `threads` workers, and returns per-chunk results in chunk order so callers
// can reduce deterministically regardless of thread count.
template <class R, class Fn>
std::vector<R> run_chunked(i64 total, int threads, Fn&& fn) {
  if (threads < 1) threads = 1;
  int chunks = threads;
  if (total < chunks) chunks = total > 0 ? static_cast<int>(total) : 1;
  std::vector<R> results(chunks);
  if (chunks == 1) {
    results[0] = fn(0, total);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  i64 per = total / chunks, extra = total % chunks, begin = 0;
  for (int c = 0; c < chunks; ++c) {
    i64 end = begin + per + (c < extra ? 1 : 0);
    pool.emplace_back([&results, &fn, c, begin, end] { results[c] = fn(begin, end); });
    begin = end;
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace rsforge
