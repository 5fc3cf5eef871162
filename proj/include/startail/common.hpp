#pragma once
// Shared numeric plumbing: exact integers and rationals, binomials,
// probabilities with an optional exact form, counter-based randomness
// and a deterministic index-parallel map.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <vector>

namespace startail {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <typename T>
T ipow(T base, std::uint64_t exponent) {
  T result{1};
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

inline BigInt binomial_big(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

// Throws std::overflow_error when the value does not fit.
inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
    if (result > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

inline double binomial_real(double n, std::uint64_t k) {
  if (n < static_cast<double>(k)) return 0.0;
  double result = 1.0;
  for (std::uint64_t i = 0; i < k; ++i)
    result *= (n - static_cast<double>(i)) / static_cast<double>(i + 1);
  return result;
}

inline double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

template <typename T>
T binomial_as(std::uint64_t n, std::uint64_t k) {
  if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, BigInt>) {
    return T(binomial_big(n, k));
  } else {
    return static_cast<T>(binomial_real(static_cast<double>(n), k));
  }
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Smallest-denominator fraction a/q (q <= max_den) whose double value is
// exactly `value`; nullopt when none exists.
inline std::optional<Rational> small_fraction(double value,
                                              std::int64_t max_den = 1024) {
  if (!std::isfinite(value)) return std::nullopt;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    const double scaled = value * static_cast<double>(q);
    if (std::abs(scaled) > 9.0e15) return std::nullopt;
    const double a = std::nearbyint(scaled);
    if (a / static_cast<double>(q) == value)
      return Rational(static_cast<std::int64_t>(a), q);
  }
  return std::nullopt;
}

// An edge probability carried as a double plus, when the value is a small
// fraction, its exact rational form.
class Probability {
 public:
  Probability(double value)  // NOLINT(google-explicit-constructor)
      : value_(value), exact_(small_fraction(value)) {
    validate();
  }
  explicit Probability(const Rational& exact)
      : value_(to_double(exact)), exact_(exact) {
    validate();
  }

  // Accepts "0.25", "1/4" or "1e-3".
  static Probability parse(std::string_view text) {
    const std::string s(text);
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const BigInt num(s.substr(0, slash));
      const BigInt den(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator in " + s);
      return Probability(Rational(num, den));
    }
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad probability " + s);
    return Probability(v);
  }

  double value() const { return value_; }
  const std::optional<Rational>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }
  operator double() const { return value_; }  // NOLINT

 private:
  void validate() const {
    if (!(value_ >= 0.0 && value_ <= 1.0))
      throw std::invalid_argument("probability outside [0, 1]");
  }

  double value_;
  std::optional<Rational> exact_;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed) ^ mix64(counter ^ 0xD1B54A32D192ED03ULL));
}

// Uniform in [0, 1) with 53 random bits; a pure function of (seed, counter).
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_bits(seed, counter) >> 11U) *
         0x1.0p-53;
}

// Small sequential generator over the counter stream, for test and sweep
// drivers that need many draws from one seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  double uniform() { return counter_uniform(seed_, next_++); }
  std::uint64_t bits() { return counter_bits(seed_, next_++); }
  // Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(bits() % span);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t next_ = 0;
};

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

// Evaluates f(i) for i in [0, count) on `workers` threads and returns the
// results in index order, so the output never depends on scheduling.
template <typename F>
auto parallel_map(std::size_t count, unsigned workers, F&& f)
    -> std::vector<decltype(f(std::size_t{0}))> {
  using Result = decltype(f(std::size_t{0}));
  std::vector<std::optional<Result>> slots(count);
  workers = std::max(1U, std::min<unsigned>(resolve_workers(workers),
                                            static_cast<unsigned>(
                                                std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i].emplace(f(i));
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers) {
          try {
            slots[i].emplace(f(i));
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace startail
