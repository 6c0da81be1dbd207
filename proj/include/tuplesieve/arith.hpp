#ifndef TUPLESIEVE_ARITH_HPP
#define TUPLESIEVE_ARITH_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include <tuplesieve/common.hpp>

namespace tuplesieve {

struct Factorization {
  // (prime, exponent) pairs, primes strictly increasing, exponents >= 1.
  std::vector<std::pair<std::uint64_t, int>> factors;
};

// Smallest-prime-factor table: spf(n) is the least prime dividing n for
// 2 <= n <= limit, so spf(p) == p exactly at primes.  Immutable after
// construction; safe for shared concurrent reads.
class FactorTable {
public:
  explicit FactorTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 2)
      throw domain_error("FactorTable: limit must be at least 2");
    std::uint64_t cap = entry_cap();
    if (limit + 1 > cap)
      throw resource_error("FactorTable: limit " + std::to_string(limit) +
                           " exceeds entry cap " + std::to_string(cap) +
                           " (override with TUPLESIEVE_SPF_CAP)");
    spf_.assign(limit + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes.push_back(static_cast<std::uint32_t>(i));
      }
      for (std::uint32_t p : primes) {
        if (p > spf_[i] || i * p > limit)
          break;
        spf_[i * p] = p;
      }
    }
  }

  std::uint64_t limit() const { return limit_; }

  std::uint32_t spf(std::uint64_t n) const {
    check_range(n, 2);
    return spf_[n];
  }

  bool is_prime(std::uint64_t n) const {
    check_range(n, 2);
    return spf_[n] == n;
  }

  Factorization factorize(std::uint64_t n) const {
    check_range(n, 2);
    Factorization out;
    while (n > 1) {
      std::uint64_t p = spf_[n];
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.factors.emplace_back(p, e);
    }
    return out;
  }

  // Moebius function: 0 unless n is squarefree, else (-1)^#prime factors.
  int mobius(std::uint64_t n) const {
    if (n == 1)
      return 1;
    check_range(n, 1);
    int count = 0;
    while (n > 1) {
      std::uint64_t p = spf_[n];
      n /= p;
      if (n % p == 0)
        return 0;
      ++count;
    }
    return (count % 2 == 0) ? 1 : -1;
  }

  // Chebyshev weight: log n at primes, exactly 0 elsewhere.
  double theta(std::uint64_t n) const {
    check_range(n, 2);
    return spf_[n] == n ? std::log(static_cast<double>(n)) : 0.0;
  }

private:
  static std::uint64_t entry_cap() {
    if (const char* env = std::getenv("TUPLESIEVE_SPF_CAP")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v >= 2)
        return v;
    }
    return std::uint64_t(1) << 28;
  }

  void check_range(std::uint64_t n, std::uint64_t lo) const {
    if (n < lo || n > limit_)
      throw domain_error("FactorTable: argument " + std::to_string(n) +
                         " outside [" + std::to_string(lo) + ", " +
                         std::to_string(limit_) + "]");
  }

  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

inline FactorTable build_factor_table(std::uint64_t limit) {
  return FactorTable(limit);
}

inline Factorization factorize(std::uint64_t n, const FactorTable& table) {
  return table.factorize(n);
}

inline int mobius(std::uint64_t n, const FactorTable& table) {
  return table.mobius(n);
}

inline double theta(std::uint64_t n, const FactorTable& table) {
  return table.theta(n);
}

// Plain prime list for the singular-series Euler products, where only the
// primes themselves are needed and cutoffs reach 1e8.  Odd-only sieve of
// Eratosthenes; results are cached (grow-only) behind a mutex.
inline std::shared_ptr<const std::vector<std::uint32_t>>
primes_up_to(std::uint64_t limit) {
  static std::mutex mu;
  static std::uint64_t cached_limit = 0;
  static std::shared_ptr<const std::vector<std::uint32_t>> cached;

  std::lock_guard<std::mutex> lock(mu);
  if (cached && limit <= cached_limit)
    return cached;

  auto primes = std::make_shared<std::vector<std::uint32_t>>();
  if (limit >= 2)
    primes->push_back(2);
  if (limit >= 3) {
    // composite[i] marks 2i+1.
    std::uint64_t half = (limit - 1) / 2;
    std::vector<std::uint8_t> composite(half + 1, 0);
    for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
      if (composite[i])
        continue;
      std::uint64_t p = 2 * i + 1;
      for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p)
        composite[j] = 1;
    }
    for (std::uint64_t i = 1; i <= half; ++i)
      if (!composite[i])
        primes->push_back(static_cast<std::uint32_t>(2 * i + 1));
  }
  cached_limit = limit;
  cached = primes;
  return cached;
}

} // namespace tuplesieve

#endif
