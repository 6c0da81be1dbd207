#ifndef TUPLESIEVE_COMMON_HPP
#define TUPLESIEVE_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tuplesieve {

// Precondition violations.  The CLI maps these to exit code 2.
class domain_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Memory or enumeration caps.  The CLI maps these to exit code 3.
class resource_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Exact below 21!, log-gamma beyond (21! overflows uint64, not double,
// but the switch keeps the table small and the error uniform).
inline double factorial(long long a) {
  static const double table[21] = {
      1.0,
      1.0,
      2.0,
      6.0,
      24.0,
      120.0,
      720.0,
      5040.0,
      40320.0,
      362880.0,
      3628800.0,
      39916800.0,
      479001600.0,
      6227020800.0,
      87178291200.0,
      1307674368000.0,
      20922789888000.0,
      355687428096000.0,
      6402373705728000.0,
      121645100408832000.0,
      2432902008176640000.0};
  if (a < 0)
    throw domain_error("factorial: negative argument");
  if (a <= 20)
    return table[a];
  return std::exp(std::lgamma(static_cast<double>(a) + 1.0));
}

inline double binomial(long long n, long long k) {
  if (k < 0 || k > n)
    return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (long long i = 1; i <= k; ++i)
    out *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

// Saturating exact count, used for enumeration-cap checks.
inline std::uint64_t binomial_count(std::uint64_t n, std::uint64_t k) {
  constexpr std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::uint64_t q = out / i;
    std::uint64_t rem = out % i;
    std::uint64_t m = n - k + i;
    if (q > inf / m)
      return inf;
    out = q * m + rem * m / i;
  }
  return out;
}

// Compensated (Kahan) accumulator; chunk sums are merged in index order
// so results do not depend on the worker count.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

} // namespace tuplesieve

#endif
