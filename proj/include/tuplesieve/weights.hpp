#ifndef TUPLESIEVE_WEIGHTS_HPP
#define TUPLESIEVE_WEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <tuplesieve/arith.hpp>
#include <tuplesieve/common.hpp>

namespace tuplesieve {

// A set of offsets h_1 < h_2 < ... < h_k.  May be empty.
struct OffsetTuple {
  std::vector<std::uint32_t> offsets;

  OffsetTuple() = default;
  explicit OffsetTuple(std::vector<std::uint32_t> offs)
      : offsets(std::move(offs)) {
    for (std::size_t i = 1; i < offsets.size(); ++i)
      if (offsets[i] <= offsets[i - 1])
        throw domain_error("OffsetTuple: offsets must be strictly increasing");
  }

  std::size_t k() const { return offsets.size(); }
  bool empty() const { return offsets.empty(); }
  std::uint32_t max_offset() const { return empty() ? 0 : offsets.back(); }
  std::uint32_t span() const {
    return empty() ? 0 : offsets.back() - offsets.front();
  }
  bool contains(std::uint32_t h) const {
    return std::binary_search(offsets.begin(), offsets.end(), h);
  }

  OffsetTuple without(std::uint32_t h) const {
    std::vector<std::uint32_t> out;
    out.reserve(offsets.size());
    for (std::uint32_t o : offsets)
      if (o != h)
        out.push_back(o);
    return OffsetTuple(std::move(out));
  }

  // Sorted deduplicated union.
  static OffsetTuple merge(const OffsetTuple& a, const OffsetTuple& b) {
    std::vector<std::uint32_t> out;
    out.reserve(a.offsets.size() + b.offsets.size());
    std::set_union(a.offsets.begin(), a.offsets.end(), b.offsets.begin(),
                   b.offsets.end(), std::back_inserter(out));
    return OffsetTuple(std::move(out));
  }

  static std::size_t intersection_size(const OffsetTuple& a,
                                       const OffsetTuple& b) {
    std::vector<std::uint32_t> out;
    std::set_intersection(a.offsets.begin(), a.offsets.end(), b.offsets.begin(),
                          b.offsets.end(), std::back_inserter(out));
    return out.size();
  }

  bool operator==(const OffsetTuple& o) const { return offsets == o.offsets; }
};

// Parameters of one truncated divisor-sum weight: offsets, log power a,
// truncation level R.
struct WeightSpec {
  OffsetTuple tuple;
  int a = 0;       // exponent on log(R/d)
  std::uint64_t R = 1;

  WeightSpec() = default;
  WeightSpec(OffsetTuple t, int a_, std::uint64_t R_)
      : tuple(std::move(t)), a(a_), R(R_) {
    if (a < 0)
      throw domain_error("WeightSpec: a must be non-negative");
    if (R < 1)
      throw domain_error("WeightSpec: R must be at least 1");
  }
};

// mu(d) log(R/d)^a / a!, zero above the truncation level.
inline double lambda_small(std::uint64_t d, int a, std::uint64_t R,
                           const FactorTable& table) {
  if (d > R)
    return 0.0;
  int mu = (d == 1) ? 1 : table.mobius(d);
  if (mu == 0)
    return 0.0;
  double lg = std::log(static_cast<double>(R) / static_cast<double>(d));
  return mu * std::pow(lg, a) / factorial(a);
}

// Distinct primes dividing (n+h_1)(n+h_2)...(n+h_k), sorted ascending.
// Every squarefree divisor of the product is a subset product of these.
inline std::vector<std::uint64_t>
polynomial_prime_support(std::uint64_t n, const OffsetTuple& tuple,
                         const FactorTable& table) {
  std::vector<std::uint64_t> primes;
  for (std::uint32_t h : tuple.offsets) {
    std::uint64_t m = n + h;
    if (m > table.limit())
      throw domain_error("polynomial_prime_support: n + offset exceeds table");
    while (m > 1) {
      std::uint64_t p = table.spf(m);
      primes.push_back(p);
      while (m % p == 0)
        m /= p;
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

namespace detail {

// DFS over squarefree subset products of the support, pruned at R.  The
// product never overflows: it stays <= R.  Visit order is fixed (primes
// ascending, depth first) so the accumulation is reproducible.
inline double divisor_sum(const std::vector<std::uint64_t>& support,
                          std::size_t idx, std::uint64_t prod, int sign, int a,
                          std::uint64_t R) {
  double total =
      sign * std::pow(std::log(static_cast<double>(R) /
                               static_cast<double>(prod)),
                      a);
  for (std::size_t i = idx; i < support.size(); ++i) {
    if (support[i] > R / prod)
      break;
    total += divisor_sum(support, i + 1, prod * support[i], -sign, a, R);
  }
  return total;
}

} // namespace detail

// The truncated divisor-sum weight
//   (1/a!) sum_{d | P(n,H), d <= R} mu(d) log(R/d)^a
// evaluated by subset enumeration over the prime support; P(n,H) itself is
// never materialized (it can exceed 64 bits, admissible d cannot).
inline double big_lambda(std::uint64_t n, const WeightSpec& spec,
                         const FactorTable& table) {
  std::vector<std::uint64_t> support =
      polynomial_prime_support(n, spec.tuple, table);
  // Primes above R can never appear in a divisor d <= R.
  while (!support.empty() && support.back() > spec.R)
    support.pop_back();
  double sum = detail::divisor_sum(support, 0, 1, 1, spec.a, spec.R);
  return sum / factorial(spec.a);
}

// When n+h0 is prime and exceeds R, dropping h0 from the tuple removes no
// divisor d <= R, so the weight is unchanged (at the same log power a).
inline bool prime_shift_identity_check(std::uint64_t n,
                                       const OffsetTuple& tuple,
                                       std::uint32_t h0, int a,
                                       std::uint64_t R,
                                       const FactorTable& table) {
  if (!tuple.contains(h0))
    throw domain_error("prime_shift_identity_check: h0 not in tuple");
  if (!table.is_prime(n + h0))
    throw domain_error("prime_shift_identity_check: n + h0 is not prime");
  if (n + h0 <= R)
    throw domain_error("prime_shift_identity_check: requires n + h0 > R");
  double with = big_lambda(n, WeightSpec(tuple, a, R), table);
  double without = big_lambda(n, WeightSpec(tuple.without(h0), a, R), table);
  double scale = std::max({std::fabs(with), std::fabs(without), 1.0});
  return std::fabs(with - without) <= 1e-9 * scale;
}

} // namespace tuplesieve

#endif
