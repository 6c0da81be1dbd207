#ifndef TUPLESIEVE_SINGULAR_HPP
#define TUPLESIEVE_SINGULAR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <tuplesieve/arith.hpp>
#include <tuplesieve/common.hpp>
#include <tuplesieve/weights.hpp>

namespace tuplesieve {

// Euler-product value with a certified multiplicative truncation error:
// the true value lies in [value*(1-tail_bound), value*(1+tail_bound)].
struct SingularValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::uint64_t cutoff = 0;
};

// Number of distinct residue classes mod p occupied by the tuple.
inline int occupancy(const OffsetTuple& tuple, std::uint64_t p) {
  if (tuple.empty())
    throw domain_error("occupancy: tuple must be nonempty");
  std::vector<std::uint32_t> residues;
  residues.reserve(tuple.k());
  for (std::uint32_t h : tuple.offsets)
    residues.push_back(static_cast<std::uint32_t>(h % p));
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()),
                 residues.end());
  return static_cast<int>(residues.size());
}

namespace detail {

// Generic Euler factor in log form: log[(1 - k/p)(1 - 1/p)^{-k}], the shape
// every factor takes once p exceeds the largest pairwise difference (all k
// residues distinct mod p).  Zeroed below 2k+1 where the expansion bound
// does not apply; callers only read ranges starting above max(span, 2k).
inline double generic_log_factor(int k, double p) {
  return std::log1p(-k / p) - k * std::log1p(-1.0 / p);
}

// Cumulative sums of generic_log_factor over the cached prime list, one
// array per tuple size k.  cum[i] = sum over the first i primes.
inline std::shared_ptr<const std::vector<double>>
generic_cumsum(int k, const std::vector<std::uint32_t>& primes) {
  static std::mutex mu;
  static std::map<int, std::pair<std::size_t,
                                 std::shared_ptr<const std::vector<double>>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end() && it->second.first >= primes.size())
    return it->second.second;
  auto cum = std::make_shared<std::vector<double>>(primes.size() + 1, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    double p = primes[i];
    if (primes[i] > 2u * static_cast<std::uint32_t>(k))
      acc += generic_log_factor(k, p);
    (*cum)[i + 1] = acc;
  }
  cache[k] = {primes.size(), cum};
  return cum;
}

} // namespace detail

// Hardy-Littlewood singular series, truncated at `cutoff`:
//   prod_{p <= cutoff} (1 - |Omega_H(p)|/p) (1 - 1/p)^{-|H|}.
//
// Tail certificate.  For p > cutoff >= max(span(H), 2k) every omitted
// factor is generic, f_p = (1 - k/p)(1 - 1/p)^{-k}, and
//   log f_p = [log(1 - k/p) + k/p] - k [log(1 - 1/p) + 1/p].
// For 0 <= t < 1, |log(1-t) + t| <= t^2 / (2(1-t)).  With t = k/p <= 1/2
// (since p > 2k) the first bracket is at most (k/p)^2; with t = 1/p <= 1/2
// the second is at most k/p^2 <= k^2/p^2.  Hence |log f_p| <= 2k^2/p^2, and
//   |sum_{p > C} log f_p| <= 2k^2 sum_{n > C} 1/n^2 <= 2k^2 / C
// by integral comparison.  The multiplicative bound below is exp of that.
inline SingularValue singular_series(const OffsetTuple& tuple,
                                     std::uint64_t cutoff) {
  std::size_t k = tuple.k();
  if (k == 0)
    return {1.0, 0.0, cutoff}; // empty product convention
  if (k == 1)
    return {1.0, 0.0, cutoff}; // every factor is exactly 1
  std::uint64_t min_cutoff = std::max<std::uint64_t>(tuple.span(), 2 * k);
  if (cutoff < min_cutoff)
    throw domain_error("singular_series: cutoff must be at least " +
                       std::to_string(min_cutoff) +
                       " (max pairwise difference and twice the tuple size)");

  auto primes = primes_up_to(cutoff);
  // Explicit factors while the occupancy can differ from k.
  std::uint64_t explicit_bound = std::max<std::uint64_t>(tuple.span(), 2 * k);
  double log_value = 0.0;
  std::size_t i = 0;
  for (; i < primes->size() && (*primes)[i] <= explicit_bound; ++i) {
    std::uint64_t p = (*primes)[i];
    int occ = occupancy(tuple, p);
    if (static_cast<std::uint64_t>(occ) == p)
      return {0.0, 0.0, cutoff}; // inadmissible: exact zero
    double dp = static_cast<double>(p);
    log_value += std::log1p(-occ / dp) -
                 static_cast<double>(k) * std::log1p(-1.0 / dp);
  }
  // Generic factors from the per-k cumulative table.
  std::size_t end = static_cast<std::size_t>(
      std::upper_bound(primes->begin(), primes->end(), cutoff) -
      primes->begin());
  auto cum = detail::generic_cumsum(static_cast<int>(k), *primes);
  log_value += (*cum)[end] - (*cum)[i];

  double tail = std::expm1(2.0 * static_cast<double>(k) *
                           static_cast<double>(k) /
                           static_cast<double>(cutoff));
  return {std::exp(log_value), tail, cutoff};
}

inline SingularValue
singular_series_union(std::span<const OffsetTuple> tuples,
                      std::uint64_t cutoff) {
  std::vector<std::uint32_t> all;
  for (const OffsetTuple& t : tuples)
    all.insert(all.end(), t.offsets.begin(), t.offsets.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return singular_series(OffsetTuple(std::move(all)), cutoff);
}

} // namespace tuplesieve

#endif
