#ifndef TUPLESIEVE_GALLAGHER_HPP
#define TUPLESIEVE_GALLAGHER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <unordered_map>
#include <vector>

#include <tuplesieve/common.hpp>
#include <tuplesieve/singular.hpp>
#include <tuplesieve/weights.hpp>

namespace tuplesieve {

// One subinterval [lo, hi] of [0, h] contributing k-element subsets.
// d counts integer points: hi - lo + 1.  (The asymptotics are written with
// interval lengths; the integer count makes the k = 1 identity exact and
// agrees asymptotically.)
struct SubintervalPart {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  int k = 1;

  std::uint64_t d() const { return std::uint64_t(hi) - lo + 1; }
};

struct SubintervalConfig {
  std::uint32_t h = 0;
  std::vector<SubintervalPart> parts;

  void validate() const {
    if (parts.empty())
      throw domain_error("SubintervalConfig: at least one part required");
    for (const SubintervalPart& p : parts) {
      if (p.lo >= p.hi || p.hi > h)
        throw domain_error("SubintervalConfig: parts must satisfy "
                           "0 <= lo < hi <= h");
      if (p.k < 1)
        throw domain_error("SubintervalConfig: part k must be >= 1");
      if (p.d() < static_cast<std::uint64_t>(p.k))
        throw domain_error("SubintervalConfig: part has fewer points than k");
    }
  }

  std::uint64_t tuple_count() const {
    std::uint64_t total = 1;
    for (const SubintervalPart& p : parts) {
      std::uint64_t c = binomial_count(p.d(), p.k);
      if (c != 0 && total > UINT64_MAX / c)
        return UINT64_MAX;
      total *= c;
    }
    return total;
  }

  double predicted() const {
    double out = 1.0;
    for (const SubintervalPart& p : parts)
      out *= std::pow(static_cast<double>(p.d()), p.k) / factorial(p.k);
    return out;
  }
};

struct GallagherReport {
  double exact_sum = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
  double error_bound = 0.0; // sum of per-tuple value * tail_bound
  std::uint64_t tuple_count = 0;
  std::uint32_t h = 0;
};

namespace detail {

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t seed = v.size();
    for (std::uint32_t x : v)
      seed ^= x + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
    return seed;
  }
};

// Bounded memo of singular-series values keyed by the translation-
// normalized union (offsets minus their minimum): many tuples share a
// difference pattern, and the series is translation invariant.
class SingularCache {
public:
  explicit SingularCache(std::uint64_t cutoff, std::size_t cap = 1u << 20)
      : cutoff_(cutoff), cap_(cap) {}

  SingularValue get(const std::vector<std::uint32_t>& sorted_union) {
    std::vector<std::uint32_t> key(sorted_union);
    std::uint32_t base = key.front();
    for (std::uint32_t& x : key)
      x -= base;
    auto it = map_.find(key);
    if (it != map_.end())
      return it->second;
    SingularValue v = singular_series(OffsetTuple(key), cutoff_);
    if (map_.size() >= cap_)
      map_.clear();
    map_.emplace(std::move(key), v);
    return v;
  }

private:
  std::uint64_t cutoff_;
  std::size_t cap_;
  std::unordered_map<std::vector<std::uint32_t>, SingularValue, VecHash> map_;
};

// Lexicographic k-subset enumeration of {lo, ..., hi}.
struct Combination {
  std::uint32_t lo, hi;
  int k;
  std::vector<std::uint32_t> cur;

  Combination(std::uint32_t lo_, std::uint32_t hi_, int k_)
      : lo(lo_), hi(hi_), k(k_) {
    cur.resize(k);
    for (int i = 0; i < k; ++i)
      cur[i] = lo + i;
  }

  bool next() {
    int i = k - 1;
    while (i >= 0 && cur[i] == hi - (k - 1 - i))
      --i;
    if (i < 0)
      return false;
    ++cur[i];
    for (int j = i + 1; j < k; ++j)
      cur[j] = cur[j - 1] + 1;
    return true;
  }

  // Jump to the combination of the given lexicographic rank.
  void seek(std::uint64_t rank) {
    std::uint64_t n = std::uint64_t(hi) - lo + 1;
    std::uint32_t base = lo;
    for (int i = 0; i < k; ++i) {
      std::uint32_t v = base;
      while (true) {
        std::uint64_t block = binomial_count(hi - v, k - 1 - i);
        if (rank < block)
          break;
        rank -= block;
        ++v;
      }
      cur[i] = v;
      base = v + 1;
    }
  }
};

struct GallagherPartial {
  KahanSum sum;
  KahanSum err;
};

// Sums singular series over the cross product of per-part subsets, with the
// first part's combinations restricted to ranks [first, last).
inline GallagherPartial
gallagher_block(const SubintervalConfig& config, std::uint64_t first,
                std::uint64_t last, SingularCache& cache) {
  GallagherPartial out;
  std::vector<Combination> iters;
  for (const SubintervalPart& p : config.parts)
    iters.emplace_back(p.lo, p.hi, p.k);
  iters[0].seek(first);

  std::vector<std::uint32_t> uni;
  for (std::uint64_t idx = first; idx < last; ++idx) {
    // Inner parts run over their full ranges for each first-part subset.
    for (std::size_t i = 1; i < iters.size(); ++i)
      iters[i] = Combination(config.parts[i].lo, config.parts[i].hi,
                             config.parts[i].k);
    bool more = true;
    while (more) {
      uni.clear();
      for (const Combination& c : iters)
        uni.insert(uni.end(), c.cur.begin(), c.cur.end());
      std::sort(uni.begin(), uni.end());
      uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
      SingularValue v = cache.get(uni);
      out.sum.add(v.value);
      out.err.add(v.value * v.tail_bound);
      // Odometer over parts 1..l-1; part 0 advances in the outer loop.
      more = false;
      for (std::size_t i = iters.size(); i-- > 1;) {
        if (iters[i].next()) {
          more = true;
          break;
        }
        iters[i] = Combination(config.parts[i].lo, config.parts[i].hi,
                               config.parts[i].k);
      }
    }
    if (idx + 1 < last)
      iters[0].next();
  }
  return out;
}

} // namespace detail

// Exact (enumerated) left side of the subinterval average against the
// predicted product of d_i^{k_i}/k_i!.  Tuples whose parts collide are
// included: the average is taken over all tuples, collisions and all.
inline GallagherReport exact_average(const SubintervalConfig& config,
                                     std::uint64_t cutoff,
                                     std::uint64_t enum_cap = 10'000'000,
                                     int workers = 1) {
  config.validate();
  std::uint64_t count = config.tuple_count();
  if (count > enum_cap)
    throw resource_error("exact_average: tuple count " +
                         std::to_string(count) + " exceeds enumeration cap " +
                         std::to_string(enum_cap));

  std::uint64_t first_count =
      binomial_count(config.parts[0].d(), config.parts[0].k);
  workers = std::max(1, workers);
  // The block count is fixed (not tied to the worker count) so the merge
  // groups terms identically no matter how many threads run.
  std::uint64_t nblocks = std::min<std::uint64_t>(first_count, 64);
  std::vector<detail::GallagherPartial> partials(nblocks);

  auto run = [&](std::uint64_t b) {
    std::uint64_t lo = first_count * b / nblocks;
    std::uint64_t hi = first_count * (b + 1) / nblocks;
    detail::SingularCache cache(cutoff);
    partials[b] = detail::gallagher_block(config, lo, hi, cache);
  };
  if (workers == 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b)
      run(b);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < nblocks; b = next++)
          run(b);
      });
    for (std::thread& t : pool)
      t.join();
  }

  // Fixed partition-order merge keeps the result independent of workers.
  KahanSum total, err;
  for (const detail::GallagherPartial& p : partials) {
    total.add(p.sum.value());
    err.add(p.err.value());
  }

  GallagherReport report;
  report.exact_sum = total.value();
  report.predicted = config.predicted();
  report.ratio = report.exact_sum / report.predicted;
  report.error_bound = err.value();
  report.tuple_count = count;
  report.h = config.h;
  return report;
}

// A configuration template expressed as fractions of h, so one shape can be
// instantiated across a ladder of interval lengths.
struct TrendPart {
  double lo_frac = 0.0;
  double hi_frac = 1.0;
  int k = 1;
};

inline SubintervalConfig instantiate_template(const std::vector<TrendPart>& tmpl,
                                              std::uint32_t h) {
  SubintervalConfig config;
  config.h = h;
  for (const TrendPart& t : tmpl) {
    SubintervalPart p;
    p.lo = static_cast<std::uint32_t>(std::lround(t.lo_frac * h));
    p.hi = static_cast<std::uint32_t>(std::lround(t.hi_frac * h));
    p.k = t.k;
    config.parts.push_back(p);
  }
  return config;
}

inline std::vector<GallagherReport>
ratio_trend(const std::vector<TrendPart>& tmpl,
            const std::vector<std::uint32_t>& h_values, std::uint64_t cutoff,
            std::uint64_t enum_cap = 10'000'000, int workers = 1) {
  std::vector<GallagherReport> out;
  out.reserve(h_values.size());
  for (std::uint32_t h : h_values)
    out.push_back(
        exact_average(instantiate_template(tmpl, h), cutoff, enum_cap,
                      workers));
  return out;
}

} // namespace tuplesieve

#endif
