#ifndef TUPLESIEVE_CORRELATIONS_HPP
#define TUPLESIEVE_CORRELATIONS_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <tuplesieve/common.hpp>
#include <tuplesieve/singular.hpp>
#include <tuplesieve/weights.hpp>

namespace tuplesieve {

// Scale parameters tying the interval (N, 2N], the truncation level
// R = floor(N^theta_exponent) and the offset window h = floor(lambda log 3N)
// together.  theta_exponent beyond ~1/4 is allowed but flagged: the one-theta
// and four-weight asymptotics need R well below N^{1/4}.
struct SieveParams {
  std::uint64_t N = 0;
  double theta_exponent = 0.24;
  double lambda = 0.172;
  std::uint64_t R = 2;
  std::uint32_t h = 0;

  static SieveParams make(std::uint64_t N, double theta_exponent,
                          double lambda = 0.172) {
    SieveParams p;
    p.N = N;
    p.theta_exponent = theta_exponent;
    p.lambda = lambda;
    p.R = static_cast<std::uint64_t>(
        std::pow(static_cast<double>(N), theta_exponent));
    p.h = static_cast<std::uint32_t>(
        lambda * std::log(3.0 * static_cast<double>(N)));
    if (p.R < 2)
      throw domain_error("SieveParams: R = floor(N^theta) must be >= 2");
    return p;
  }

  double log_R() const { return std::log(static_cast<double>(R)); }
  bool theta_warned() const { return theta_exponent > 0.26; }
};

// One weight factor of a correlation sum: tuple H and extra log power l
// (the weight is evaluated at power |H| + l).
struct CorrelationWeight {
  OffsetTuple tuple;
  int l = 0;
};

// A weighted sum  sum_n  prod theta(n+o) * prod Lambda_R(n, H_j, k_j+l_j).
struct CorrelationSpec {
  std::vector<std::uint32_t> theta_offsets; // 0 to 2 of them
  std::vector<CorrelationWeight> weights;   // 1 to 4 of them
};

struct MainTerm {
  double value = 0.0;
  bool admissible = true;
  SingularValue sing;
  int u = 0;
  int v = 0;
};

struct CorrelationReport {
  std::uint64_t N = 0;
  double empirical = 0.0;
  double main_term = 0.0;
  double ratio = 0.0;
  double main_term_uncertainty = 0.0; // singular-series certificate folded in
};

namespace detail {

inline WeightSpec to_weight_spec(const CorrelationWeight& w,
                                 const SieveParams& params) {
  return WeightSpec(w.tuple, static_cast<int>(w.tuple.k()) + w.l, params.R);
}

} // namespace detail

// Exact sum over n in (N, 2N].  Chunked with per-chunk compensated
// summation; chunk partials are merged in index order, so any worker count
// reproduces the single-threaded result bit for bit.
inline double empirical_sum(const CorrelationSpec& spec,
                            const SieveParams& params,
                            const FactorTable& table, int workers = 1) {
  std::uint32_t max_off = 0;
  for (std::uint32_t o : spec.theta_offsets)
    max_off = std::max(max_off, o);
  for (const CorrelationWeight& w : spec.weights)
    max_off = std::max(max_off, w.tuple.max_offset());
  if (2 * params.N + max_off > table.limit())
    throw resource_error("empirical_sum: factor table must cover 2N + max "
                         "offset = " +
                         std::to_string(2 * params.N + max_off));

  std::vector<WeightSpec> wspecs;
  for (const CorrelationWeight& w : spec.weights)
    wspecs.push_back(detail::to_weight_spec(w, params));

  constexpr std::uint64_t chunk = 1 << 16;
  std::uint64_t nchunks = (params.N + chunk - 1) / chunk;
  std::vector<double> partials(nchunks, 0.0);

  auto run_chunk = [&](std::uint64_t c) {
    std::uint64_t lo = params.N + 1 + c * chunk;
    std::uint64_t hi = std::min(params.N + c * chunk + chunk, 2 * params.N);
    KahanSum sum;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      double term = 1.0;
      for (std::uint32_t o : spec.theta_offsets) {
        term *= table.theta(n + o);
        if (term == 0.0)
          break;
      }
      if (term == 0.0)
        continue;
      for (const WeightSpec& ws : wspecs)
        term *= big_lambda(n, ws, table);
      sum.add(term);
    }
    partials[c] = sum.value();
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    for (std::uint64_t c = 0; c < nchunks; ++c)
      run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < nchunks; c = next++)
          run_chunk(c);
      });
    for (std::thread& t : pool)
      t.join();
  }

  KahanSum total;
  for (double p : partials)
    total.add(p);
  return total.value();
}

// Main term of the two-weight correlation:
//   C(l1+l2, l1) (log R)^{r+l1+l2} / (r+l1+l2)! * S(H1 u H2) * N,
// r = |H1 n H2|.
inline MainTerm main_term_prop1(const CorrelationSpec& spec,
                                const SieveParams& params,
                                std::uint64_t cutoff = 1'000'000) {
  if (spec.weights.size() != 2)
    throw domain_error("main_term_prop1: exactly two weights required");
  const CorrelationWeight& w1 = spec.weights[0];
  const CorrelationWeight& w2 = spec.weights[1];
  int r = static_cast<int>(
      OffsetTuple::intersection_size(w1.tuple, w2.tuple));
  int e = r + w1.l + w2.l;
  MainTerm out;
  OffsetTuple uni = OffsetTuple::merge(w1.tuple, w2.tuple);
  out.sing = singular_series(uni, cutoff);
  out.u = e;
  if (out.sing.value == 0.0) {
    out.admissible = false;
    return out;
  }
  out.value = binomial(w1.l + w2.l, w1.l) * std::pow(params.log_R(), e) /
              factorial(e) * out.sing.value * static_cast<double>(params.N);
  return out;
}

// One theta factor at h0 (not in either tuple), two weights:
// same shape with S(H u {h0}).
inline MainTerm main_term_prop2(const CorrelationSpec& spec,
                                const SieveParams& params,
                                std::uint64_t cutoff = 1'000'000) {
  if (spec.weights.size() != 2 || spec.theta_offsets.size() != 1)
    throw domain_error("main_term_prop2: one theta offset and two weights "
                       "required");
  std::uint32_t h0 = spec.theta_offsets[0];
  const CorrelationWeight& w1 = spec.weights[0];
  const CorrelationWeight& w2 = spec.weights[1];
  if (w1.tuple.contains(h0) || w2.tuple.contains(h0))
    throw domain_error(
        "main_term_prop2: theta offset h0 must not lie in the tuples; "
        "reduce via the prime-shift identity first");
  int r = static_cast<int>(
      OffsetTuple::intersection_size(w1.tuple, w2.tuple));
  int e = r + w1.l + w2.l;
  OffsetTuple uni = OffsetTuple::merge(
      OffsetTuple::merge(w1.tuple, w2.tuple),
      OffsetTuple(std::vector<std::uint32_t>{h0}));
  MainTerm out;
  out.sing = singular_series(uni, cutoff);
  out.u = e;
  if (out.sing.value == 0.0) {
    out.admissible = false;
    return out;
  }
  out.value = binomial(w1.l + w2.l, w1.l) * std::pow(params.log_R(), e) /
              factorial(e) * out.sing.value * static_cast<double>(params.N);
  return out;
}

// Four weights, the pairs taking disjoint unions:
//   C(l1+l2,l1) C(l3+l4,l3) N (log R)^{u+v} / (u! v!) * S(union),
// u = l1+l2+r1, v = l3+l4+r2.
inline MainTerm main_term_thm1(const CorrelationSpec& spec,
                               const SieveParams& params,
                               std::uint64_t cutoff = 1'000'000) {
  if (spec.weights.size() != 4)
    throw domain_error("main_term_thm1: exactly four weights required");
  const OffsetTuple& h1 = spec.weights[0].tuple;
  const OffsetTuple& h2 = spec.weights[1].tuple;
  const OffsetTuple& h3 = spec.weights[2].tuple;
  const OffsetTuple& h4 = spec.weights[3].tuple;
  OffsetTuple front = OffsetTuple::merge(h1, h2);
  OffsetTuple back = OffsetTuple::merge(h3, h4);
  if (OffsetTuple::intersection_size(front, back) != 0)
    throw domain_error("main_term_thm1: (H1 u H2) and (H3 u H4) must be "
                       "disjoint");
  int r1 = static_cast<int>(OffsetTuple::intersection_size(h1, h2));
  int r2 = static_cast<int>(OffsetTuple::intersection_size(h3, h4));
  MainTerm out;
  out.u = spec.weights[0].l + spec.weights[1].l + r1;
  out.v = spec.weights[2].l + spec.weights[3].l + r2;
  out.sing = singular_series(OffsetTuple::merge(front, back), cutoff);
  if (out.sing.value == 0.0) {
    out.admissible = false;
    return out;
  }
  out.value = binomial(spec.weights[0].l + spec.weights[1].l,
                       spec.weights[0].l) *
              binomial(spec.weights[2].l + spec.weights[3].l,
                       spec.weights[2].l) *
              static_cast<double>(params.N) *
              std::pow(params.log_R(), out.u + out.v) /
              (factorial(out.u) * factorial(out.v)) * out.sing.value;
  return out;
}

struct Eq1Check {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Pointwise inequality behind the four-weight reduction: with
// Omega = 4 log^2(3N) / log^4 R,
//   theta(n+h0) theta(n+h1) (sum_H Lambda_R(n,H,|H|+l))^2
//     <= Omega * Lambda_R(n,{h0,h1},2)^2 (sum_H Lambda_R(n,H\{h0,h1},|H|+l))^2.
inline Eq1Check eq1_bound_check(std::uint64_t n, std::uint32_t h0,
                                std::uint32_t h1,
                                const std::vector<OffsetTuple>& family,
                                const SieveParams& params,
                                const FactorTable& table, int l = 0) {
  Eq1Check out;
  double t0 = table.theta(n + h0);
  double t1 = table.theta(n + h1);
  double full = 0.0;
  double stripped = 0.0;
  for (const OffsetTuple& H : family) {
    int a = static_cast<int>(H.k()) + l;
    full += big_lambda(n, WeightSpec(H, a, params.R), table);
    stripped +=
        big_lambda(n, WeightSpec(H.without(h0).without(h1), a, params.R),
                   table);
  }
  double log3N = std::log(3.0 * static_cast<double>(params.N));
  double omega = 4.0 * log3N * log3N / std::pow(params.log_R(), 4);
  std::uint32_t plo = std::min(h0, h1);
  std::uint32_t phi = std::max(h0, h1);
  double pair = big_lambda(
      n, WeightSpec(OffsetTuple(std::vector<std::uint32_t>{plo, phi}), 2,
                    params.R),
      table);
  out.lhs = t0 * t1 * full * full;
  out.rhs = omega * pair * pair * stripped * stripped;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-300;
  return out;
}

enum class CorrelationMode { prop1, prop2, thm1 };

// Runs empirical/main-term ratios across a ladder of N values.
inline std::vector<CorrelationReport>
convergence_ladder(const CorrelationSpec& spec, CorrelationMode mode,
                   const std::vector<std::uint64_t>& N_values,
                   double theta_exponent, const FactorTable& table,
                   int workers = 1, std::uint64_t cutoff = 1'000'000) {
  std::vector<CorrelationReport> out;
  for (std::uint64_t N : N_values) {
    SieveParams params = SieveParams::make(N, theta_exponent);
    CorrelationReport rep;
    rep.N = N;
    rep.empirical = empirical_sum(spec, params, table, workers);
    MainTerm mt;
    switch (mode) {
    case CorrelationMode::prop1:
      mt = main_term_prop1(spec, params, cutoff);
      break;
    case CorrelationMode::prop2:
      mt = main_term_prop2(spec, params, cutoff);
      break;
    case CorrelationMode::thm1:
      mt = main_term_thm1(spec, params, cutoff);
      break;
    }
    rep.main_term = mt.value;
    rep.main_term_uncertainty = std::fabs(mt.value) * mt.sing.tail_bound;
    rep.ratio = mt.value != 0.0 ? rep.empirical / mt.value : 0.0;
    out.push_back(rep);
  }
  return out;
}

} // namespace tuplesieve

#endif
