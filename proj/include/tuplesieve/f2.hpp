#ifndef TUPLESIEVE_F2_HPP
#define TUPLESIEVE_F2_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include <tuplesieve/common.hpp>

namespace tuplesieve {

// Parameters of the three-interval positivity computation.
struct F2Params {
  double lambda = 0.172;
  double delta = 0.0;
  long long k = 1;
  long long l = 0;
  double theta = 0.25;

  double x() const { return theta / lambda; }
  double z() const { return 1.0 / std::sqrt(x()); }
  long long r0() const {
    return static_cast<long long>(static_cast<double>(k) / (z() + 1.0));
  }

  void validate() const {
    if (lambda <= 0.0)
      throw domain_error("F2Params: lambda must be positive");
    if (delta < 0.0 || delta >= 0.5)
      throw domain_error("F2Params: delta must lie in [0, 1/2)");
    if (k < 1 || l < 0)
      throw domain_error("F2Params: need k >= 1, l >= 0");
    if (theta <= 0.0 || theta > 0.25)
      throw domain_error("F2Params: theta must lie in (0, 1/4]");
  }
};

// Falling product (k-r)(k-r-1)...(k-r-j+1); empty product is 1.  When
// j exceeds k-r the product passes through zero, which is exactly the
// vanishing the combinatorics require.
inline double gamma_fn(int j, long long k, long long r) {
  double out = 1.0;
  for (int t = 0; t < j; ++t)
    out *= static_cast<double>(k - r - t);
  return out;
}

// Rising product (r+2l+1)...(r+2l+j1+j2); empty product is 1.
inline double beta_fn(int j1, int j2, long long l, long long r) {
  double out = 1.0;
  for (int t = 1; t <= j1 + j2; ++t)
    out *= static_cast<double>(r + 2 * l + t);
  return out;
}

// C(2l+j1+j2, l+j1) / C(2l, l) = prod(2l+t) / (prod(l+t1) prod(l+t2)),
// exact in small factors for any l.
inline double a_fn(int j1, int j2, long long l) {
  double out = 1.0;
  for (int t = 1; t <= j1 + j2; ++t)
    out *= static_cast<double>(2 * l + t);
  for (int t = 1; t <= j1; ++t)
    out /= static_cast<double>(l + t);
  for (int t = 1; t <= j2; ++t)
    out /= static_cast<double>(l + t);
  return out;
}

inline double mu_fn(int j1, int j2, long long k, long long l, long long r) {
  return gamma_fn(j1, k, r) * gamma_fn(j2, k, r) * a_fn(j1, j2, l) /
         beta_fn(j1, j2, l, r) * binomial(3, j1) * binomial(3, j2);
}

// log of f(r) = C(k,r)^2 x^r / ((r+1)...(r+2l)), via log-gamma: C(k,r)^2
// overflows doubles near k ~ 520, and positivity is a sign question.
inline double f_weight_log(long long r, long long k, long long l, double x) {
  if (r < 0 || r > k)
    throw domain_error("f_weight_log: r must lie in [0, k]");
  if (x <= 0.0)
    throw domain_error("f_weight_log: x must be positive");
  double lgk = std::lgamma(static_cast<double>(k) + 1.0);
  double lgr = std::lgamma(static_cast<double>(r) + 1.0);
  double lgkr = std::lgamma(static_cast<double>(k - r) + 1.0);
  double denom = std::lgamma(static_cast<double>(r + 2 * l) + 1.0) - lgr;
  return 2.0 * (lgk - lgr - lgkr) + static_cast<double>(r) * std::log(x) -
         denom;
}

// The sign-controlling factor
//   P(r,d) = 2 a(1,0,l) k x / (r+2l+1) + 1 - 2x/Theta - (6 d^3/(Theta x^2)) S
// where S is either the exact double sum over x^{j1+j2} mu(j1,j2,k,l,r) or
// its closed upper bound (2x(k-r)/r + 1)^6.  The bound form needs r >= 1.
inline double p_term(long long r, const F2Params& params, bool use_bound) {
  params.validate();
  double x = params.x();
  double S;
  if (use_bound) {
    if (r < 1)
      throw domain_error("p_term: bound form divides by r; needs r >= 1");
    double base = 2.0 * x * static_cast<double>(params.k - r) /
                      static_cast<double>(r) +
                  1.0;
    S = std::pow(base, 6);
  } else {
    S = 0.0;
    for (int j1 = 0; j1 <= 3; ++j1)
      for (int j2 = 0; j2 <= 3; ++j2)
        S += std::pow(x, j1 + j2) * mu_fn(j1, j2, params.k, params.l, r);
  }
  return 2.0 * a_fn(1, 0, params.l) * static_cast<double>(params.k) * x /
             static_cast<double>(r + 2 * params.l + 1) +
         1.0 - 2.0 * x / params.theta -
         6.0 * params.delta * params.delta * params.delta /
             (params.theta * x * x) * S;
}

struct PositivityEntry {
  long long r;
  double log_f;
  double p;
};

struct PositivityReport {
  F2Params params;
  int total_sign = 0;          // sign of sum f(r) P(r, delta)
  double log_magnitude = 0.0;  // log |sum| (log-space; the sum itself can
                               // overflow doubles for large k)
  double shifted_total = 0.0;  // sum of exp(log f - max log f) * P
  long long r0 = 0;
  long long r_lo = 0;          // summation window (full range for small k)
  long long r_hi = 0;
  std::vector<PositivityEntry> breakdown;
};

namespace detail {

// Window where terms can matter: beyond it log f has dropped more than
// `drop` nats below its peak, and |P| grows only polynomially in k while
// f decays at least geometrically past the peak, so truncated terms are
// below double rounding of the total.
inline std::pair<long long, long long>
positivity_window(const F2Params& params, double drop) {
  long long k = params.k;
  double x = params.x();
  long long r0 = std::max<long long>(1, params.r0());
  auto logf = [&](long long r) {
    return f_weight_log(r, k, params.l, x);
  };
  double peak = logf(r0);
  // Quadratic estimate of the half-width from the discrete curvature.  The
  // stencil widens with r0: at step 1 the second difference of lgamma-scale
  // values (~k log k nats) cancels below one ulp for large k.
  long long step = std::max<long long>(1, r0 / 1000);
  step = std::min(step, std::min(r0, k - r0));
  step = std::max<long long>(step, 1);
  double curv = std::fabs(logf(r0 + step) + logf(r0 - step) - 2.0 * peak) /
                (static_cast<double>(step) * static_cast<double>(step));
  curv = std::max(curv, 1e-300);
  double hw_d = 3.0 * std::sqrt(2.0 * drop / curv) + 8.0;
  long long hw = hw_d >= static_cast<double>(k)
                     ? k
                     : static_cast<long long>(hw_d);
  long long lo = std::max<long long>(0, r0 - hw);
  long long hi = std::min<long long>(k, r0 + hw);
  while (lo > 0 && logf(lo) > peak - drop)
    lo = std::max<long long>(0, lo - hw / 4 - 1);
  while (hi < k && logf(hi) > peak - drop)
    hi = std::min<long long>(k, hi + hw / 4 + 1);
  return {lo, hi};
}

struct PositivitySumOnly {
  int sign = 0;
  double shifted_total = 0.0;
  double max_log_f = 0.0;
};

inline PositivitySumOnly positivity_sum_core(const F2Params& params,
                                             bool use_bound, long long lo,
                                             long long hi,
                                             std::vector<PositivityEntry>* keep) {
  double x = params.x();
  double max_log_f = -std::numeric_limits<double>::infinity();
  for (long long r = lo; r <= hi; ++r)
    max_log_f = std::max(max_log_f, f_weight_log(r, params.k, params.l, x));
  KahanSum total;
  for (long long r = lo; r <= hi; ++r) {
    double lf = f_weight_log(r, params.k, params.l, x);
    // The bound form is undefined at r = 0; that term uses the exact S.
    double p = p_term(r, params, use_bound && r >= 1);
    total.add(std::exp(lf - max_log_f) * p);
    if (keep)
      keep->push_back({r, lf, p});
  }
  PositivitySumOnly out;
  out.shifted_total = total.value();
  out.max_log_f = max_log_f;
  out.sign = (out.shifted_total > 0.0) - (out.shifted_total < 0.0);
  return out;
}

} // namespace detail

// Signed value of sum_{r} f(r) P(r, delta), computed in shifted log space:
// all log f(r) are shifted by their maximum, so magnitudes stay finite for
// k up to 1e6 and far beyond.  For very large k the summation window is
// restricted to the terms that can affect the double result; the breakdown
// always recombines exactly to shifted_total.
inline PositivityReport positivity_sum(const F2Params& params,
                                       bool use_bound) {
  params.validate();
  constexpr long long full_range_max = 2'000'000;
  long long lo = 0;
  long long hi = params.k;
  if (params.k > full_range_max) {
    auto [wlo, whi] = detail::positivity_window(params, 120.0);
    lo = wlo;
    hi = whi;
  }
  PositivityReport report;
  report.params = params;
  report.r0 = params.r0();
  report.r_lo = lo;
  report.r_hi = hi;
  auto core =
      detail::positivity_sum_core(params, use_bound, lo, hi,
                                  &report.breakdown);
  report.total_sign = core.sign;
  report.shifted_total = core.shifted_total;
  report.log_magnitude =
      core.sign == 0 ? -std::numeric_limits<double>::infinity()
                     : core.max_log_f + std::log(std::fabs(core.shifted_total));
  return report;
}

struct BoundResult {
  double lambda = 0.0;
  double delta_prime = 0.0; // NaN when the radicand is negative
  double bound = 0.0;       // lambda * (1 - delta_prime) when valid
  bool valid = false;
};

// Closed-form trimming fraction: with z = 2 sqrt(lambda),
//   delta' = cbrt( ((z+2)^2 - 8) / (24 (z+2)^6) ).
// The radicand (z+2)^2 - 8 vanishes at lambda = (sqrt(2)-1)^2; evaluating
// it as 4 (s - (sqrt2-1)) (s + sqrt2 + 1) with s = sqrt(lambda) avoids the
// catastrophic cancellation of the direct form, so the boundary gives an
// exact zero.
inline BoundResult delta_prime(double lambda) {
  if (lambda <= 0.0)
    throw domain_error("delta_prime: lambda must be positive");
  BoundResult out;
  out.lambda = lambda;
  double s = std::sqrt(lambda);
  double z = 2.0 * s;
  double radicand = 4.0 * (s - (std::sqrt(2.0) - 1.0)) * (s + std::sqrt(2.0) + 1.0);
  if (radicand < 0.0) {
    out.delta_prime = std::numeric_limits<double>::quiet_NaN();
    out.valid = false;
    out.bound = lambda;
    return out;
  }
  double zp2 = z + 2.0;
  out.delta_prime = std::cbrt(radicand / (24.0 * std::pow(zp2, 6)));
  out.valid = out.delta_prime < 0.5;
  out.bound = lambda * (1.0 - out.delta_prime);
  return out;
}

// Minimizes lambda (1 - delta'(lambda)) over the valid part of [lo, hi]:
// coarse grid to bracket, then golden-section refinement.
inline BoundResult optimize_lambda(double lo, double hi,
                                   double tolerance = 1e-9) {
  if (!(lo <= hi) || tolerance <= 0.0)
    throw domain_error("optimize_lambda: need lo <= hi and tolerance > 0");
  auto objective = [](double lam) {
    BoundResult r = delta_prime(lam);
    return r.valid ? r.bound : std::numeric_limits<double>::infinity();
  };
  if (lo == hi) {
    BoundResult r = delta_prime(lo);
    if (!r.valid)
      throw domain_error("optimize_lambda: no valid lambda in interval");
    return r;
  }
  const double step = 1e-3;
  int n = static_cast<int>((hi - lo) / step) + 2;
  double best = std::numeric_limits<double>::infinity();
  double best_lam = lo;
  for (int i = 0; i <= n; ++i) {
    double lam = std::min(lo + i * step, hi);
    double v = objective(lam);
    if (v < best) {
      best = v;
      best_lam = lam;
    }
  }
  if (!std::isfinite(best))
    throw domain_error("optimize_lambda: no valid lambda in interval");
  double a = std::max(lo, best_lam - step);
  double b = std::min(hi, best_lam + step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(d);
    }
  }
  return delta_prime((a + b) / 2.0);
}

struct PositivityWitness {
  long long k = 0;
  long long l = 0;
  double theta = 0.0;
  double shifted_total = 0.0;
  double log_magnitude = 0.0;
  bool futile_warning = false; // delta >= delta'(lambda): theorem predicts
                               // no witness, scan performed anyway
};

struct SearchResult {
  std::optional<PositivityWitness> witness;
  long long evaluated = 0;
  bool futile_warning = false;
};

// Scans a deterministic (k, l) schedule for a concrete positive sum using
// the bound-form P: k on a quarter-decade geometric ladder, l in
// {sqrt(k)/4, sqrt(k)/2, sqrt(k)} (the proof wants l = o(k) but large).
// Fan-out across workers only changes who evaluates what; the reported
// witness is always the first positive entry in schedule order.
inline SearchResult search_positive(double lambda, double delta,
                                    long long k_min = 10'000,
                                    long long k_max = 2'000'000'000,
                                    int workers = 1) {
  if (lambda <= 0.0 || delta < 0.0 || delta >= 0.5)
    throw domain_error("search_positive: need lambda > 0, delta in [0, 1/2)");
  SearchResult result;
  BoundResult dp = delta_prime(lambda);
  result.futile_warning = !dp.valid || !(delta < dp.delta_prime);

  struct Candidate {
    long long k;
    long long l;
  };
  std::vector<Candidate> schedule;
  for (double e = std::log10(static_cast<double>(std::max<long long>(2, k_min)));
       ; e += 0.25) {
    long long k = static_cast<long long>(std::llround(std::pow(10.0, e)));
    if (k > k_max)
      break;
    double sq = std::sqrt(static_cast<double>(k));
    for (double frac : {0.25, 0.5, 1.0}) {
      long long l = std::max<long long>(2, std::llround(frac * sq));
      schedule.push_back({k, l});
    }
  }

  std::vector<int> signs(schedule.size(), 0);
  std::vector<double> totals(schedule.size(), 0.0);
  std::vector<double> logmags(schedule.size(), 0.0);
  auto eval = [&](std::size_t i) {
    F2Params p;
    p.lambda = lambda;
    p.delta = delta;
    p.k = schedule[i].k;
    p.l = schedule[i].l;
    p.theta = 0.25 * (1.0 - 1.0 / static_cast<double>(p.l));
    long long lo = 0;
    long long hi = p.k;
    if (p.k > 2'000'000) {
      auto [wlo, whi] = detail::positivity_window(p, 120.0);
      lo = wlo;
      hi = whi;
    }
    auto core = detail::positivity_sum_core(p, true, lo, hi, nullptr);
    signs[i] = core.sign;
    totals[i] = core.shifted_total;
    logmags[i] = core.sign == 0
                     ? 0.0
                     : core.max_log_f + std::log(std::fabs(core.shifted_total));
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < schedule.size(); ++i)
      eval(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < schedule.size(); i = next++)
          eval(i);
      });
    for (std::thread& t : pool)
      t.join();
  }

  result.evaluated = static_cast<long long>(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (signs[i] > 0) {
      PositivityWitness w;
      w.k = schedule[i].k;
      w.l = schedule[i].l;
      w.theta = 0.25 * (1.0 - 1.0 / static_cast<double>(schedule[i].l));
      w.shifted_total = totals[i];
      w.log_magnitude = logmags[i];
      w.futile_warning = result.futile_warning;
      result.witness = w;
      break;
    }
  }
  return result;
}

} // namespace tuplesieve

#endif
