// Acceptance harness: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <tuplesieve/arith.hpp>
#include <tuplesieve/correlations.hpp>
#include <tuplesieve/f2.hpp>
#include <tuplesieve/gallagher.hpp>
#include <tuplesieve/report_json.hpp>
#include <tuplesieve/singular.hpp>
#include <tuplesieve/weights.hpp>

namespace ts = tuplesieve;

namespace {

int failures = 0;

int workers() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 4 : static_cast<int>(hc);
}

void report(int index, const std::string& name, bool ok, double seconds,
            const std::string& detail) {
  std::printf("C%-2d %-22s %s  (%.2f s)  %s\n", index, name.c_str(),
              ok ? "PASS" : "FAIL", seconds, detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

template <typename Fn>
void criterion(int index, const std::string& name, Fn fn) {
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  report(index, name, ok, seconds, detail);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

ts::OffsetTuple tup(std::initializer_list<std::uint32_t> offs) {
  return ts::OffsetTuple(std::vector<std::uint32_t>(offs));
}

// --- pinned regression fixtures (first verified run) ---------------------

// C7: single-interval k = 2 average ratios at h = 50, 100, 200, 400.
constexpr double kGallagherRatioFixture[4] = {
    0.8943583696,
    0.9401651085,
    0.9664422259,
    0.9814758671,
};
// C7: two-part (k = 2 and 1) ratio at h = 200.
constexpr double kGallagherTwoPartFixture = 0.9262914027;
// Fixtures recorded to 10 significant digits; runs are deterministic, so
// the band only absorbs the recording precision.
constexpr double kGallagherFixtureTol = 1e-8;

// C10: first positivity witness on the deterministic schedule.
constexpr long long kWitnessK = 562'341'325;
constexpr long long kWitnessL = 11'857;

bool fixture_matches(double observed, double fixture, double tol,
                     std::string& detail) {
  if (std::isnan(fixture)) {
    detail += " [fixture unpinned: observed " + fmt(observed) + "]";
    return false;
  }
  return std::fabs(observed - fixture) <=
         tol * std::max(1.0, std::fabs(fixture));
}

// --- criteria ------------------------------------------------------------

bool c1_delta_prime(std::string& detail) {
  ts::BoundResult r = ts::delta_prime(0.172);
  detail = "delta' = " + fmt(r.delta_prime) + ", bound = " + fmt(r.bound);
  return r.valid && r.delta_prime >= 0.007790 && r.delta_prime <= 0.007798 &&
         r.bound < 0.17066;
}

bool c2_boundary_zero(std::string& detail) {
  double boundary = (std::sqrt(2.0) - 1.0) * (std::sqrt(2.0) - 1.0);
  ts::BoundResult r = ts::delta_prime(boundary);
  detail = "delta'((sqrt2-1)^2) = " + fmt(r.delta_prime);
  return std::fabs(r.delta_prime) <= 1e-12;
}

bool c3_optimizer(std::string& detail) {
  ts::BoundResult r = ts::optimize_lambda(0.1716, 0.20, 1e-9);
  detail = "lambda = " + fmt(r.lambda) + ", bound = " + fmt(r.bound);
  return r.valid && std::fabs(r.bound - 0.1707) <= 5e-4;
}

bool c4_weight_oracle(std::string& detail) {
  const ts::FactorTable table = ts::build_factor_table(11'000);
  const std::vector<ts::OffsetTuple> tuples = {
      tup({0}), tup({0, 2}), tup({1, 3}), tup({0, 2, 6}), tup({0, 4, 6})};
  const std::uint64_t Rs[2] = {100, 1000};
  constexpr int max_a = 5;
  std::uint64_t checked = 0;
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    for (const ts::OffsetTuple& t : tuples) {
      std::uint64_t P = 1;
      for (std::uint32_t h : t.offsets)
        P *= n + h;
      for (std::uint64_t R : Rs) {
        // One pass over d <= R accumulates the naive weight for every a.
        double naive[max_a + 1] = {0};
        for (std::uint64_t d = 1; d <= R; ++d) {
          if (P % d != 0)
            continue;
          int mu = ts::mobius(d, table);
          if (mu == 0)
            continue;
          double lg = std::log(static_cast<double>(R) /
                               static_cast<double>(d));
          double pw = 1.0;
          for (int a = 0; a <= max_a; ++a) {
            naive[a] += mu * pw;
            pw *= lg;
          }
        }
        for (int a = 0; a <= max_a; ++a) {
          double expect = naive[a] / ts::factorial(a);
          double got = ts::big_lambda(n, ts::WeightSpec(t, a, R), table);
          double scale = std::max({std::fabs(expect), std::fabs(got), 1.0});
          ++checked;
          if (std::fabs(got - expect) > 1e-9 * scale) {
            detail = "mismatch at n=" + std::to_string(n) +
                     " R=" + std::to_string(R) + " a=" + std::to_string(a) +
                     ": " + fmt(got) + " vs " + fmt(expect);
            return false;
          }
        }
      }
    }
  }
  detail = std::to_string(checked) + " (n, tuple, R, a) cases matched";
  return true;
}

bool c5_prime_shift(std::string& detail) {
  const ts::FactorTable table = ts::build_factor_table(200'010);
  const ts::OffsetTuple tuple = tup({0, 2, 6});
  constexpr std::uint32_t h0 = 6;
  constexpr std::uint64_t R = 1'000;
  std::mt19937 rng(12345);
  std::uniform_int_distribution<std::uint64_t> dist(100'001, 200'000);
  int hits = 0;
  while (hits < 200) {
    std::uint64_t n = dist(rng);
    if (!table.is_prime(n + h0))
      continue;
    ++hits;
    if (!ts::prime_shift_identity_check(n, tuple, h0, 4, R, table)) {
      detail = "identity failed at n = " + std::to_string(n);
      return false;
    }
  }
  detail = "200 prime-shift cases verified";
  return true;
}

bool c6_singular(std::string& detail) {
  ts::SingularValue s7 = ts::singular_series(tup({0, 2}), 10'000'000);
  ts::SingularValue s8 = ts::singular_series(tup({0, 2}), 100'000'000);
  double drift = std::fabs(s8.value - s7.value);
  detail = "S({0,2}) = " + fmt(s7.value) + ", drift 1e7->1e8 = " + fmt(drift) +
           ", tail certificate = " + fmt(s7.tail_bound * s7.value);
  if (drift > 1e-6)
    return false;
  if (drift > s7.tail_bound * s7.value)
    return false;
  ts::SingularValue bad = ts::singular_series(tup({0, 1}), 1'000);
  if (bad.value != 0.0) {
    detail += "; S({0,1}) = " + fmt(bad.value) + " (expected exact 0)";
    return false;
  }
  return true;
}

bool c7_gallagher(std::string& detail) {
  const std::uint32_t hs[4] = {50, 100, 200, 400};
  double ratios[4];
  for (int i = 0; i < 4; ++i) {
    ts::SubintervalConfig config;
    config.h = hs[i];
    config.parts.push_back({0, hs[i] - 1, 2});
    ts::GallagherReport r =
        ts::exact_average(config, 1'000'000, 10'000'000, workers());
    ratios[i] = r.ratio;
  }
  detail = "ratios = " + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " +
           fmt(ratios[2]) + ", " + fmt(ratios[3]);
  if (!(std::fabs(ratios[3] - 1.0) < std::fabs(ratios[0] - 1.0)))
    return false;
  bool pinned_ok = true;
  for (int i = 0; i < 4; ++i)
    pinned_ok = fixture_matches(ratios[i], kGallagherRatioFixture[i],
                                kGallagherFixtureTol, detail) &&
                pinned_ok;
  ts::SubintervalConfig two;
  two.h = 200;
  two.parts.push_back({0, 99, 2});
  two.parts.push_back({100, 199, 1});
  ts::GallagherReport r2 =
      ts::exact_average(two, 1'000'000, 10'000'000, workers());
  detail += "; two-part ratio = " + fmt(r2.ratio);
  pinned_ok = fixture_matches(r2.ratio, kGallagherTwoPartFixture,
                              kGallagherFixtureTol, detail) &&
              pinned_ok;
  return pinned_ok;
}

bool ladder_ok(const std::vector<ts::CorrelationReport>& reps,
               std::string& detail, const char* label) {
  detail += std::string(label) + " ratios =";
  for (const ts::CorrelationReport& r : reps)
    detail += " " + fmt(r.ratio);
  detail += ";";
  for (std::size_t i = 1; i < reps.size(); ++i)
    if (std::fabs(reps[i].ratio - 1.0) >
        std::fabs(reps[i - 1].ratio - 1.0) + 1e-12)
      return false;
  return true;
}

bool c8_correlations(std::string& detail) {
  const std::vector<std::uint64_t> Ns = {100'000, 1'000'000, 10'000'000};
  const ts::FactorTable table = ts::build_factor_table(20'000'010);
  const int w = workers();

  ts::CorrelationSpec prop1;
  prop1.weights.push_back({tup({0, 2}), 0});
  prop1.weights.push_back({tup({0, 2}), 0});
  auto reps1 = ts::convergence_ladder(prop1, ts::CorrelationMode::prop1, Ns,
                                      0.24, table, w);
  if (!(reps1[1].ratio >= 0.5 && reps1[1].ratio <= 2.0)) {
    detail = "prop1 ratio at N=1e6 out of [0.5, 2]: " + fmt(reps1[1].ratio);
    return false;
  }
  if (!ladder_ok(reps1, detail, "prop1"))
    return false;

  ts::CorrelationSpec prop2;
  prop2.theta_offsets.push_back(6);
  prop2.weights.push_back({tup({0, 2}), 0});
  prop2.weights.push_back({tup({0, 2}), 0});
  auto reps2 = ts::convergence_ladder(prop2, ts::CorrelationMode::prop2, Ns,
                                      0.24, table, w);
  if (!ladder_ok(reps2, detail, " prop2"))
    return false;

  ts::CorrelationSpec thm1;
  thm1.weights.push_back({tup({0}), 0});
  thm1.weights.push_back({tup({0}), 0});
  thm1.weights.push_back({tup({2}), 0});
  thm1.weights.push_back({tup({2}), 0});
  auto reps3 = ts::convergence_ladder(thm1, ts::CorrelationMode::thm1, Ns,
                                      0.24, table, w);
  if (!ladder_ok(reps3, detail, " thm1"))
    return false;
  return true;
}

bool c9_eq1(std::string& detail) {
  const ts::FactorTable table = ts::build_factor_table(200'010);
  ts::SieveParams params = ts::SieveParams::make(100'000, 0.24);
  const std::vector<ts::OffsetTuple> family = {
      tup({0, 2, 6}), tup({0, 4, 6}), tup({0, 2, 8})};
  for (std::uint64_t n = 100'001; n <= 200'000; ++n) {
    ts::Eq1Check c = ts::eq1_bound_check(n, 0, 2, family, params, table);
    if (!c.holds) {
      detail = "violated at n = " + std::to_string(n) + ": lhs " +
               fmt(c.lhs) + " > rhs " + fmt(c.rhs);
      return false;
    }
  }
  detail = "100000 pointwise checks hold";
  return true;
}

bool c10_witness(std::string& detail) {
  ts::SearchResult one = ts::search_positive(0.172, 0.0070, 10'000,
                                             2'000'000'000, 1);
  ts::SearchResult eight = ts::search_positive(0.172, 0.0070, 10'000,
                                               2'000'000'000, 8);
  std::string rep1 = ts::json::witness_report(one);
  std::string rep8 = ts::json::witness_report(eight);
  if (rep1 != rep8) {
    detail = "worker counts disagree: " + rep1 + " vs " + rep8;
    return false;
  }
  if (!one.witness) {
    detail = "no witness found: " + rep1;
    return false;
  }
  detail = "witness k = " + std::to_string(one.witness->k) +
           ", l = " + std::to_string(one.witness->l) +
           ", log magnitude = " + fmt(one.witness->log_magnitude);
  if (one.futile_warning) {
    detail += " [unexpected futile warning]";
    return false;
  }
  if (kWitnessK < 0) {
    detail += " [fixture unpinned]";
    return false;
  }
  return one.witness->k == kWitnessK && one.witness->l == kWitnessL;
}

} // namespace

int main() {
  criterion(1, "delta_prime(0.172)", c1_delta_prime);
  criterion(2, "boundary zero", c2_boundary_zero);
  criterion(3, "optimizer", c3_optimizer);
  criterion(4, "weight oracle", c4_weight_oracle);
  criterion(5, "prime-shift identity", c5_prime_shift);
  criterion(6, "singular series", c6_singular);
  criterion(7, "gallagher average", c7_gallagher);
  criterion(8, "correlation ladders", c8_correlations);
  criterion(9, "eq1 pointwise bound", c9_eq1);
  criterion(10, "positivity witness", c10_witness);
  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
