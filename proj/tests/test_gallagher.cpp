#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include <tuplesieve/gallagher.hpp>

using namespace tuplesieve;

namespace {

// Brute-force oracle for small configs: plain nested enumeration, no
// memoization, no block partitioning.
double brute_sum(const SubintervalConfig& config, std::uint64_t cutoff) {
  std::vector<std::vector<std::vector<std::uint32_t>>> subsets;
  for (const SubintervalPart& part : config.parts) {
    std::vector<std::vector<std::uint32_t>> list;
    detail::Combination c(part.lo, part.hi, part.k);
    do {
      list.push_back(c.cur);
    } while (c.next());
    subsets.push_back(std::move(list));
  }
  std::vector<std::size_t> idx(subsets.size(), 0);
  double total = 0.0;
  while (true) {
    std::vector<std::uint32_t> uni;
    for (std::size_t i = 0; i < subsets.size(); ++i)
      uni.insert(uni.end(), subsets[i][idx[i]].begin(),
                 subsets[i][idx[i]].end());
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    total += singular_series(OffsetTuple(uni), cutoff).value;
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == subsets[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == idx.size())
      break;
  }
  return total;
}

} // namespace

TEST_CASE("k=1 parts give ratio exactly 1") {
  SubintervalConfig config;
  config.h = 100;
  config.parts = {{10, 60, 1}};
  GallagherReport r = exact_average(config, 1000);
  CHECK(r.exact_sum == 51.0); // each singleton contributes exactly 1
  CHECK(r.ratio == 1.0);
  CHECK(r.tuple_count == 51);
}

TEST_CASE("tuple count and validation") {
  SubintervalConfig config;
  config.h = 100;
  config.parts = {{0, 50, 2}, {60, 100, 1}};
  CHECK(config.tuple_count() == binomial_count(51, 2) * 41);

  SubintervalConfig bad;
  bad.h = 10;
  bad.parts = {{5, 5, 1}};
  CHECK_THROWS_AS(exact_average(bad, 1000), domain_error);

  SubintervalConfig big;
  big.h = 100;
  big.parts = {{0, 100, 4}};
  CHECK_THROWS_AS(exact_average(big, 1000, 1000), resource_error);
}

TEST_CASE("matches brute-force enumeration") {
  SubintervalConfig config;
  config.h = 40;
  config.parts = {{0, 20, 2}, {30, 40, 1}};
  GallagherReport r = exact_average(config, 2000);
  double expect = brute_sum(config, 2000);
  CHECK(r.exact_sum == Catch::Approx(expect).epsilon(1e-12));
  CHECK(r.tuple_count == binomial_count(21, 2) * 11);
}

TEST_CASE("worker count does not change the result") {
  SubintervalConfig config;
  config.h = 60;
  config.parts = {{0, 60, 2}};
  GallagherReport one = exact_average(config, 5000, 10'000'000, 1);
  GallagherReport four = exact_average(config, 5000, 10'000'000, 4);
  CHECK(one.exact_sum == four.exact_sum);
  CHECK(one.error_bound == four.error_bound);
}

TEST_CASE("single-interval pair average approaches 1") {
  std::vector<TrendPart> tmpl{{0.0, 1.0, 2}};
  auto reports = ratio_trend(tmpl, {50, 100, 200}, 100'000);
  REQUIRE(reports.size() == 3);
  for (const GallagherReport& r : reports) {
    CHECK(r.exact_sum > 0.0);
    CHECK(r.ratio > 0.5);
    CHECK(r.ratio < 1.5);
  }
  CHECK(std::fabs(reports[2].ratio - 1.0) < std::fabs(reports[0].ratio - 1.0));
}

TEST_CASE("trend with k=1 template is exactly 1 everywhere") {
  std::vector<TrendPart> tmpl{{0.25, 0.75, 1}};
  auto reports = ratio_trend(tmpl, {40, 80, 160}, 1000);
  for (const GallagherReport& r : reports)
    CHECK(r.ratio == 1.0);
}

TEST_CASE("empty h list gives empty reports") {
  std::vector<TrendPart> tmpl{{0.0, 1.0, 2}};
  CHECK(ratio_trend(tmpl, {}, 1000).empty());
}

TEST_CASE("report carries a tail certificate") {
  SubintervalConfig config;
  config.h = 50;
  config.parts = {{0, 50, 2}};
  GallagherReport r = exact_average(config, 10'000);
  CHECK(r.error_bound > 0.0);
  CHECK(r.error_bound < r.exact_sum); // certificate is small, not vacuous
}
