#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include <tuplesieve/arith.hpp>

using namespace tuplesieve;

namespace {

// Trial-division oracle, independent of the sieve.
std::uint64_t smallest_factor_by_trial(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return d;
  return n;
}

} // namespace

TEST_CASE("factor table smallest cases") {
  FactorTable small(10);
  CHECK(small.spf(4) == 2);
  CHECK(small.spf(9) == 3);
  CHECK(small.spf(7) == 7);

  FactorTable tiny(2);
  CHECK(tiny.spf(2) == 2);
}

TEST_CASE("factor table agrees with trial division") {
  FactorTable table(10'000'000);
  CHECK(table.spf(9'999'991) == 9'999'991);
  CHECK(smallest_factor_by_trial(9'999'991) == 9'999'991);
  for (std::uint64_t n : {2ull, 97ull, 1024ull, 999'983ull, 4'989'911ull,
                          9'999'990ull})
    CHECK(table.spf(n) == smallest_factor_by_trial(n));
}

TEST_CASE("factor table cap and range errors") {
  CHECK_THROWS_AS(FactorTable(1), domain_error);
  FactorTable table(100);
  CHECK_THROWS_AS(table.factorize(101), domain_error);
  CHECK_THROWS_AS(table.factorize(1), domain_error);
  CHECK_THROWS_AS(table.theta(0), domain_error);
}

TEST_CASE("factorize") {
  FactorTable table(1'000'000);
  auto f12 = table.factorize(12);
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == std::pair<std::uint64_t, int>{2, 2});
  CHECK(f12.factors[1] == std::pair<std::uint64_t, int>{3, 1});

  auto f97 = table.factorize(97);
  REQUIRE(f97.factors.size() == 1);
  CHECK(f97.factors[0] == std::pair<std::uint64_t, int>{97, 1});

  auto f = table.factorize(720720);
  std::vector<std::pair<std::uint64_t, int>> expect{
      {2, 4}, {3, 2}, {5, 1}, {7, 1}, {11, 1}, {13, 1}};
  CHECK(f.factors == expect);
}

TEST_CASE("factorization reconstructs every n") {
  FactorTable table(1'000'000);
  for (std::uint64_t n = 2; n <= 1'000'000; ++n) {
    std::uint64_t prod = 1;
    std::uint64_t prev_prime = 0;
    for (auto [p, e] : table.factorize(n).factors) {
      REQUIRE(p > prev_prime);
      REQUIRE(e >= 1);
      prev_prime = p;
      for (int i = 0; i < e; ++i)
        prod *= p;
    }
    REQUIRE(prod == n);
  }
}

TEST_CASE("mobius") {
  FactorTable table(1'000'000);
  CHECK(table.mobius(1) == 1);
  CHECK(table.mobius(6) == 1);
  CHECK(table.mobius(30) == -1);
  CHECK(table.mobius(12) == 0);

  // Squarefree density tends to 6/pi^2.
  std::uint64_t squarefree = 0;
  for (std::uint64_t n = 1; n <= 1'000'000; ++n)
    if (table.mobius(n) != 0)
      ++squarefree;
  double density = double(squarefree) / 1e6;
  double expected = 6.0 / (M_PI * M_PI);
  CHECK(std::fabs(density - expected) / expected < 0.01);
}

TEST_CASE("theta") {
  FactorTable table(20'000);
  CHECK(table.theta(7) == Catch::Approx(std::log(7.0)));
  CHECK(table.theta(8) == 0.0);
  CHECK(table.theta(10007) == Catch::Approx(std::log(10007.0)));
  CHECK(smallest_factor_by_trial(10007) == 10007);

  // theta positive exactly where the factorization is one first power.
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    bool prime_by_factorization =
        table.factorize(n).factors.size() == 1 &&
        table.factorize(n).factors[0].second == 1;
    CHECK((table.theta(n) > 0.0) == prime_by_factorization);
  }
}

TEST_CASE("primes_up_to matches the table") {
  FactorTable table(10'000);
  auto primes = primes_up_to(10'000);
  std::size_t count = 0;
  for (std::uint64_t n = 2; n <= 10'000; ++n)
    if (table.is_prime(n))
      ++count;
  CHECK(primes->size() == count);
  CHECK(primes->front() == 2);
  CHECK(primes->back() == 9973);
}
