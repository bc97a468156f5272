#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "datlc/logspace.hpp"
#include "datlc/splitmix64.hpp"

using namespace datlc;

TEST_CASE("logsumexp of normalized rows is zero") {
  std::vector<double> halves{std::log(0.5), std::log(0.5)};
  CHECK(logsumexp(halves) == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> row{std::log(0.6), std::log(0.3), std::log(0.1)};
  CHECK(std::fabs(logsumexp(row)) < 1e-12);
}

TEST_CASE("probability zero is absorbing") {
  std::vector<double> pair{kNegInf, std::log(0.25)};
  CHECK(logsumexp(pair) == std::log(0.25));

  CHECK(logsumexp(std::vector<double>{}) == kNegInf);
  CHECK(logsumexp(std::vector<double>{kNegInf, kNegInf}) == kNegInf);

  CHECK(log_add(kNegInf, std::log(0.5)) == std::log(0.5));
  CHECK(log_add(kNegInf, kNegInf) == kNegInf);
}

TEST_CASE("logsumexp dominates its max and matches linear sums") {
  SplitMix64 rng(11);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> values;
    double linear = 0.0;
    double max = kNegInf;
    int n = 1 + static_cast<int>(rng.next() % 8);
    for (int i = 0; i < n; ++i) {
      double p = rng.next_unit();
      values.push_back(std::log(p));
      linear += p;
      max = std::max(max, values.back());
    }
    double lse = logsumexp(values);
    CHECK(lse >= max);
    CHECK(lse == doctest::Approx(std::log(linear)).epsilon(1e-12));
  }
}
