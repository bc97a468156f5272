#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "datlc/lattice.hpp"
#include "fixtures.hpp"

using namespace datlc;
using namespace datlc::testfix;

TEST_CASE("fixtures pass validation with an empty report") {
  CHECK(validate(l_det()).ok());
  CHECK(validate(l_fork()).ok());
}

TEST_CASE("a denormalized word row is flagged with its step and magnitude") {
  DatLattice lat = l_det();
  for (std::int32_t v = 0; v < 4; ++v) {
    lat.word_logprobs[2 * 4 + v] = std::log(0.5);  // row sums to 2
  }
  ValidationReport report = validate(lat);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].what == "word_row_normalization");
  CHECK(report.violations[0].step == 2);
  CHECK(report.violations[0].magnitude == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("a denormalized link row is flagged with its step") {
  DatLattice lat = l_fork();
  for (auto& x : lat.link_logprobs[2]) x -= 0.5;  // scale the row by e^-0.5
  ValidationReport report = validate(lat);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].what == "link_row_normalization");
  CHECK(report.violations[0].step == 2);
  CHECK(report.violations[0].magnitude == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("every broken invariant is reported, not just the first") {
  DatLattice lat = l_fork();
  lat.word_logprobs[1 * 5 + kA] = 0.5;          // positive log-probability
  lat.link_logprobs[2][0] = std::log(2.0);      // breaks link row 2
  lat.vocab.tokens[4] = "a";                    // duplicate token
  ValidationReport report = validate(lat);
  CHECK(report.violations.size() >= 3);
}

TEST_CASE("vocab invariants") {
  DatLattice lat = l_det();
  lat.vocab.bos_id = lat.vocab.eos_id;
  CHECK_FALSE(validate(lat).ok());

  lat = l_det();
  lat.vocab.eos_id = 99;
  CHECK_FALSE(validate(lat).ok());

  lat = l_det();
  lat.vocab.tokens[2] = "";
  CHECK_FALSE(validate(lat).ok());
}

TEST_CASE("source metadata must agree") {
  DatLattice lat = l_det();
  lat.source_len = 3;
  lat.source_tokens = std::vector<std::string>{"x", "y"};
  ValidationReport report = validate(lat);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].what == "source_len_mismatch");

  lat.source_len = 2;
  CHECK(validate(lat).ok());
}

TEST_CASE("NaN entries are rejected") {
  DatLattice lat = l_det();
  lat.word_logprobs[5] = std::nan("");
  CHECK_FALSE(validate(lat).ok());
}

TEST_CASE("renormalize fixes drifted rows") {
  DatLattice lat = l_fork();
  for (auto& x : lat.link_logprobs[1]) x += 0.25;  // scale the row by e^0.25
  CHECK_FALSE(validate(lat).ok());
  renormalize(lat);
  CHECK(validate(lat).ok());
}
