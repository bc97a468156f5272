#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "datlc/errors.hpp"
#include "datlc/generate.hpp"
#include "datlc/oracle.hpp"
#include "datlc/prob_core.hpp"
#include "fixtures.hpp"

using namespace datlc;
using namespace datlc::testfix;

TEST_CASE("the chain fixture has exactly one complete placement") {
  auto paths = enumerate_paths(l_det(), 2, TerminationMode::Eos);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].steps == std::vector<std::int32_t>{0, 1, 2, 3});
  CHECK(paths[0].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fork fixture link products, read off the rows") {
  auto paths = enumerate_paths(l_fork(), 1, TerminationMode::Eos);
  REQUIRE(paths.size() == 3);
  CHECK(paths[0].steps == std::vector<std::int32_t>{0, 1, 4});
  CHECK(paths[0].probability == doctest::Approx(0.6 * 0.1).epsilon(1e-12));
  CHECK(paths[1].steps == std::vector<std::int32_t>{0, 2, 4});
  CHECK(paths[1].probability == doctest::Approx(0.3 * 0.3).epsilon(1e-12));
  CHECK(paths[2].steps == std::vector<std::int32_t>{0, 3, 4});
  CHECK(paths[2].probability == doctest::Approx(0.1 * 1.0).epsilon(1e-12));
}

TEST_CASE("oversized instances are refused outright") {
  DatLattice big = generate({12, 4, 1, 1.0});
  CHECK_THROWS_AS(enumerate_paths(big, 2, TerminationMode::Eos), EnumerationCapError);
  CHECK_THROWS_AS(oracle_pathmap(big, 2, TerminationMode::Eos), EnumerationCapError);
  CHECK_THROWS_AS(oracle_seqmap(big, 2, TerminationMode::Eos), EnumerationCapError);
  CHECK_THROWS_AS(total_complete_path_mass(big), EnumerationCapError);

  DatLattice small = generate({6, 6, 1, 1.0});
  OracleCaps caps;
  caps.max_sequences = 8;  // 4^2 = 16 sequences exceed this
  CHECK_THROWS_AS(oracle_seqmap(small, 2, TerminationMode::Eos, BosPolicy::Strict, caps),
                  EnumerationCapError);
}

TEST_CASE("sequence cap is inclusive at the boundary") {
  DatLattice lat = generate({10, 6, 21, 1.0});  // 4 content words
  // 4^6 = 4096 sequences: exactly the default cap, allowed.
  auto table = oracle_seqmap(lat, 6, TerminationMode::Eos);
  REQUIRE(table.size() == 4096);
  double dp = sequence_log_marginal(lat, table[0].tokens, TerminationMode::Eos);
  CHECK(dp == doctest::Approx(std::log(table[0].marginal)).epsilon(1e-9));

  OracleCaps caps;
  caps.max_sequences = 4095;
  CHECK_THROWS_AS(oracle_seqmap(lat, 6, TerminationMode::Eos, BosPolicy::Strict, caps),
                  EnumerationCapError);
}

TEST_CASE("complete path mass is one on fixtures and generated lattices") {
  CHECK(total_complete_path_mass(l_det()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_complete_path_mass(l_fork()) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DatLattice lat = generate({static_cast<std::int32_t>(4 + seed % 4),
                               static_cast<std::int32_t>(3 + seed % 4), seed, 1.0});
    CHECK(std::fabs(total_complete_path_mass(lat) - 1.0) < 1e-9);
  }
}

TEST_CASE("oracle pathmap on the chain fixture") {
  OraclePathMapResult r = oracle_pathmap(l_det(), 2, TerminationMode::Eos);
  CHECK(r.content_steps == std::vector<std::int32_t>{1, 2});
  CHECK(r.tokens == std::vector<std::int32_t>{kA, kB});
  CHECK(r.probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle seqmap table on the chain fixture") {
  auto table = oracle_seqmap(l_det(), 2, TerminationMode::Eos);
  REQUIRE(table.size() == 4);  // {a,b}^2
  CHECK(table[0].tokens == std::vector<std::int32_t>{kA, kB});
  CHECK(table[0].marginal == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i].marginal == 0.0);
}

TEST_CASE("sequence marginals sum to the eos-terminated link mass") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    DatLattice lat = generate({static_cast<std::int32_t>(5 + seed % 3),
                               static_cast<std::int32_t>(4 + seed % 2), seed + 50, 1.0});
    for (std::int32_t len = 1; len <= 2; ++len) {
      double seq_total = 0.0;
      for (const auto& row : oracle_seqmap(lat, len, TerminationMode::Eos)) {
        seq_total += row.marginal;
      }
      double link_total = 0.0;
      for (const auto& p : enumerate_paths(lat, len, TerminationMode::Eos)) {
        link_total += p.probability;
      }
      CHECK(seq_total == doctest::Approx(link_total).epsilon(1e-9));
    }
  }
}

TEST_CASE("word treatments agree on normalized lattices") {
  DatLattice lat = l_fork();
  auto links_only = enumerate_paths(lat, 2, TerminationMode::Eos);
  auto summed = enumerate_paths(lat, 2, TerminationMode::Eos, WordTreatment::SumOverWords);
  REQUIRE(links_only.size() == summed.size());
  for (std::size_t i = 0; i < links_only.size(); ++i) {
    CHECK(summed[i].probability ==
          doctest::Approx(links_only[i].probability).epsilon(1e-12));
  }
}

TEST_CASE("fixed-token paths carry the word factors") {
  DatLattice lat = l_fork();
  auto paths = enumerate_paths(lat, 2, TerminationMode::Eos, WordTreatment::FixedTokens,
                               {kA, kB});
  double total = 0.0;
  for (const auto& p : paths) {
    CHECK(p.words.front() == kBos);
    CHECK(p.words.back() == kEos);
    total += p.probability;
  }
  CHECK(total == doctest::Approx(0.1323).epsilon(1e-12));  // the (a,b) marginal
}
