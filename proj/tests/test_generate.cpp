#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <stdexcept>

#include "datlc/generate.hpp"
#include "datlc/lattice_io.hpp"
#include "datlc/splitmix64.hpp"

using namespace datlc;

namespace {

// Independent splitmix64, written from the published reference rather than
// the library header, to pin the constants down.
std::uint64_t reference_splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

TEST_CASE("splitmix64 matches an independent implementation") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL, ~0ULL}) {
    SplitMix64 ours(seed);
    std::uint64_t state = seed;
    for (int i = 0; i < 1000; ++i) {
      CHECK(ours.next() == reference_splitmix64(state));
    }
  }
}

TEST_CASE("equal specs yield byte-identical lattices") {
  GenSpec spec{5, 4, 7, 1.0};
  CHECK(write_lattice(generate(spec)) == write_lattice(generate(spec)));
}

TEST_CASE("different seeds yield different lattices") {
  CHECK(write_lattice(generate({5, 4, 7, 1.0})) != write_lattice(generate({5, 4, 8, 1.0})));
}

TEST_CASE("generated lattices always validate, 100 seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec spec;
    spec.steps = 3 + static_cast<std::int32_t>(seed % 7);
    spec.vocab_size = 3 + static_cast<std::int32_t>(seed % 5);
    spec.seed = seed;
    spec.concentration = seed % 3 == 0 ? 0.5 : 1.0;
    CHECK(validate(generate(spec)).ok());
  }
}

TEST_CASE("structural pinning: bos at step 0, eos at the last step") {
  DatLattice lat = generate({3, 3, 0, 1.0});
  CHECK(lat.word_logprob(0, lat.vocab.bos_id) == 0.0);
  CHECK(lat.word_logprob(lat.steps - 1, lat.vocab.eos_id) == 0.0);
  // With S=3 and |V|=3 the only free word row is step 1, over the single
  // content token, so it is forced to probability 1 too.
  CHECK(lat.word_logprob(1, 2) == 0.0);
  CHECK(lat.word_logprob(1, lat.vocab.bos_id) == kNegInf);
  CHECK(lat.word_logprob(1, lat.vocab.eos_id) == kNegInf);
  // Both link rows exist; the length-1 row is forced.
  CHECK(lat.link_logprob(1, 2) == 0.0);
}

TEST_CASE("interior rows put no mass on structural tokens") {
  DatLattice lat = generate({8, 6, 123, 1.0});
  for (std::int32_t s = 1; s + 1 < lat.steps; ++s) {
    CHECK(lat.word_logprob(s, lat.vocab.bos_id) == kNegInf);
    CHECK(lat.word_logprob(s, lat.vocab.eos_id) == kNegInf);
  }
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(generate({2, 5, 1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({5, 2, 1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({5, 5, 1, 0.0}), std::invalid_argument);
}
