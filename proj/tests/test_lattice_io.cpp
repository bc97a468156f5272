#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "datlc/errors.hpp"
#include "datlc/generate.hpp"
#include "datlc/lattice_io.hpp"
#include "fixtures.hpp"

using namespace datlc;
using namespace datlc::testfix;

namespace {

bool lattices_equal(const DatLattice& a, const DatLattice& b) {
  return a.steps == b.steps && a.vocab.tokens == b.vocab.tokens &&
         a.vocab.bos_id == b.vocab.bos_id && a.vocab.eos_id == b.vocab.eos_id &&
         a.word_logprobs == b.word_logprobs && a.link_logprobs == b.link_logprobs &&
         a.source_len == b.source_len && a.source_tokens == b.source_tokens;
}

}  // namespace

TEST_CASE("fixture round-trips are exact and deterministic") {
  for (const DatLattice& lat : {l_det(), l_fork()}) {
    std::string bytes = write_lattice(lat);
    DatLattice back = read_lattice(bytes);
    CHECK(lattices_equal(lat, back));
    CHECK(write_lattice(back) == bytes);  // byte-identical re-serialization
  }
}

TEST_CASE("generated lattices round-trip, 100 seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    DatLattice lat = generate({5 + static_cast<std::int32_t>(seed % 4),
                               4 + static_cast<std::int32_t>(seed % 3), seed, 1.0});
    DatLattice back = read_lattice(write_lattice(lat));
    CHECK(lattices_equal(lat, back));
  }
}

TEST_CASE("optional source metadata survives the round-trip") {
  DatLattice lat = l_det();
  lat.source_len = 2;
  lat.source_tokens = std::vector<std::string>{"hello", "world"};
  DatLattice back = read_lattice(write_lattice(lat));
  CHECK(lattices_equal(lat, back));
}

TEST_CASE("missing required fields name the offending field") {
  std::string bytes = write_lattice(l_det());
  auto doc = nlohmann::ordered_json::parse(bytes);
  doc.erase("link_logprobs");
  try {
    read_lattice(doc.dump());
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "link_logprobs");
  }
}

TEST_CASE("schema violations are schema errors, bad distributions are validation errors") {
  CHECK_THROWS_AS(read_lattice("not json at all"), SchemaError);
  CHECK_THROWS_AS(read_lattice("{\"version\": 2}"), SchemaError);
  CHECK_THROWS_AS(read_lattice("[1, 2]"), SchemaError);

  // Structural damage of every kind is a schema error, not a crash.
  const std::string good = write_lattice(l_fork());
  auto damage = [&](auto&& mutate) {
    auto doc = nlohmann::ordered_json::parse(good);
    mutate(doc);
    CHECK_THROWS_AS(read_lattice(doc.dump()), SchemaError);
  };
  damage([](auto& d) { d["steps"] = 0; });
  damage([](auto& d) { d["steps"] = "five"; });
  damage([](auto& d) { d["vocab"] = nlohmann::ordered_json::array(); });
  damage([](auto& d) { d["vocab"][0] = 7; });
  damage([](auto& d) { d["bos_id"] = 0.5; });
  damage([](auto& d) { d["word_logprobs"][1].erase(2); });   // short row
  damage([](auto& d) { d["word_logprobs"].erase(0); });      // missing row
  damage([](auto& d) { d["link_logprobs"][0].erase(1); });   // short link row
  damage([](auto& d) { d["link_logprobs"].erase(3); });      // missing link row
  damage([](auto& d) { d["word_logprobs"][0][0] = true; });
  damage([](auto& d) { d["source_len"] = -3; });
  damage([](auto& d) { d["source_tokens"] = 12; });

  // A word row scaled to sum 1.5 parses fine but fails validation, citing
  // the step.
  DatLattice lat = l_det();
  lat.word_logprobs[1 * 4 + kA] = std::log(1.5);
  std::string bytes;
  {
    // write_lattice refuses invalid lattices, so build the document by hand
    auto doc = nlohmann::ordered_json::parse(write_lattice(l_det()));
    doc["word_logprobs"][1][kA] = std::log(1.5);
    bytes = doc.dump();
  }
  try {
    read_lattice(bytes);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE_FALSE(e.report().ok());
    CHECK(e.report().violations[0].step == 1);
  }
}

TEST_CASE("write_lattice refuses an invalid lattice") {
  DatLattice lat = l_det();
  lat.word_logprobs[0] = 0.5;
  CHECK_THROWS_AS(write_lattice(lat), ValidationError);
}

TEST_CASE("-inf encodes as the string form and nothing else") {
  std::string bytes = write_lattice(l_det());
  CHECK(bytes.find("\"-inf\"") != std::string::npos);

  auto doc = nlohmann::ordered_json::parse(bytes);
  doc["word_logprobs"][0][1] = "-infinity";
  CHECK_THROWS_AS(read_lattice(doc.dump()), SchemaError);
}

TEST_CASE("renormalize-on-load is opt-in") {
  auto doc = nlohmann::ordered_json::parse(write_lattice(l_fork()));
  doc["link_logprobs"][0][0] = std::log(0.6) + 1e-4;  // drift beyond tolerance
  CHECK_THROWS_AS(read_lattice(doc.dump()), ValidationError);
  DatLattice fixed = read_lattice(doc.dump(), {.renormalize = true});
  CHECK(validate(fixed).ok());
}
