#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "datlc/rerank.hpp"
#include "datlc/seqmap.hpp"
#include "fixtures.hpp"

using namespace datlc;
using namespace datlc::testfix;

namespace {

CandidateList fork_list(const DatLattice& lat) {
  // Exhaustive decode; candidates carry their beam totals as the score.
  DecodeConfig config;
  config.beam = 9;
  config.expand = 3;
  config.length = 2;
  auto result = seqmap_decode(lat, config);
  CandidateList list;
  list.vocab = &lat.vocab;
  for (const auto& c : result) {
    list.candidates.push_back({c.tokens, c.total, std::nullopt});
  }
  return list;
}

}  // namespace

TEST_CASE("single candidate wins by default") {
  Vocab vocab{{"<bos>", "<eos>", "a"}, 0, 1};
  CandidateList list;
  list.vocab = &vocab;
  list.candidates.push_back({{2}, -1.5, std::nullopt});
  CHECK(rerank_marginal(list) == 0);
}

TEST_CASE("marginal reranking is an argmax over scores") {
  Vocab vocab{{"<bos>", "<eos>", "a", "b"}, 0, 1};
  CandidateList list;
  list.vocab = &vocab;
  list.candidates.push_back({{2}, -1.0, std::nullopt});
  list.candidates.push_back({{3}, -0.5, std::nullopt});
  CHECK(rerank_marginal(list) == 1);

  // Equal scores keep the earlier beam rank.
  list.candidates[1].log_marginal = -1.0;
  CHECK(rerank_marginal(list) == 0);
}

TEST_CASE("decoder output is already sorted, so the baseline picks rank 0") {
  DatLattice lat = l_fork();
  CHECK(rerank_marginal(fork_list(lat)) == 0);
}

TEST_CASE("full overlap with a candidate selects it") {
  DatLattice lat = l_fork();
  CandidateList list = fork_list(lat);
  for (std::size_t i : {std::size_t{2}, std::size_t{5}}) {
    std::vector<std::string> reference;
    for (std::int32_t id : list.candidates[i].tokens) {
      reference.push_back(lat.vocab.tokens[id]);
    }
    std::size_t picked = rerank_overlap(list, reference);
    // The picked candidate overlaps the reference at least as much as the
    // reference's own candidate (duplicates can tie earlier ranks).
    CHECK(picked <= i);
    if (picked != i) {
      CHECK(list.candidates[picked].tokens != list.candidates[i].tokens);
    }
  }
  // A reference that is literally candidate 2's tokens and shares no word
  // with earlier candidates: build one from a distinct token multiset.
  std::vector<std::string> unique_ref{"c", "c"};
  std::size_t idx = rerank_overlap(list, unique_ref);
  CHECK(list.candidates[idx].tokens == std::vector<std::int32_t>{kC, kC});
}

TEST_CASE("disjoint candidates tie at zero and keep beam order") {
  Vocab vocab{{"<bos>", "<eos>", "a", "b", "c"}, 0, 1};
  CandidateList list;
  list.vocab = &vocab;
  list.candidates.push_back({{2}, -0.1, std::nullopt});
  list.candidates.push_back({{3}, -0.2, std::nullopt});
  std::vector<std::string> reference{"z", "z"};
  CHECK(rerank_overlap(list, reference) == 0);
}

TEST_CASE("overlap counts are multiset intersections") {
  Vocab vocab{{"<bos>", "<eos>", "a", "b", "c"}, 0, 1};
  CandidateList list;
  list.vocab = &vocab;
  list.candidates.push_back({{2, 3}, -0.1, std::nullopt});  // (a,b)
  list.candidates.push_back({{3, 4}, -0.2, std::nullopt});  // (b,c)
  std::vector<std::string> reference{"b", "c", "c"};
  // overlaps: (a,b) -> 1, (b,c) -> 2
  CHECK(rerank_overlap(list, reference) == 1);
}

TEST_CASE("overlap is case-insensitive") {
  Vocab vocab{{"<bos>", "<eos>", "Apple", "pear"}, 0, 1};
  CandidateList list;
  list.vocab = &vocab;
  list.candidates.push_back({{3}, -0.1, std::nullopt});
  list.candidates.push_back({{2}, -0.2, std::nullopt});
  std::vector<std::string> reference{"APPLE"};
  CHECK(rerank_overlap(list, reference) == 1);
}

TEST_CASE("argument checks") {
  Vocab vocab{{"<bos>", "<eos>", "a"}, 0, 1};
  CandidateList empty;
  empty.vocab = &vocab;
  CHECK_THROWS_AS(rerank_marginal(empty), std::invalid_argument);

  CandidateList list;
  list.vocab = &vocab;
  list.candidates.push_back({{2}, -0.1, std::nullopt});
  CHECK_THROWS_AS(rerank_overlap(list, {}), std::invalid_argument);

  CandidateList no_vocab;
  no_vocab.candidates.push_back({{2}, -0.1, std::nullopt});
  std::vector<std::string> reference{"a"};
  CHECK_THROWS_AS(rerank_overlap(no_vocab, reference), std::invalid_argument);
}
