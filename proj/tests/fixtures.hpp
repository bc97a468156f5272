#pragma once

// The two named lattices used across the test suite. l_det is a
// deterministic chain (every distribution is a point mass); l_fork has two
// to three live words and links per step, small enough to check by hand.

#include <cmath>

#include "datlc/lattice.hpp"

namespace datlc::testfix {

// ids shared by both fixtures
inline constexpr std::int32_t kBos = 0;
inline constexpr std::int32_t kEos = 1;
inline constexpr std::int32_t kA = 2;
inline constexpr std::int32_t kB = 3;
inline constexpr std::int32_t kC = 4;

inline void set_word(DatLattice& lat, std::int32_t step, std::int32_t token, double p) {
  lat.word_logprobs[static_cast<std::size_t>(step) * lat.vocab.tokens.size() + token] =
      std::log(p);
}

inline void set_link(DatLattice& lat, std::int32_t from, std::int32_t to, double p) {
  lat.link_logprobs[from][to - from - 1] = std::log(p);
}

/// S=4, vocab [<bos>,<eos>,a,b]; the unique complete path is
/// (bos, a, b, eos) with probability 1.
inline DatLattice l_det() {
  DatLattice lat;
  lat.steps = 4;
  lat.vocab.tokens = {"<bos>", "<eos>", "a", "b"};
  lat.word_logprobs.assign(4 * 4, kNegInf);
  set_word(lat, 0, kBos, 1.0);
  set_word(lat, 1, kA, 1.0);
  set_word(lat, 2, kB, 1.0);
  set_word(lat, 3, kEos, 1.0);
  lat.link_logprobs = {{kNegInf, kNegInf, kNegInf}, {kNegInf, kNegInf}, {kNegInf}};
  set_link(lat, 0, 1, 1.0);
  set_link(lat, 1, 2, 1.0);
  set_link(lat, 2, 3, 1.0);
  return lat;
}

/// S=5, vocab [<bos>,<eos>,a,b,c]; forked links and words, all rows exactly
/// normalized.
inline DatLattice l_fork() {
  DatLattice lat;
  lat.steps = 5;
  lat.vocab.tokens = {"<bos>", "<eos>", "a", "b", "c"};
  lat.word_logprobs.assign(5 * 5, kNegInf);
  set_word(lat, 0, kBos, 1.0);
  set_word(lat, 1, kA, 0.7);
  set_word(lat, 1, kB, 0.3);
  set_word(lat, 2, kA, 0.1);
  set_word(lat, 2, kB, 0.6);
  set_word(lat, 2, kC, 0.3);
  set_word(lat, 3, kB, 0.5);
  set_word(lat, 3, kC, 0.5);
  set_word(lat, 4, kEos, 1.0);
  lat.link_logprobs = {{kNegInf, kNegInf, kNegInf, kNegInf},
                       {kNegInf, kNegInf, kNegInf},
                       {kNegInf, kNegInf},
                       {kNegInf}};
  set_link(lat, 0, 1, 0.6);
  set_link(lat, 0, 2, 0.3);
  set_link(lat, 0, 3, 0.1);
  set_link(lat, 0, 4, 0.0);
  set_link(lat, 1, 2, 0.5);
  set_link(lat, 1, 3, 0.4);
  set_link(lat, 1, 4, 0.1);
  set_link(lat, 2, 3, 0.7);
  set_link(lat, 2, 4, 0.3);
  set_link(lat, 3, 4, 1.0);
  return lat;
}

}  // namespace datlc::testfix
