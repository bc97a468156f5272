#pragma once

/**
 * PathMAP: exact most-probable length-T path, maximizing links and words
 * jointly. Word choice is separable (the per-step best word is independent
 * of the link structure), so the search runs
 * over linked-step placements only, Viterbi style, in O(T*S^2 + S*|V|).
 *
 * Tie-breaking (total order, deterministic output): higher score, then
 * smaller end step, then lexicographically smaller linked-step vector, then
 * lexicographically smaller token-id sequence (per-step argmax ties already
 * resolve to the smaller token id).
 */

#include "datlc/lattice.hpp"
#include "datlc/types.hpp"

namespace datlc {

struct PathMapResult {
  /// Eos mode: full visited path including the bos step and the final eos
  /// step, so path_logprob(path) reproduces log_best_path. Free mode:
  /// content steps only.
  Path path;
  /// Content tokens; log_best_path is the DP optimum, log_marginal the exact
  /// marginal of the emitted sequence.
  ScoredSequence sequence;
};

/// Throws InfeasibleLengthError when T cannot fit under the termination
/// mode, NoValidPathError when every length-T placement has probability 0.
PathMapResult pathmap_decode(const DatLattice& lattice, std::int32_t target_len,
                             TerminationMode termination = TerminationMode::Eos);

}  // namespace datlc
