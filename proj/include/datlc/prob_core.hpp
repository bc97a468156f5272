#pragma once

/**
 * Probability kernels shared by all decoders.
 *
 * Everything here works in log space (see logspace.hpp). Scoring
 * conventions, honored identically by both decoders so their outputs stay
 * comparable:
 *
 *   - Eos mode scores the full path: the <bos> word factor at step 0, all
 *     link and word factors, the final link into step S-1, and the <eos>
 *     word factor there. Requires T + 2 <= S.
 *   - Free mode scores only the content chain: the link out of the anchor
 *     into the first content word, then link+word factors, ending at any
 *     step. No bos/eos word factors. Requires T + 1 <= S.
 *   - Strict bos anchors the sequence start at step 0; Verbatim gives the
 *     start unit mass at every step, so the first content word sums link
 *     mass from all earlier steps.
 */

#include "datlc/lattice.hpp"
#include "datlc/types.hpp"

namespace datlc {

/// Smallest legal target length under a termination mode, given S steps;
/// returns the largest feasible T (0 when nothing fits).
std::int32_t max_feasible_length(const DatLattice& lattice, TerminationMode mode);

/// ln of the joint probability of a path: first word factor, then
/// link+word factors for each later visited step. -inf when any factor is
/// probability zero. Throws std::out_of_range for bad steps or token ids and
/// std::invalid_argument when the path's own invariants fail.
double path_logprob(const DatLattice& lattice, const Path& path);

/// ln p(tokens): marginal over every admissible linked-step placement of the
/// content tokens, by a forward DP over (position, step) in O(T * S^2).
/// Throws std::invalid_argument for empty input or structural tokens, and
/// InfeasibleLengthError when T cannot fit.
double sequence_log_marginal(const DatLattice& lattice,
                             const std::vector<std::int32_t>& tokens,
                             TerminationMode termination,
                             BosPolicy bos = BosPolicy::Strict);

}  // namespace datlc
