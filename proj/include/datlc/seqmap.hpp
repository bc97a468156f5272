#pragma once

/**
 * SeqMAP: beam-search dynamic programming that approximately maximizes the
 * marginal sequence probability at exactly the target length.
 *
 * The DP cell A(t,s) holds up to K token sequences of length t generated at
 * or before step s. Each candidate carries a support map: for every step s'
 * where it can end with nonzero mass, the log of that mass u_{s'}(b). The
 * recursion alternates two operations per (t,s):
 *
 *   Expand  A(t-1,s-1) -> B(t,s): append one of the top-V content words at
 *           step s; the new mass marginalizes the parent's support over all
 *           incoming links. Children that collide on the same token
 *           sequence combine their mass. Ranked by u_s, truncated to K.
 *   Merge   B(t,s) + A(t,s-1) -> A(t,s): union by token sequence (support
 *           maps are disjoint: the left side ends before s, the right side
 *           ends exactly at s), ranked by total mass, truncated to K.
 *
 * With K >= the number of distinct reachable sequences and V = the content
 * vocabulary size, no truncation occurs and the totals are exact sequence
 * marginals; with smaller K or V they are lower bounds (pruning discards
 * mass, never invents it).
 */

#include <optional>

#include "datlc/lattice.hpp"
#include "datlc/types.hpp"

namespace datlc {

struct SupportEntry {
  std::int32_t step;
  double log_mass;  // > -inf: zero-mass steps are dropped, not stored
};

struct BeamEntry {
  std::vector<std::int32_t> tokens;
  std::vector<SupportEntry> support;  // ascending step

  double total() const;  // logsumexp over the support
};

struct BeamCell {
  std::vector<BeamEntry> entries;  // deduplicated by token sequence
};

struct DecodeConfig {
  std::int32_t beam = 20;    // K
  std::int32_t expand = 5;   // V, clamped to the content vocabulary
  TerminationMode termination = TerminationMode::Eos;
  BosPolicy bos = BosPolicy::Strict;
  std::optional<std::int32_t> length;  // exactly one of length / ratio
  std::optional<double> ratio;         // of lattice.source_len
};

/// T from the config: the explicit length, or max(1, floor(ratio *
/// source_len)). Throws std::invalid_argument when the config is malformed
/// or ratio is given without source_len in the lattice.
std::int32_t resolve_target_length(const DecodeConfig& config, const DatLattice& lattice);

/// The t = 0 root cell for column s: under the strict policy a single entry
/// anchored at step 0; under verbatim an entry with unit mass at every step
/// <= s.
BeamCell initial_cell(const DatLattice& lattice, std::int32_t s, BosPolicy bos,
                      TerminationMode termination);

/// Expand A(t-1,s-1) with the top-V content words of step s; result is
/// B(t,s), ranked by u_s and truncated to K.
BeamCell expand_cell(const DatLattice& lattice, const BeamCell& prev,
                     std::int32_t step, std::int32_t top_v, std::int32_t beam_k);

/// Merge B(t,s) with A(t,s-1); result is A(t,s), ranked by total mass and
/// truncated to K.
BeamCell merge_cells(const BeamCell& ended_at_s, const BeamCell& ended_before_s,
                     std::int32_t beam_k);

struct SeqMapCandidate {
  std::vector<std::int32_t> tokens;
  double total;         // the beam's accumulated mass (the ranking score)
  double log_marginal;  // exact marginal, recomputed independently of the beam
};

/// Ranked candidate list (<= K, exactly T content tokens each), sorted by
/// total descending with lexicographic token tie-break. Throws
/// InfeasibleLengthError / NoValidSequenceError.
std::vector<SeqMapCandidate> seqmap_decode(const DatLattice& lattice,
                                           const DecodeConfig& config);

}  // namespace datlc
