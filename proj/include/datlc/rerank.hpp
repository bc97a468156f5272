#pragma once

/**
 * Candidate-list reranking: selects the final output among a decoder's K
 * candidates. The scorer receives the whole list (not one candidate at a
 * time) so richer selectors can attend across candidates later; the two
 * scorers shipped here are the beam-score identity baseline and the
 * reference-overlap selector used as a reranking oracle.
 */

#include <cstddef>
#include <span>
#include <string>

#include "datlc/lattice.hpp"
#include "datlc/types.hpp"

namespace datlc {

struct CandidateList {
  /// Beam order, rank 0 first; log_marginal carries the decoder's ranking
  /// score for each candidate. Non-empty, pairwise distinct.
  std::vector<ScoredSequence> candidates;
  /// Needed by scorers that compare token strings (overlap).
  const Vocab* vocab = nullptr;
  std::vector<std::string> source_tokens;     // optional context
  std::vector<std::string> reference_tokens;  // optional
};

/// Index of the candidate with the highest score; ties keep the earlier beam
/// rank. On a decoder-sorted list this is always 0.
std::size_t rerank_marginal(const CandidateList& list);

/// Index of the candidate sharing the most words (multiset intersection on
/// lowercased token strings) with the reference; ties keep the earlier beam
/// rank. Throws std::invalid_argument on an empty reference or missing vocab.
std::size_t rerank_overlap(const CandidateList& list,
                           std::span<const std::string> reference);

}  // namespace datlc
