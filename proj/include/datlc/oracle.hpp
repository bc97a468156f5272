#pragma once

/**
 * Brute-force reference implementations for desk-scale lattices. Everything
 * here enumerates explicitly and computes in LINEAR space with compensated
 * summation, so its failure modes are disjoint from the log-space
 * kernels it cross-checks. Hard caps refuse oversized instances outright;
 * a reference that silently subsamples is worse than none.
 */

#include "datlc/lattice.hpp"
#include "datlc/types.hpp"

namespace datlc {

struct OracleCaps {
  std::int32_t max_steps = 10;
  std::int32_t max_length = 6;
  std::int64_t max_sequences = 4096;  // |content vocab|^T for oracle_seqmap
};

/// How enumerate_paths accounts for word emissions.
enum class WordTreatment {
  LinkMassOnly,  // probability = product of link factors only
  SumOverWords,  // additionally multiply each step's total word mass
  FixedTokens,   // score the given content tokens along the path
};

struct EnumeratedPath {
  /// Visited steps; eos mode includes the bos step 0 and the final eos step.
  std::vector<std::int32_t> steps;
  /// Filled only for WordTreatment::FixedTokens.
  std::vector<std::int32_t> words;
  double probability;  // linear space
};

/// All placements of T content words under the termination mode (strict bos
/// anchoring), in lexicographic step order. Throws EnumerationCapError.
std::vector<EnumeratedPath> enumerate_paths(
    const DatLattice& lattice, std::int32_t target_len, TerminationMode termination,
    WordTreatment words = WordTreatment::LinkMassOnly,
    const std::vector<std::int32_t>& fixed_tokens = {}, const OracleCaps& caps = {});

/// Total probability of all complete step-0 -> step-S-1 walks of any length,
/// words summed out; equals 1 for a valid lattice. Kahan-summed.
double total_complete_path_mass(const DatLattice& lattice, const OracleCaps& caps = {});

/// Exact linear-space marginal of one content sequence (the quantity the
/// forward DP computes in log space).
double oracle_sequence_marginal(const DatLattice& lattice,
                                const std::vector<std::int32_t>& tokens,
                                TerminationMode termination,
                                BosPolicy bos = BosPolicy::Strict,
                                const OracleCaps& caps = {});

struct OraclePathMapResult {
  std::vector<std::int32_t> content_steps;  // without bos/eos anchors
  std::vector<std::int32_t> tokens;
  double probability;  // linear space
};

/// Exact argmax over linked-step placements and word choices, tie-broken
/// like pathmap_decode: score, then end step, then steps, then token ids.
OraclePathMapResult oracle_pathmap(const DatLattice& lattice, std::int32_t target_len,
                                   TerminationMode termination,
                                   const OracleCaps& caps = {});

struct OracleSequence {
  std::vector<std::int32_t> tokens;
  double marginal;  // linear space
};

/// Every length-T content sequence with its exact marginal, sorted by
/// marginal descending (lexicographic token tie-break). Zero-probability
/// sequences are included at the bottom of the table.
std::vector<OracleSequence> oracle_seqmap(const DatLattice& lattice,
                                          std::int32_t target_len,
                                          TerminationMode termination,
                                          BosPolicy bos = BosPolicy::Strict,
                                          const OracleCaps& caps = {});

}  // namespace datlc
