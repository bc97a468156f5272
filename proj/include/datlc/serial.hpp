#pragma once

/**
 * Serial reference implementations of the parallel kernels.
 *
 * The public entry points in prob_core/pathmap/seqmap distribute independent
 * DP cells across OpenMP threads. The functions here run the same recursions
 * in plain sequential loops; tests assert the outputs are identical (not
 * just close), which pins down that the parallel scheduling cannot change a
 * result. The kernel benchmark compares the two directly.
 */

#include "datlc/pathmap.hpp"
#include "datlc/prob_core.hpp"
#include "datlc/seqmap.hpp"

namespace datlc::serial {

double sequence_log_marginal(const DatLattice& lattice,
                             const std::vector<std::int32_t>& tokens,
                             TerminationMode termination,
                             BosPolicy bos = BosPolicy::Strict);

PathMapResult pathmap_decode(const DatLattice& lattice, std::int32_t target_len,
                             TerminationMode termination = TerminationMode::Eos);

std::vector<SeqMapCandidate> seqmap_decode(const DatLattice& lattice,
                                           const DecodeConfig& config);

}  // namespace datlc::serial
