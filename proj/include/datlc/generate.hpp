#pragma once

/**
 * Reproducible synthetic lattices for tests and benchmarks.
 *
 * Sampling procedure (fixed, documented so it can be replayed elsewhere):
 * a single splitmix64 stream seeded with `seed` supplies uniforms in [0,1).
 * Each free distribution row draws one uniform per slot, maps it to
 * e = -ln(1-u), raises it to 1/concentration, and normalizes the row.
 * Draw order: interior word rows for steps 1..S-2 (content slots only, in
 * token-id order), then link rows for steps 0..S-2 (targets ascending).
 *
 * Structural pinning: step 0 emits <bos> with probability 1, step S-1 emits
 * <eos> with probability 1, and interior rows place zero mass on bos/eos.
 */

#include <cstdint>

#include "datlc/lattice.hpp"

namespace datlc {

struct GenSpec {
  std::int32_t steps = 0;       // >= 3: room for bos, one content word, eos
  std::int32_t vocab_size = 0;  // >= 3
  std::uint64_t seed = 0;
  double concentration = 1.0;   // > 0; smaller values give peakier rows
};

/// Deterministic: equal specs yield byte-identical serialized lattices.
/// Throws std::invalid_argument when the spec violates its invariants.
DatLattice generate(const GenSpec& spec);

}  // namespace datlc
