#pragma once

/**
 * Canonical lattice file format (JSON, UTF-8, version 1):
 *
 * {
 *   "version": 1,
 *   "steps": S,
 *   "vocab": ["<bos>", "<eos>", "tok1", ...],
 *   "bos_id": 0, "eos_id": 1,
 *   "source_len": 12,                // optional
 *   "source_tokens": ["w1", ...],    // optional
 *   "word_logprobs": [[...|V| numbers] x S],
 *   "link_logprobs": [[S-1 numbers], [S-2 numbers], ..., [1 number]]
 * }
 *
 * Probability zero is encoded as the JSON string "-inf". Serialization is
 * deterministic: the same lattice always produces the same bytes, and
 * read(write(L)) reproduces L exactly (numbers are emitted in shortest
 * round-trip form).
 */

#include <string>

#include "datlc/lattice.hpp"

namespace datlc {

struct ReadOptions {
  /// Renormalize rows on load instead of rejecting drifted distributions.
  bool renormalize = false;
};

/// Parse and validate. Throws SchemaError on malformed documents and
/// ValidationError (with the full report) on well-formed but invalid ones.
DatLattice read_lattice(const std::string& bytes, const ReadOptions& options = {});

/// Validates first; throws ValidationError on an invalid lattice.
std::string write_lattice(const DatLattice& lattice);

DatLattice read_lattice_file(const std::string& path, const ReadOptions& options = {});
void write_lattice_file(const DatLattice& lattice, const std::string& path);

}  // namespace datlc
