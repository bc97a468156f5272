#pragma once

/**
 * DAT output lattice: per-step word log-distributions plus per-step link
 * log-distributions over strictly later steps. This is the decoders' sole
 * probabilistic input; a trained model would fill the same tables.
 *
 * Steps are 0-based in code (0 .. steps-1). Link rows are stored sparsely:
 * row s holds targets s+1 .. steps-1 only, so a backward link cannot even
 * be represented.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "datlc/logspace.hpp"

namespace datlc {

struct Vocab {
  std::vector<std::string> tokens;
  std::int32_t bos_id = 0;
  std::int32_t eos_id = 1;

  std::int32_t size() const { return static_cast<std::int32_t>(tokens.size()); }
  bool is_structural(std::int32_t id) const { return id == bos_id || id == eos_id; }

  /// Token ids eligible as output words (everything except bos/eos), ascending.
  std::vector<std::int32_t> content_ids() const {
    std::vector<std::int32_t> out;
    out.reserve(tokens.size());
    for (std::int32_t v = 0; v < size(); ++v) {
      if (!is_structural(v)) out.push_back(v);
    }
    return out;
  }
};

struct DatLattice {
  std::int32_t steps = 0;
  Vocab vocab;
  /// steps x |vocab|, row-major natural-log probabilities.
  std::vector<double> word_logprobs;
  /// Row s (s in [0, steps-1)) holds ln l(s -> j) for j = s+1 .. steps-1.
  std::vector<std::vector<double>> link_logprobs;
  std::optional<std::int32_t> source_len;
  std::optional<std::vector<std::string>> source_tokens;

  double word_logprob(std::int32_t step, std::int32_t token) const {
    check_step(step);
    if (token < 0 || token >= vocab.size()) {
      throw std::out_of_range("token id " + std::to_string(token) + " out of vocab");
    }
    return word_logprobs[static_cast<std::size_t>(step) * vocab.tokens.size() + token];
  }

  std::span<const double> word_row(std::int32_t step) const {
    check_step(step);
    return {word_logprobs.data() + static_cast<std::size_t>(step) * vocab.tokens.size(),
            vocab.tokens.size()};
  }

  /// ln l(from -> to); requires from < to < steps.
  double link_logprob(std::int32_t from, std::int32_t to) const {
    check_step(from);
    check_step(to);
    if (to <= from) {
      throw std::out_of_range("link must point to a strictly later step");
    }
    return link_logprobs[from][to - from - 1];
  }

 private:
  void check_step(std::int32_t s) const {
    if (s < 0 || s >= steps) {
      throw std::out_of_range("step " + std::to_string(s) + " out of range [0, " +
                              std::to_string(steps) + ")");
    }
  }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// How far a row's logsumexp may drift from 0 before it is rejected.
inline constexpr double kRowNormTolerance = 1e-6;
/// Individual log-probabilities may not materially exceed 0.
inline constexpr double kEntryTolerance = 1e-6;

struct Violation {
  std::string what;      // e.g. "word_row_normalization"
  std::int32_t step;     // 0-based index, -1 when not row-specific
  double magnitude;      // size of the violation, 0 when not numeric
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Never throws: every violated invariant ends up in the report.
ValidationReport validate(const DatLattice& lattice);

/// Lattice contents fail validate(); carries the full report.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error("invalid lattice:\n" + report.to_string()),
        report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Subtract each row's logsumexp so every row normalizes exactly.
void renormalize(DatLattice& lattice);

}  // namespace datlc
