#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace datlc {

/// Whether a decoded sequence must link into the final step and emit <eos>
/// there (Eos), or may end at any step (Free).
enum class TerminationMode { Eos, Free };

/// How the beginning of a sequence is scored. Strict anchors <bos> at step 0;
/// Verbatim gives <bos> unit score at every step, so the first content word
/// marginalizes links from all earlier steps.
enum class BosPolicy { Strict, Verbatim };

/// A strictly increasing sequence of visited steps and the word emitted at
/// each of them.
struct Path {
  std::vector<std::int32_t> linked_steps;  // 0-based, strictly increasing
  std::vector<std::int32_t> words;         // token ids, same length

  bool invariants_hold() const {
    if (linked_steps.size() != words.size()) return false;
    for (std::size_t i = 1; i < linked_steps.size(); ++i) {
      if (linked_steps[i - 1] >= linked_steps[i]) return false;
    }
    return true;
  }
};

/// A token sequence with its log marginal probability; decoders that commit
/// to one path also record that path's log probability (never above the
/// marginal: one path's mass cannot exceed the sum over paths).
struct ScoredSequence {
  std::vector<std::int32_t> tokens;  // content tokens only
  double log_marginal = 0.0;
  std::optional<double> log_best_path;
};

}  // namespace datlc
