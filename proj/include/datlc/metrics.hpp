#pragma once

/**
 * Summary-quality metrics: ROUGE-1/2 (clipped n-gram overlap), ROUGE-L
 * (longest common subsequence), and word novelty. All scores are the F1
 * variant; tokens are compared exactly as given (the CLI lowercases during
 * tokenization).
 */

#include <string>
#include <vector>

namespace datlc {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Empty-side conventions: a side with no n-grams scores 0 everywhere,
/// except that two empty sides count as a perfect match.
RougeScore rouge_n(const std::vector<std::string>& hyp,
                   const std::vector<std::string>& ref, int n);

RougeScore rouge_l(const std::vector<std::string>& hyp,
                   const std::vector<std::string>& ref);

/// Fraction of hypothesis positions whose token does not occur anywhere in
/// the source. Throws std::invalid_argument on an empty hypothesis.
double word_novelty(const std::vector<std::string>& hyp,
                    const std::vector<std::string>& source);

/// Whitespace split + ASCII lowercase; the tokenization used by the CLI for
/// evaluation files.
std::vector<std::string> tokenize(const std::string& line);

}  // namespace datlc
