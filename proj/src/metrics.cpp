#include "datlc/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace datlc {

namespace {

RougeScore from_counts(double overlap, double hyp_total, double ref_total) {
  if (hyp_total == 0.0 && ref_total == 0.0) return {1.0, 1.0, 1.0};
  RougeScore s;
  s.precision = hyp_total > 0.0 ? overlap / hyp_total : 0.0;
  s.recall = ref_total > 0.0 ? overlap / ref_total : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

using Ngram = std::vector<std::string>;

std::map<Ngram, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::map<Ngram, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

RougeScore rouge_n(const std::vector<std::string>& hyp,
                   const std::vector<std::string>& ref, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  auto hyp_counts = ngram_counts(hyp, n);
  auto ref_counts = ngram_counts(ref, n);

  double hyp_total = 0.0, ref_total = 0.0, overlap = 0.0;
  for (const auto& [g, c] : hyp_counts) hyp_total += c;
  for (const auto& [g, c] : ref_counts) ref_total += c;
  for (const auto& [g, c] : hyp_counts) {
    auto it = ref_counts.find(g);
    if (it != ref_counts.end()) overlap += std::min(c, it->second);  // clipped
  }
  return from_counts(overlap, hyp_total, ref_total);
}

RougeScore rouge_l(const std::vector<std::string>& hyp,
                   const std::vector<std::string>& ref) {
  const std::size_t n = hyp.size(), m = ref.size();
  if (n == 0 || m == 0) return from_counts(0.0, n, m);

  // Standard O(n*m) LCS with two rolling rows.
  std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = hyp[i - 1] == ref[j - 1] ? prev[j - 1] + 1
                                        : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return from_counts(prev[m], n, m);
}

double word_novelty(const std::vector<std::string>& hyp,
                    const std::vector<std::string>& source) {
  if (hyp.empty()) throw std::invalid_argument("hypothesis must be non-empty");
  std::set<std::string> seen(source.begin(), source.end());
  std::size_t novel = 0;
  for (const auto& w : hyp) {
    if (!seen.count(w)) ++novel;
  }
  return static_cast<double>(novel) / static_cast<double>(hyp.size());
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) {
    std::transform(tok.begin(), tok.end(), tok.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace datlc
