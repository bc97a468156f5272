#include "datlc/rerank.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace datlc {

namespace {

std::string lowercased(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::size_t rerank_marginal(const CandidateList& list) {
  if (list.candidates.empty()) throw std::invalid_argument("candidate list is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < list.candidates.size(); ++i) {
    if (list.candidates[i].log_marginal > list.candidates[best].log_marginal) {
      best = i;
    }
  }
  return best;
}

std::size_t rerank_overlap(const CandidateList& list,
                           std::span<const std::string> reference) {
  if (list.candidates.empty()) throw std::invalid_argument("candidate list is empty");
  if (reference.empty()) throw std::invalid_argument("reference is empty");
  if (list.vocab == nullptr) {
    throw std::invalid_argument("overlap reranking needs the lattice vocab");
  }

  std::map<std::string, std::int32_t> ref_bag;
  for (const auto& w : reference) ++ref_bag[lowercased(w)];

  std::size_t best = 0;
  std::int32_t best_overlap = -1;
  for (std::size_t i = 0; i < list.candidates.size(); ++i) {
    std::map<std::string, std::int32_t> bag = ref_bag;
    std::int32_t overlap = 0;
    for (std::int32_t id : list.candidates[i].tokens) {
      if (id < 0 || id >= list.vocab->size()) {
        throw std::out_of_range("candidate token id out of vocab");
      }
      auto it = bag.find(lowercased(list.vocab->tokens[id]));
      if (it != bag.end() && it->second > 0) {
        --it->second;
        ++overlap;
      }
    }
    if (overlap > best_overlap) {  // strict: ties keep the earlier rank
      best_overlap = overlap;
      best = i;
    }
  }
  return best;
}

}  // namespace datlc
