#include "datlc/seqmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "datlc/errors.hpp"
#include "datlc/prob_core.hpp"

namespace datlc {

double BeamEntry::total() const {
  double max = kNegInf;
  for (const auto& e : support) {
    if (e.log_mass > max) max = e.log_mass;
  }
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (const auto& e : support) sum += std::exp(e.log_mass - max);
  return max + std::log(sum);
}

namespace {

bool tokens_less(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Ranking order shared by Expand and Merge: higher score first, ties to the
// lexicographically smaller token sequence.
void sort_and_truncate(std::vector<BeamEntry>& entries,
                       const std::vector<double>& scores, std::int32_t beam_k) {
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return tokens_less(entries[a].tokens, entries[b].tokens);
  });
  if (order.size() > static_cast<std::size_t>(beam_k)) order.resize(beam_k);
  std::vector<BeamEntry> kept;
  kept.reserve(order.size());
  for (std::size_t i : order) kept.push_back(std::move(entries[i]));
  entries = std::move(kept);
}

/// Top-V content words at a step, by probability descending then token id.
std::vector<std::int32_t> top_content_words(const DatLattice& lat, std::int32_t step,
                                            std::int32_t top_v) {
  auto row = lat.word_row(step);
  std::vector<std::int32_t> ids = lat.vocab.content_ids();
  std::stable_sort(ids.begin(), ids.end(), [&](std::int32_t a, std::int32_t b) {
    return row[a] > row[b];  // stable keeps smaller id first on ties
  });
  if (ids.size() > static_cast<std::size_t>(top_v)) ids.resize(top_v);
  return ids;
}

}  // namespace

std::int32_t resolve_target_length(const DecodeConfig& config, const DatLattice& lat) {
  if (config.beam < 1) throw std::invalid_argument("beam width must be >= 1");
  if (config.expand < 1) throw std::invalid_argument("expansion width must be >= 1");
  if (config.length.has_value() == config.ratio.has_value()) {
    throw std::invalid_argument("exactly one of length and ratio must be set");
  }
  if (config.length) {
    if (*config.length < 1) throw std::invalid_argument("length must be >= 1");
    return *config.length;
  }
  if (!(*config.ratio > 0.0)) throw std::invalid_argument("ratio must be positive");
  if (!lat.source_len) {
    throw std::invalid_argument("ratio mode requires source_len in the lattice");
  }
  auto t = static_cast<std::int32_t>(std::floor(*config.ratio * *lat.source_len));
  return std::max(1, t);
}

BeamCell initial_cell(const DatLattice& lat, std::int32_t s, BosPolicy bos,
                      TerminationMode term) {
  BeamEntry root;
  if (bos == BosPolicy::Strict) {
    double base = term == TerminationMode::Eos ? lat.word_logprob(0, lat.vocab.bos_id)
                                               : 0.0;
    if (base > kNegInf) root.support.push_back({0, base});
  } else {
    root.support.reserve(s + 1);
    for (std::int32_t sp = 0; sp <= s; ++sp) root.support.push_back({sp, 0.0});
  }
  BeamCell cell;
  if (!root.support.empty()) cell.entries.push_back(std::move(root));
  return cell;
}

BeamCell expand_cell(const DatLattice& lat, const BeamCell& prev, std::int32_t step,
                     std::int32_t top_v, std::int32_t beam_k) {
  BeamCell out;
  if (prev.entries.empty()) return out;

  const auto words = top_content_words(lat, step, top_v);

  std::vector<BeamEntry> children;
  children.reserve(prev.entries.size() * words.size());
  std::vector<double> terms;
  for (const auto& parent : prev.entries) {
    // One marginalization over the parent's ending steps serves every word.
    terms.clear();
    for (const auto& e : parent.support) {
      terms.push_back(e.log_mass + lat.link_logprob(e.step, step));
    }
    double incoming = logsumexp(terms);
    if (incoming == kNegInf) continue;

    for (std::int32_t v : words) {
      double mass = lat.word_logprob(step, v) + incoming;
      if (mass == kNegInf) continue;
      BeamEntry child;
      child.tokens = parent.tokens;
      child.tokens.push_back(v);
      child.support.push_back({step, mass});
      children.push_back(std::move(child));
    }
  }

  // Different parents can produce the same child sequence; their mass at this
  // step combines (without this, the top-K ranking would split it).
  std::stable_sort(children.begin(), children.end(),
                   [](const BeamEntry& a, const BeamEntry& b) {
                     return tokens_less(a.tokens, b.tokens);
                   });
  std::vector<BeamEntry> unique;
  std::vector<double> unique_scores;
  unique.reserve(children.size());
  unique_scores.reserve(children.size());
  for (auto& child : children) {
    if (!unique.empty() && unique.back().tokens == child.tokens) {
      double combined =
          log_add(unique.back().support[0].log_mass, child.support[0].log_mass);
      unique.back().support[0].log_mass = combined;
      unique_scores.back() = combined;
    } else {
      unique.push_back(std::move(child));
      unique_scores.push_back(unique.back().support[0].log_mass);
    }
  }

  sort_and_truncate(unique, unique_scores, beam_k);
  out.entries = std::move(unique);
  return out;
}

BeamCell merge_cells(const BeamCell& ended_at_s, const BeamCell& ended_before_s,
                     std::int32_t beam_k) {
  // Order matters below: taking the before-s side first keeps each union's
  // support ascending, since its steps all precede the at-s entry's step.
  std::vector<const BeamEntry*> merged;
  merged.reserve(ended_at_s.entries.size() + ended_before_s.entries.size());
  for (const auto& e : ended_before_s.entries) merged.push_back(&e);
  for (const auto& e : ended_at_s.entries) merged.push_back(&e);

  std::stable_sort(merged.begin(), merged.end(), [](const BeamEntry* a, const BeamEntry* b) {
    return tokens_less(a->tokens, b->tokens);
  });

  std::vector<BeamEntry> unique;
  unique.reserve(merged.size());
  for (const BeamEntry* e : merged) {
    if (!unique.empty() && unique.back().tokens == e->tokens) {
      // Same sequence reachable both before and exactly at s: keep one entry
      // with the union of the support maps (disjoint by construction).
      auto& dst = unique.back().support;
      dst.insert(dst.end(), e->support.begin(), e->support.end());
    } else {
      unique.push_back(*e);
    }
  }

  std::vector<double> totals;
  totals.reserve(unique.size());
  for (const auto& e : unique) totals.push_back(e.total());

  sort_and_truncate(unique, totals, beam_k);
  BeamCell out;
  out.entries = std::move(unique);
  return out;
}

std::vector<SeqMapCandidate> seqmap_decode(const DatLattice& lat,
                                           const DecodeConfig& config) {
  const std::int32_t S = lat.steps;
  const std::int32_t T = resolve_target_length(config, lat);
  if (T > max_feasible_length(lat, config.termination)) {
    throw InfeasibleLengthError("length " + std::to_string(T) + " does not fit in " +
                                std::to_string(S) + " steps");
  }
  const std::int32_t K = config.beam;
  const bool eos = config.termination == TerminationMode::Eos;

  // Two rolling columns of cells: the recursion at step s only reads step
  // s-1. Row 0 is the bos root, rebuilt per column under the verbatim policy.
  std::vector<BeamCell> prev_col(T + 1), cur_col(T + 1);
  prev_col[0] = initial_cell(lat, 0, config.bos, config.termination);

  // Cells of one column are independent: row t reads rows t-1 and t of the
  // previous column only, so each column is one parallel sweep and the merged
  // results are identical to sequential execution. The interleaved static
  // schedule keeps a row on the same thread across columns, so a row's cell
  // storage stays with the thread that reuses it.
#pragma omp parallel if (T >= 4)
  for (std::int32_t s = 1; s < S; ++s) {
    const std::int32_t t_max = std::min<std::int32_t>(T, s);
#pragma omp single
    cur_col[0] = initial_cell(lat, s, config.bos, config.termination);
#pragma omp for schedule(static)
    for (std::int32_t t = 1; t <= t_max; ++t) {
      BeamCell expanded = expand_cell(lat, prev_col[t - 1], s, config.expand, K);
      if (t == s) {
        cur_col[t] = std::move(expanded);  // no earlier placement exists
      } else {
        cur_col[t] = merge_cells(expanded, prev_col[t], K);
      }
    }
#pragma omp single
    {
      for (std::int32_t t = t_max + 1; t <= T; ++t) cur_col[t].entries.clear();
      std::swap(prev_col, cur_col);
    }
  }

  const BeamCell& final_cell = prev_col[T];

  std::vector<SeqMapCandidate> out;
  out.reserve(final_cell.entries.size());
  std::vector<double> fin_terms;
  for (const auto& entry : final_cell.entries) {
    double total;
    if (eos) {
      // Marginalize the final link into step S-1 and emit <eos> there. Mass
      // sitting at S-1 itself cannot reach <eos> and is dropped.
      fin_terms.clear();
      for (const auto& se : entry.support) {
        if (se.step >= S - 1) continue;
        fin_terms.push_back(se.log_mass + lat.link_logprob(se.step, S - 1));
      }
      double in = logsumexp(fin_terms);
      if (in == kNegInf) continue;
      total = in + lat.word_logprob(S - 1, lat.vocab.eos_id);
      if (total == kNegInf) continue;
    } else {
      total = entry.total();
      if (total == kNegInf) continue;
    }
    SeqMapCandidate cand;
    cand.tokens = entry.tokens;
    cand.total = total;
    cand.log_marginal = sequence_log_marginal(lat, entry.tokens, config.termination,
                                              config.bos);
    out.push_back(std::move(cand));
  }

  if (out.empty()) {
    throw NoValidSequenceError("beam search pruned every length-" + std::to_string(T) +
                               " sequence to probability zero");
  }

  std::sort(out.begin(), out.end(), [](const SeqMapCandidate& a, const SeqMapCandidate& b) {
    if (a.total != b.total) return a.total > b.total;
    return tokens_less(a.tokens, b.tokens);
  });
  return out;
}

}  // namespace datlc
