#include "datlc/serial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "datlc/errors.hpp"

namespace datlc::serial {

namespace {

bool tokens_less(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

double sequence_log_marginal(const DatLattice& lat,
                             const std::vector<std::int32_t>& tokens,
                             TerminationMode term, BosPolicy bos) {
  if (tokens.empty()) throw std::invalid_argument("token sequence must be non-empty");
  for (std::int32_t v : tokens) {
    if (v < 0 || v >= lat.vocab.size()) throw std::out_of_range("token id out of vocab");
    if (lat.vocab.is_structural(v)) {
      throw std::invalid_argument("tokens must be content tokens (no bos/eos)");
    }
  }
  const std::int32_t S = lat.steps;
  const auto T = static_cast<std::int32_t>(tokens.size());
  if (T > max_feasible_length(lat, term)) {
    throw InfeasibleLengthError("length " + std::to_string(T) + " does not fit in " +
                                std::to_string(S) + " steps");
  }
  const bool eos = term == TerminationMode::Eos;

  std::vector<double> prev(S, kNegInf);
  if (bos == BosPolicy::Strict) {
    prev[0] = eos ? lat.word_logprob(0, lat.vocab.bos_id) : 0.0;
  } else {
    std::fill(prev.begin(), prev.end(), 0.0);
  }

  auto incoming = [&](const std::vector<double>& row, std::int32_t s) {
    std::vector<double> terms;
    terms.reserve(s);
    for (std::int32_t sp = 0; sp < s; ++sp) {
      terms.push_back(row[sp] + lat.link_logprob(sp, s));
    }
    return logsumexp(terms);
  };

  std::vector<double> cur(S, kNegInf);
  for (std::int32_t t = 0; t < T; ++t) {
    cur[0] = kNegInf;
    for (std::int32_t s = 1; s < S; ++s) {
      double in = incoming(prev, s);
      cur[s] = in == kNegInf ? kNegInf : lat.word_logprob(s, tokens[t]) + in;
    }
    std::swap(prev, cur);
  }

  if (eos) {
    double in = incoming(prev, S - 1);
    return in == kNegInf ? kNegInf
                         : lat.word_logprob(S - 1, lat.vocab.eos_id) + in;
  }
  return logsumexp(prev);
}

PathMapResult pathmap_decode(const DatLattice& lat, std::int32_t target_len,
                             TerminationMode term) {
  const std::int32_t S = lat.steps;
  const std::int32_t T = target_len;
  if (T < 1) throw std::invalid_argument("target length must be >= 1");
  if (T > max_feasible_length(lat, term)) {
    throw InfeasibleLengthError("length " + std::to_string(T) + " does not fit in " +
                                std::to_string(S) + " steps");
  }
  const bool eos = term == TerminationMode::Eos;

  const auto content = lat.vocab.content_ids();
  std::vector<double> node(S, kNegInf);
  std::vector<std::int32_t> node_id(S, -1);
  for (std::int32_t s = 0; s < S; ++s) {
    for (std::int32_t v : content) {
      if (lat.word_logprob(s, v) > node[s]) {
        node[s] = lat.word_logprob(s, v);
        node_id[s] = v;
      }
    }
  }
  const double bos_base = eos ? lat.word_logprob(0, lat.vocab.bos_id) : 0.0;
  auto fin = [&](std::int32_t s) {
    if (!eos) return 0.0;
    if (s >= S - 1) return kNegInf;
    return lat.link_logprob(s, S - 1) + lat.word_logprob(S - 1, lat.vocab.eos_id);
  };

  std::vector<std::vector<double>> fwd(T + 1, std::vector<double>(S, kNegInf));
  for (std::int32_t s = 1; s < S; ++s) {
    fwd[1][s] = bos_base + lat.link_logprob(0, s) + node[s];
  }
  for (std::int32_t t = 2; t <= T; ++t) {
    for (std::int32_t s = 1; s < S; ++s) {
      double best = kNegInf;
      for (std::int32_t sp = 1; sp < s; ++sp) {
        double v = fwd[t - 1][sp] + lat.link_logprob(sp, s);
        if (v > best) best = v;
      }
      fwd[t][s] = best == kNegInf ? kNegInf : node[s] + best;
    }
  }

  double total = kNegInf;
  std::int32_t end = -1;
  for (std::int32_t s = 1; s < S; ++s) {
    if (fwd[T][s] == kNegInf) continue;
    double v = fwd[T][s] + fin(s);
    if (v > total) {
      total = v;
      end = s;
    }
  }
  if (total == kNegInf) {
    throw NoValidPathError("every length-" + std::to_string(T) +
                           " placement has probability zero");
  }

  std::vector<std::vector<double>> bwd(T + 1, std::vector<double>(S, kNegInf));
  bwd[T][end] = fin(end);
  for (std::int32_t t = T - 1; t >= 1; --t) {
    for (std::int32_t s = 1; s < S; ++s) {
      double best = kNegInf;
      for (std::int32_t sn = s + 1; sn < S; ++sn) {
        if (bwd[t + 1][sn] == kNegInf) continue;
        double v = lat.link_logprob(s, sn) + node[sn] + bwd[t + 1][sn];
        if (v > best) best = v;
      }
      bwd[t][s] = best;
    }
  }

  std::vector<std::int32_t> steps(T);
  std::int32_t prev = 0;
  for (std::int32_t t = 1; t <= T; ++t) {
    double best = kNegInf;
    std::int32_t pick = -1;
    for (std::int32_t s = prev + 1; s < S; ++s) {
      if (bwd[t][s] == kNegInf) continue;
      double incr = t == 1 ? bos_base + lat.link_logprob(0, s) + node[s]
                           : lat.link_logprob(prev, s) + node[s];
      double v = incr + bwd[t][s];
      if (v > best) {
        best = v;
        pick = s;
      }
    }
    if (pick < 0) throw NoValidPathError("path reconstruction lost the optimum");
    steps[t - 1] = pick;
    prev = pick;
  }

  PathMapResult result;
  result.sequence.tokens.resize(T);
  for (std::int32_t t = 0; t < T; ++t) result.sequence.tokens[t] = node_id[steps[t]];
  result.sequence.log_best_path = total;
  result.sequence.log_marginal =
      serial::sequence_log_marginal(lat, result.sequence.tokens, term, BosPolicy::Strict);
  if (eos) {
    result.path.linked_steps.push_back(0);
    result.path.words.push_back(lat.vocab.bos_id);
    for (std::int32_t t = 0; t < T; ++t) {
      result.path.linked_steps.push_back(steps[t]);
      result.path.words.push_back(result.sequence.tokens[t]);
    }
    result.path.linked_steps.push_back(S - 1);
    result.path.words.push_back(lat.vocab.eos_id);
  } else {
    result.path.linked_steps = steps;
    result.path.words = result.sequence.tokens;
  }
  return result;
}

std::vector<SeqMapCandidate> seqmap_decode(const DatLattice& lat,
                                           const DecodeConfig& config) {
  const std::int32_t S = lat.steps;
  const std::int32_t T = resolve_target_length(config, lat);
  if (T > max_feasible_length(lat, config.termination)) {
    throw InfeasibleLengthError("length " + std::to_string(T) + " does not fit in " +
                                std::to_string(S) + " steps");
  }
  const bool eos = config.termination == TerminationMode::Eos;

  // Same per-cell operations as the parallel kernel, plainly sequential.
  std::vector<BeamCell> prev_col(T + 1), cur_col(T + 1);
  prev_col[0] = initial_cell(lat, 0, config.bos, config.termination);
  for (std::int32_t s = 1; s < S; ++s) {
    cur_col[0] = initial_cell(lat, s, config.bos, config.termination);
    const std::int32_t t_max = std::min<std::int32_t>(T, s);
    for (std::int32_t t = 1; t <= t_max; ++t) {
      BeamCell expanded = expand_cell(lat, prev_col[t - 1], s, config.expand, config.beam);
      cur_col[t] = t == s ? std::move(expanded)
                          : merge_cells(expanded, prev_col[t], config.beam);
    }
    for (std::int32_t t = t_max + 1; t <= T; ++t) cur_col[t].entries.clear();
    std::swap(prev_col, cur_col);
  }

  std::vector<SeqMapCandidate> out;
  for (const auto& entry : prev_col[T].entries) {
    double total;
    if (eos) {
      std::vector<double> terms;
      for (const auto& se : entry.support) {
        if (se.step >= S - 1) continue;
        terms.push_back(se.log_mass + lat.link_logprob(se.step, S - 1));
      }
      double in = logsumexp(terms);
      if (in == kNegInf) continue;
      total = in + lat.word_logprob(S - 1, lat.vocab.eos_id);
      if (total == kNegInf) continue;
    } else {
      total = entry.total();
      if (total == kNegInf) continue;
    }
    out.push_back({entry.tokens, total,
                   serial::sequence_log_marginal(lat, entry.tokens, config.termination,
                                                 config.bos)});
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

}  // namespace datlc::serial
