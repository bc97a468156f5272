#include "datlc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "datlc/errors.hpp"
#include "datlc/prob_core.hpp"

namespace datlc {

namespace {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

double linear(double logprob) { return std::exp(logprob); }

void check_caps(const DatLattice& lat, std::int32_t target_len, const OracleCaps& caps) {
  if (lat.steps > caps.max_steps) {
    throw EnumerationCapError("refusing to enumerate: lattice has " +
                              std::to_string(lat.steps) + " steps, cap is " +
                              std::to_string(caps.max_steps) +
                              " (up to 2^(S-2) = " +
                              std::to_string(1LL << std::max(0, lat.steps - 2)) +
                              " walks)");
  }
  if (target_len > caps.max_length) {
    throw EnumerationCapError("refusing to enumerate: length " +
                              std::to_string(target_len) + " exceeds cap " +
                              std::to_string(caps.max_length));
  }
}

/// Visit every strictly increasing T-tuple of content steps in [1, last],
/// in lexicographic order.
void for_each_chain(std::int32_t last, std::int32_t len,
                    const std::function<void(const std::vector<std::int32_t>&)>& visit) {
  std::vector<std::int32_t> chain(len);
  std::function<void(std::int32_t, std::int32_t)> rec = [&](std::int32_t pos,
                                                            std::int32_t from) {
    if (pos == len) {
      visit(chain);
      return;
    }
    for (std::int32_t s = from; s <= last - (len - 1 - pos); ++s) {
      chain[pos] = s;
      rec(pos + 1, s + 1);
    }
  };
  rec(0, 1);
}

/// Product of the link factors along a content chain: anchor link (or the
/// verbatim sum over earlier anchors), interior links, and in eos mode the
/// final link into the last step.
double chain_link_weight(const DatLattice& lat, const std::vector<std::int32_t>& chain,
                         TerminationMode term, BosPolicy bos) {
  double first;
  if (bos == BosPolicy::Strict) {
    first = linear(lat.link_logprob(0, chain[0]));
  } else {
    first = 0.0;
    for (std::int32_t sp = 0; sp < chain[0]; ++sp) {
      first += linear(lat.link_logprob(sp, chain[0]));
    }
  }
  double w = first;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    w *= linear(lat.link_logprob(chain[i - 1], chain[i]));
  }
  if (term == TerminationMode::Eos) {
    w *= linear(lat.link_logprob(chain.back(), lat.steps - 1));
  }
  return w;
}

}  // namespace

std::vector<EnumeratedPath> enumerate_paths(const DatLattice& lat,
                                            std::int32_t target_len,
                                            TerminationMode term, WordTreatment words,
                                            const std::vector<std::int32_t>& fixed_tokens,
                                            const OracleCaps& caps) {
  if (target_len < 1) throw std::invalid_argument("target length must be >= 1");
  check_caps(lat, target_len, caps);
  if (words == WordTreatment::FixedTokens &&
      static_cast<std::int32_t>(fixed_tokens.size()) != target_len) {
    throw std::invalid_argument("fixed_tokens must have target_len entries");
  }

  const std::int32_t S = lat.steps;
  const bool eos = term == TerminationMode::Eos;
  const std::int32_t last = eos ? S - 2 : S - 1;

  std::vector<EnumeratedPath> out;
  for_each_chain(last, target_len, [&](const std::vector<std::int32_t>& chain) {
    EnumeratedPath p;
    p.probability = chain_link_weight(lat, chain, term, BosPolicy::Strict);
    p.steps.push_back(0);
    for (std::int32_t s : chain) p.steps.push_back(s);
    if (eos) p.steps.push_back(S - 1);

    switch (words) {
      case WordTreatment::LinkMassOnly:
        break;
      case WordTreatment::SumOverWords:
        for (std::int32_t s : p.steps) {
          double row_mass = 0.0;
          for (double x : lat.word_row(s)) row_mass += linear(x);
          p.probability *= row_mass;
        }
        break;
      case WordTreatment::FixedTokens: {
        p.words.push_back(lat.vocab.bos_id);
        p.probability *= linear(lat.word_logprob(0, lat.vocab.bos_id));
        for (std::int32_t t = 0; t < target_len; ++t) {
          p.words.push_back(fixed_tokens[t]);
          p.probability *= linear(lat.word_logprob(chain[t], fixed_tokens[t]));
        }
        if (eos) {
          p.words.push_back(lat.vocab.eos_id);
          p.probability *= linear(lat.word_logprob(S - 1, lat.vocab.eos_id));
        }
        break;
      }
    }
    out.push_back(std::move(p));
  });
  return out;
}

double total_complete_path_mass(const DatLattice& lat, const OracleCaps& caps) {
  check_caps(lat, 1, caps);
  const std::int32_t S = lat.steps;

  std::vector<double> row_mass(S, 0.0);
  for (std::int32_t s = 0; s < S; ++s) {
    double m = 0.0;
    for (double x : lat.word_row(s)) m += linear(x);
    row_mass[s] = m;
  }

  KahanSum total;
  std::function<void(std::int32_t, double)> walk = [&](std::int32_t s, double mass) {
    if (s == S - 1) {
      total.add(mass);
      return;
    }
    for (std::int32_t j = s + 1; j < S; ++j) {
      double l = linear(lat.link_logprob(s, j));
      if (l == 0.0) continue;
      walk(j, mass * l * row_mass[j]);
    }
  };
  walk(0, row_mass[0]);
  return total.sum;
}

double oracle_sequence_marginal(const DatLattice& lat,
                                const std::vector<std::int32_t>& tokens,
                                TerminationMode term, BosPolicy bos,
                                const OracleCaps& caps) {
  if (tokens.empty()) throw std::invalid_argument("token sequence must be non-empty");
  const auto T = static_cast<std::int32_t>(tokens.size());
  check_caps(lat, T, caps);
  const std::int32_t S = lat.steps;
  const bool eos = term == TerminationMode::Eos;
  const std::int32_t last = eos ? S - 2 : S - 1;

  double structural = 1.0;
  if (eos) {
    structural *= linear(lat.word_logprob(S - 1, lat.vocab.eos_id));
    if (bos == BosPolicy::Strict) {
      structural *= linear(lat.word_logprob(0, lat.vocab.bos_id));
    }
  }

  KahanSum total;
  for_each_chain(last, T, [&](const std::vector<std::int32_t>& chain) {
    double p = chain_link_weight(lat, chain, term, bos);
    for (std::int32_t t = 0; t < T; ++t) {
      p *= linear(lat.word_logprob(chain[t], tokens[t]));
    }
    total.add(p * structural);
  });
  return total.sum;
}

OraclePathMapResult oracle_pathmap(const DatLattice& lat, std::int32_t target_len,
                                   TerminationMode term, const OracleCaps& caps) {
  if (target_len < 1) throw std::invalid_argument("target length must be >= 1");
  check_caps(lat, target_len, caps);
  if (target_len > max_feasible_length(lat, term)) {
    throw InfeasibleLengthError("length " + std::to_string(target_len) +
                                " does not fit in " + std::to_string(lat.steps) +
                                " steps");
  }
  const std::int32_t S = lat.steps;
  const bool eos = term == TerminationMode::Eos;
  const std::int32_t last = eos ? S - 2 : S - 1;

  // Word choice is separable: per chain, each step takes its own best
  // content word (ties to the smaller token id).
  const auto content = lat.vocab.content_ids();
  std::vector<double> best_word(S, 0.0);
  std::vector<std::int32_t> best_id(S, -1);
  for (std::int32_t s = 0; s < S; ++s) {
    double best = -1.0;
    std::int32_t id = -1;
    for (std::int32_t v : content) {
      double w = linear(lat.word_logprob(s, v));
      if (w > best) {
        best = w;
        id = v;
      }
    }
    best_word[s] = best;
    best_id[s] = id;
  }

  double structural = 1.0;
  if (eos) {
    structural = linear(lat.word_logprob(0, lat.vocab.bos_id)) *
                 linear(lat.word_logprob(S - 1, lat.vocab.eos_id));
  }

  OraclePathMapResult best;
  best.probability = 0.0;
  bool found = false;

  for_each_chain(last, target_len, [&](const std::vector<std::int32_t>& chain) {
    double p = chain_link_weight(lat, chain, term, BosPolicy::Strict) * structural;
    std::vector<std::int32_t> toks(target_len);
    for (std::int32_t t = 0; t < target_len; ++t) {
      p *= best_word[chain[t]];
      toks[t] = best_id[chain[t]];
    }
    if (p == 0.0) return;

    bool better;
    if (!found || p > best.probability) {
      better = true;
    } else if (p < best.probability) {
      better = false;
    } else if (chain.back() != best.content_steps.back()) {
      better = chain.back() < best.content_steps.back();
    } else if (chain != best.content_steps) {
      better = std::lexicographical_compare(chain.begin(), chain.end(),
                                            best.content_steps.begin(),
                                            best.content_steps.end());
    } else {
      better = std::lexicographical_compare(toks.begin(), toks.end(),
                                            best.tokens.begin(), best.tokens.end());
    }
    if (better) {
      best.content_steps = chain;
      best.tokens = std::move(toks);
      best.probability = p;
      found = true;
    }
  });

  if (!found) {
    throw NoValidPathError("every length-" + std::to_string(target_len) +
                           " placement has probability zero");
  }
  return best;
}

std::vector<OracleSequence> oracle_seqmap(const DatLattice& lat, std::int32_t target_len,
                                          TerminationMode term, BosPolicy bos,
                                          const OracleCaps& caps) {
  if (target_len < 1) throw std::invalid_argument("target length must be >= 1");
  check_caps(lat, target_len, caps);

  const auto content = lat.vocab.content_ids();
  std::int64_t count = 1;
  for (std::int32_t t = 0; t < target_len; ++t) {
    count *= static_cast<std::int64_t>(content.size());
    if (count > caps.max_sequences) {
      throw EnumerationCapError(
          "refusing to enumerate " + std::to_string(content.size()) + "^" +
          std::to_string(target_len) + " sequences (cap " +
          std::to_string(caps.max_sequences) + ")");
    }
  }

  std::vector<OracleSequence> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> odo(target_len, 0);
  std::vector<std::int32_t> tokens(target_len);
  while (true) {
    for (std::int32_t t = 0; t < target_len; ++t) tokens[t] = content[odo[t]];
    out.push_back({tokens, oracle_sequence_marginal(lat, tokens, term, bos, caps)});

    std::int32_t pos = target_len - 1;
    while (pos >= 0 && ++odo[pos] == content.size()) {
      odo[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const OracleSequence& a, const OracleSequence& b) {
                     return a.marginal > b.marginal;  // stable: lex order on ties
                   });
  return out;
}

}  // namespace datlc
