#include "datlc/pathmap.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "datlc/errors.hpp"
#include "datlc/prob_core.hpp"

namespace datlc {

namespace {

struct StepWords {
  std::vector<double> best_logprob;   // per step, over content vocab
  std::vector<std::int32_t> best_id;  // ties -> smaller token id
};

StepWords best_content_words(const DatLattice& lat) {
  const std::int32_t S = lat.steps;
  StepWords w;
  w.best_logprob.assign(S, kNegInf);
  w.best_id.assign(S, -1);
  const auto content = lat.vocab.content_ids();
#pragma omp parallel for schedule(static) \
    if (static_cast<std::size_t>(S) * lat.vocab.tokens.size() >= (1u << 16))
  for (std::int32_t s = 0; s < S; ++s) {
    auto row = lat.word_row(s);
    double best = kNegInf;
    std::int32_t best_id = -1;
    for (std::int32_t v : content) {
      if (row[v] > best) {
        best = row[v];
        best_id = v;
      }
    }
    w.best_logprob[s] = best;
    w.best_id[s] = best_id;
  }
  return w;
}

}  // namespace

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
  const StepWords words = best_content_words(lat);
  const double bos_base = eos ? lat.word_logprob(0, lat.vocab.bos_id) : 0.0;

  auto fin = [&](std::int32_t s) {
    if (!eos) return 0.0;
    if (s >= S - 1) return kNegInf;  // no link from the last step to itself
    return lat.link_logprob(s, S - 1) + lat.word_logprob(S - 1, lat.vocab.eos_id);
  };

  // Forward pass: best score of placing content positions 1..t with position
  // t at step s. Row t depends only on row t-1, so each row is one parallel
  // sweep; the max reduction per cell is cheap, so this only pays off on
  // large lattices.
  std::vector<std::vector<double>> fwd(T + 1, std::vector<double>(S, kNegInf));
  for (std::int32_t s = 1; s < S; ++s) {
    fwd[1][s] = bos_base + lat.link_logprob(0, s) + words.best_logprob[s];
  }
#pragma omp parallel if (S >= 256)
  for (std::int32_t t = 2; t <= T; ++t) {
#pragma omp for schedule(static)
    for (std::int32_t s = 1; s < S; ++s) {
      double best = kNegInf;
      for (std::int32_t sp = 1; sp < s; ++sp) {
        if (fwd[t - 1][sp] == kNegInf) continue;
        double v = fwd[t - 1][sp] + lat.link_logprob(sp, s);
        if (v > best) best = v;
      }
      fwd[t][s] = best == kNegInf ? kNegInf : words.best_logprob[s] + best;
    }
  }

  double total = kNegInf;
  std::int32_t end = -1;
  for (std::int32_t s = 1; s < S; ++s) {
    if (fwd[T][s] == kNegInf) continue;
    double v = fwd[T][s] + fin(s);
    if (v > total) {  // strict: ties keep the smaller end step
      total = v;
      end = s;
    }
  }
  if (total == kNegInf) {
    throw NoValidPathError("every length-" + std::to_string(T) +
                           " placement has probability zero");
  }

  // Backward pass conditioned on the chosen end step, so the reconstruction
  // below can pick the lexicographically smallest optimal step vector from
  // the front.
  std::vector<std::vector<double>> bwd(T + 1, std::vector<double>(S, kNegInf));
  bwd[T][end] = fin(end);
#pragma omp parallel if (S >= 256)
  for (std::int32_t t = T - 1; t >= 1; --t) {
#pragma omp for schedule(static)
    for (std::int32_t s = 1; s < S; ++s) {
      double best = kNegInf;
      for (std::int32_t sn = s + 1; sn < S; ++sn) {
        if (bwd[t + 1][sn] == kNegInf) continue;
        double v = lat.link_logprob(s, sn) + words.best_logprob[sn] + bwd[t + 1][sn];
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
      double incr = t == 1 ? bos_base + lat.link_logprob(0, s) + words.best_logprob[s]
                           : lat.link_logprob(prev, s) + words.best_logprob[s];
      double v = incr + bwd[t][s];
      if (v > best) {
        best = v;
        pick = s;
      }
    }
    if (pick < 0) {
      throw NoValidPathError("path reconstruction lost the optimum (position " +
                             std::to_string(t) + ")");
    }
    steps[t - 1] = pick;
    prev = pick;
  }

  PathMapResult result;
  result.sequence.tokens.resize(T);
  for (std::int32_t t = 0; t < T; ++t) {
    result.sequence.tokens[t] = words.best_id[steps[t]];
  }
  result.sequence.log_best_path = total;
  result.sequence.log_marginal =
      sequence_log_marginal(lat, result.sequence.tokens, term, BosPolicy::Strict);

  if (eos) {
    result.path.linked_steps.reserve(T + 2);
    result.path.words.reserve(T + 2);
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

}  // namespace datlc
