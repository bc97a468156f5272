#include "datlc/prob_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "datlc/errors.hpp"

namespace datlc {

std::int32_t max_feasible_length(const DatLattice& lattice, TerminationMode mode) {
  std::int32_t slack = mode == TerminationMode::Eos ? 2 : 1;
  std::int32_t t = lattice.steps - slack;
  return t > 0 ? t : 0;
}

double path_logprob(const DatLattice& lattice, const Path& path) {
  if (!path.invariants_hold()) {
    throw std::invalid_argument("path steps must be strictly increasing and match words");
  }
  if (path.linked_steps.empty()) {
    throw std::invalid_argument("path must visit at least one step");
  }
  double total = lattice.word_logprob(path.linked_steps[0], path.words[0]);
  for (std::size_t t = 1; t < path.linked_steps.size(); ++t) {
    total += lattice.link_logprob(path.linked_steps[t - 1], path.linked_steps[t]);
    total += lattice.word_logprob(path.linked_steps[t], path.words[t]);
  }
  return total;
}

namespace {

/// Start-of-sequence scores per step; the forward DP's row 0.
std::vector<double> initial_scores(const DatLattice& lat, TerminationMode term,
                                   BosPolicy bos) {
  std::vector<double> init(lat.steps, kNegInf);
  if (bos == BosPolicy::Strict) {
    init[0] = term == TerminationMode::Eos
                  ? lat.word_logprob(0, lat.vocab.bos_id)
                  : 0.0;
  } else {
    for (auto& x : init) x = 0.0;  // unit mass at every step
  }
  return init;
}

/// logsumexp over prev[s'] + l(s', s) for all s' < s. `scratch` is reused
/// across cells to keep the hot loop allocation-free.
double incoming_mass(const DatLattice& lat, const std::vector<double>& prev,
                     std::int32_t s, std::vector<double>& scratch) {
  scratch.clear();
  for (std::int32_t sp = 0; sp < s; ++sp) {
    scratch.push_back(prev[sp] + lat.link_logprob(sp, s));
  }
  return logsumexp(scratch);
}

}  // namespace

double sequence_log_marginal(const DatLattice& lattice,
                             const std::vector<std::int32_t>& tokens,
                             TerminationMode termination, BosPolicy bos) {
  if (tokens.empty()) throw std::invalid_argument("token sequence must be non-empty");
  for (std::int32_t v : tokens) {
    if (v < 0 || v >= lattice.vocab.size()) {
      throw std::out_of_range("token id " + std::to_string(v) + " out of vocab");
    }
    if (lattice.vocab.is_structural(v)) {
      throw std::invalid_argument("tokens must be content tokens (no bos/eos)");
    }
  }
  const std::int32_t S = lattice.steps;
  const std::int32_t T = static_cast<std::int32_t>(tokens.size());
  if (T > max_feasible_length(lattice, termination)) {
    throw InfeasibleLengthError("length " + std::to_string(T) + " does not fit in " +
                                std::to_string(S) + " steps");
  }

  std::vector<double> prev = initial_scores(lattice, termination, bos);
  std::vector<double> cur(S, kNegInf);

  // Cells of one row only read the previous row, so each row is a parallel
  // sweep; one team serves all rows, with the implicit barrier of the inner
  // loop separating them.
#pragma omp parallel if (S >= 64)
  {
    std::vector<double> scratch;
    scratch.reserve(S);
    for (std::int32_t t = 0; t < T; ++t) {
#pragma omp for schedule(static)
      for (std::int32_t s = 1; s < S; ++s) {
        double in = incoming_mass(lattice, prev, s, scratch);
        cur[s] = in == kNegInf ? kNegInf : lattice.word_logprob(s, tokens[t]) + in;
      }
#pragma omp single
      {
        cur[0] = kNegInf;  // step 0 is never a content step
        std::swap(prev, cur);
      }
    }
  }

  if (termination == TerminationMode::Eos) {
    std::vector<double> scratch;
    scratch.reserve(S);
    double in = incoming_mass(lattice, prev, S - 1, scratch);
    return in == kNegInf ? kNegInf : lattice.word_logprob(S - 1, lattice.vocab.eos_id) + in;
  }
  return logsumexp(prev);
}

}  // namespace datlc
