#include "datlc/generate.hpp"

#include <cmath>
#include <stdexcept>

#include "datlc/splitmix64.hpp"

namespace datlc {

namespace {

/// Write the log-probabilities of a random simplex point into row[slot] for
/// each listed slot; untouched slots keep their -inf.
template <typename SlotRange>
void fill_simplex(SplitMix64& rng, double inv_concentration, const SlotRange& slots,
                  double* row) {
  std::vector<double> raw;
  raw.reserve(slots.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    double u = rng.next_unit();
    double e = -std::log1p(-u);  // Exp(1)
    raw.push_back(std::pow(e, inv_concentration));
    sum += raw.back();
  }
  std::size_t i = 0;
  for (auto slot : slots) {
    row[static_cast<std::size_t>(slot)] = std::log(raw[i] / sum);
    ++i;
  }
}

}  // namespace

DatLattice generate(const GenSpec& spec) {
  if (spec.steps < 3) throw std::invalid_argument("GenSpec.steps must be >= 3");
  if (spec.vocab_size < 3) throw std::invalid_argument("GenSpec.vocab_size must be >= 3");
  if (!(spec.concentration > 0.0)) {
    throw std::invalid_argument("GenSpec.concentration must be positive");
  }

  const std::int32_t S = spec.steps;
  const std::int32_t V = spec.vocab_size;

  DatLattice lat;
  lat.steps = S;
  lat.vocab.tokens.reserve(V);
  lat.vocab.tokens.push_back("<bos>");
  lat.vocab.tokens.push_back("<eos>");
  for (std::int32_t v = 2; v < V; ++v) {
    lat.vocab.tokens.push_back("tok" + std::to_string(v - 1));
  }
  lat.vocab.bos_id = 0;
  lat.vocab.eos_id = 1;

  lat.word_logprobs.assign(static_cast<std::size_t>(S) * V, kNegInf);

  SplitMix64 rng(spec.seed);
  const double inv_c = 1.0 / spec.concentration;
  const auto content = lat.vocab.content_ids();

  // Pinned endpoints, then free interior word rows over the content vocab.
  lat.word_logprobs[0 + lat.vocab.bos_id] = 0.0;
  lat.word_logprobs[static_cast<std::size_t>(S - 1) * V + lat.vocab.eos_id] = 0.0;
  for (std::int32_t s = 1; s + 1 < S; ++s) {
    fill_simplex(rng, inv_c, content,
                 lat.word_logprobs.data() + static_cast<std::size_t>(s) * V);
  }

  lat.link_logprobs.resize(S - 1);
  for (std::int32_t s = 0; s + 1 < S; ++s) {
    const std::size_t width = static_cast<std::size_t>(S - 1 - s);
    auto& row = lat.link_logprobs[s];
    row.assign(width, kNegInf);
    std::vector<std::size_t> slots(width);
    for (std::size_t i = 0; i < width; ++i) slots[i] = i;
    fill_simplex(rng, inv_c, slots, row.data());
  }

  return lat;
}

}  // namespace datlc
