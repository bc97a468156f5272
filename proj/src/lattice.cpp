#include "datlc/lattice.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

namespace datlc {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.what;
    if (v.step >= 0) out << " (step " << v.step << ")";
    if (v.magnitude != 0.0) out << " magnitude=" << v.magnitude;
    out << ": " << v.message << "\n";
  }
  return out.str();
}

namespace {

void check_row(std::span<const double> row, const char* kind, std::int32_t step,
               ValidationReport& report) {
  bool entries_ok = true;
  for (std::size_t i = 0; i < row.size(); ++i) {
    double x = row[i];
    if (std::isnan(x)) {
      report.violations.push_back({std::string(kind) + "_entry_nan",
                                   step, 0.0,
                                   "entry " + std::to_string(i) + " is NaN"});
      entries_ok = false;
    } else if (x > kEntryTolerance) {
      report.violations.push_back({std::string(kind) + "_entry_positive",
                                   step, x,
                                   "entry " + std::to_string(i) +
                                       " exceeds 0 (log-probability)"});
      entries_ok = false;
    }
  }
  if (!entries_ok) return;  // normalization check would be meaningless
  double lse = logsumexp(row);
  if (!(std::fabs(lse) <= kRowNormTolerance)) {
    report.violations.push_back({std::string(kind) + "_normalization", step,
                                 std::fabs(lse),
                                 "row logsumexp = " + std::to_string(lse) +
                                     ", expected 0"});
  }
}

}  // namespace

ValidationReport validate(const DatLattice& lattice) {
  ValidationReport report;
  const std::int32_t S = lattice.steps;
  const std::int32_t V = lattice.vocab.size();

  if (S < 1) {
    report.violations.push_back({"steps_positive", -1, 0.0, "steps must be >= 1"});
    return report;
  }

  // Vocab invariants.
  std::unordered_set<std::string> seen;
  for (std::int32_t v = 0; v < V; ++v) {
    const std::string& tok = lattice.vocab.tokens[v];
    if (tok.empty()) {
      report.violations.push_back({"vocab_token_empty", -1, 0.0,
                                   "token " + std::to_string(v) + " is empty"});
    }
    if (!seen.insert(tok).second) {
      report.violations.push_back({"vocab_token_duplicate", -1, 0.0,
                                   "token \"" + tok + "\" appears twice"});
    }
  }
  if (lattice.vocab.bos_id < 0 || lattice.vocab.bos_id >= V) {
    report.violations.push_back({"bos_id_range", -1, 0.0, "bos_id out of range"});
  }
  if (lattice.vocab.eos_id < 0 || lattice.vocab.eos_id >= V) {
    report.violations.push_back({"eos_id_range", -1, 0.0, "eos_id out of range"});
  }
  if (lattice.vocab.bos_id == lattice.vocab.eos_id) {
    report.violations.push_back({"bos_eos_distinct", -1, 0.0,
                                 "bos_id and eos_id must differ"});
  }

  // Shapes.
  if (lattice.word_logprobs.size() != static_cast<std::size_t>(S) * V) {
    report.violations.push_back({"word_matrix_shape", -1, 0.0,
                                 "word_logprobs must be steps x |vocab|"});
    return report;
  }
  if (lattice.link_logprobs.size() != static_cast<std::size_t>(S > 0 ? S - 1 : 0)) {
    report.violations.push_back({"link_rows_count", -1, 0.0,
                                 "expected " + std::to_string(S - 1) + " link rows"});
    return report;
  }

  for (std::int32_t s = 0; s < S; ++s) {
    check_row(lattice.word_row(s), "word_row", s, report);
  }
  for (std::int32_t s = 0; s + 1 < S; ++s) {
    const auto& row = lattice.link_logprobs[s];
    if (row.size() != static_cast<std::size_t>(S - 1 - s)) {
      report.violations.push_back({"link_row_shape", s, 0.0,
                                   "row must have " + std::to_string(S - 1 - s) +
                                       " entries"});
      continue;
    }
    check_row(row, "link_row", s, report);
  }

  if (lattice.source_tokens && lattice.source_len &&
      static_cast<std::int32_t>(lattice.source_tokens->size()) != *lattice.source_len) {
    report.violations.push_back(
        {"source_len_mismatch", -1, 0.0,
         "source_tokens has " + std::to_string(lattice.source_tokens->size()) +
             " tokens but source_len = " + std::to_string(*lattice.source_len)});
  }

  return report;
}

void renormalize(DatLattice& lattice) {
  const std::int32_t V = lattice.vocab.size();
  for (std::int32_t s = 0; s < lattice.steps; ++s) {
    auto row = std::span<double>(
        lattice.word_logprobs.data() + static_cast<std::size_t>(s) * V, V);
    double lse = logsumexp({row.data(), row.size()});
    if (lse == kNegInf) continue;  // nothing to scale
    for (double& x : row) x -= lse;
  }
  for (auto& row : lattice.link_logprobs) {
    double lse = logsumexp(row);
    if (lse == kNegInf) continue;
    for (double& x : row) x -= lse;
  }
}

}  // namespace datlc
