/**
 * datlc command line: generate / validate / decode / eval / oracle-check /
 * bench. Reports are machine-readable JSON on stdout (deterministic: rerun a
 * command and the bytes match, unless --timings is on); --pretty switches the
 * table-like commands to human-readable text.
 *
 * Exit codes: 0 success, 1 property or verification failure, 2 usage error,
 * 3 infeasible request.
 */

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "datlc/errors.hpp"
#include "datlc/generate.hpp"
#include "datlc/lattice_io.hpp"
#include "datlc/metrics.hpp"
#include "datlc/oracle.hpp"
#include "datlc/pathmap.hpp"
#include "datlc/prob_core.hpp"
#include "datlc/rerank.hpp"
#include "datlc/seqmap.hpp"
#include "datlc/splitmix64.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace datlc;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

json finite_or_string(double x) {
  if (x == kNegInf) return json("-inf");
  return json(x);
}

std::vector<std::string> id_strings(const Vocab& vocab,
                                    const std::vector<std::int32_t>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (std::int32_t id : ids) out.push_back(vocab.tokens[id]);
  return out;
}

std::vector<std::int32_t> one_based(const std::vector<std::int32_t>& steps) {
  std::vector<std::int32_t> out;
  out.reserve(steps.size());
  for (std::int32_t s : steps) out.push_back(s + 1);
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void emit(const json& doc) { std::cout << doc.dump(1) << "\n"; }

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
  GenSpec spec;
  std::int32_t source_len = 0;  // > 0: record it, enabling --ratio decoding
  std::string out;
};

int run_gen(const GenArgs& args) {
  DatLattice lat = generate(args.spec);
  if (args.source_len > 0) lat.source_len = args.source_len;
  std::string bytes = write_lattice(lat);
  if (args.out.empty()) {
    std::cout << bytes;
  } else {
    std::ofstream f(args.out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot open output file: " + args.out);
    f << bytes;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int run_validate(const std::string& path) {
  json doc;
  doc["version"] = 1;
  doc["command"] = "validate";
  doc["file"] = path;
  try {
    read_lattice_file(path);
  } catch (const ValidationError& e) {
    doc["valid"] = false;
    json violations = json::array();
    for (const auto& v : e.report().violations) {
      json item;
      item["what"] = v.what;
      if (v.step >= 0) item["step"] = v.step;
      if (v.magnitude != 0.0) item["magnitude"] = v.magnitude;
      item["message"] = v.message;
      violations.push_back(std::move(item));
    }
    doc["violations"] = std::move(violations);
    emit(doc);
    return kExitFailure;
  }
  doc["valid"] = true;
  doc["violations"] = json::array();
  emit(doc);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

struct DecodeArgs {
  std::string lattice_path;
  std::string objective = "seqmap";
  std::int32_t length = -1;
  double ratio = -1.0;
  std::int32_t beam = 20;
  std::int32_t expand = 5;
  std::string termination = "eos";
  std::string bos = "strict";
  std::string rerank = "marginal";
  std::int32_t top_k_out = -1;
  bool renormalize = false;
  bool timings = false;
  bool pretty = false;
};

TerminationMode parse_termination(const std::string& s) {
  if (s == "eos") return TerminationMode::Eos;
  if (s == "free") return TerminationMode::Free;
  throw std::invalid_argument("unknown termination mode: " + s);
}

BosPolicy parse_bos(const std::string& s) {
  if (s == "strict") return BosPolicy::Strict;
  if (s == "verbatim") return BosPolicy::Verbatim;
  throw std::invalid_argument("unknown bos policy: " + s);
}

int run_decode(const DecodeArgs& args) {
  DatLattice lat = read_lattice_file(args.lattice_path, {.renormalize = args.renormalize});

  DecodeConfig config;
  config.beam = args.beam;
  config.expand = args.expand;
  config.termination = parse_termination(args.termination);
  config.bos = parse_bos(args.bos);
  if (args.length >= 0) config.length = args.length;
  if (args.ratio >= 0.0) config.ratio = args.ratio;
  const std::int32_t T = resolve_target_length(config, lat);

  json doc;
  doc["version"] = 1;
  doc["command"] = "decode";
  doc["objective"] = args.objective;
  doc["termination"] = args.termination;
  doc["target_length"] = T;

  const auto started = std::chrono::steady_clock::now();

  CandidateList list;
  list.vocab = &lat.vocab;
  json candidates = json::array();
  json path_json;

  if (args.objective == "pathmap") {
    PathMapResult r = pathmap_decode(lat, T, config.termination);
    ScoredSequence seq = r.sequence;
    list.candidates.push_back(seq);
    json c;
    c["tokens"] = id_strings(lat.vocab, seq.tokens);
    c["token_ids"] = seq.tokens;
    c["log_best_path"] = finite_or_string(*seq.log_best_path);
    c["log_marginal"] = finite_or_string(seq.log_marginal);
    candidates.push_back(std::move(c));
    path_json["linked_steps"] = one_based(r.path.linked_steps);  // 1-based in reports
    path_json["words"] = id_strings(lat.vocab, r.path.words);
  } else if (args.objective == "seqmap") {
    doc["bos_policy"] = args.bos;
    doc["beam"] = args.beam;
    doc["expand"] = args.expand;
    auto result = seqmap_decode(lat, config);
    for (const auto& cand : result) {
      // The ranking score doubles as the candidate's marginal estimate.
      list.candidates.push_back({cand.tokens, cand.total, std::nullopt});
      json c;
      c["tokens"] = id_strings(lat.vocab, cand.tokens);
      c["token_ids"] = cand.tokens;
      c["total"] = finite_or_string(cand.total);
      c["log_marginal"] = finite_or_string(cand.log_marginal);
      candidates.push_back(std::move(c));
    }
  } else {
    throw std::invalid_argument("unknown objective: " + args.objective);
  }

  std::size_t selected = 0;
  if (args.rerank == "none" || args.rerank.empty()) {
    selected = 0;
  } else if (args.rerank == "marginal") {
    selected = rerank_marginal(list);
  } else if (args.rerank.rfind("overlap:", 0) == 0) {
    std::string ref_path = args.rerank.substr(8);
    auto lines = read_lines(ref_path);
    if (lines.empty()) throw std::invalid_argument("reference file is empty: " + ref_path);
    auto reference = tokenize(lines[0]);
    selected = rerank_overlap(list, reference);
  } else {
    throw std::invalid_argument("unknown rerank mode: " + args.rerank);
  }

  const auto finished = std::chrono::steady_clock::now();

  doc["rerank"] = args.rerank.empty() ? "none" : args.rerank;
  doc["selected_index"] = selected;
  doc["selected"] = candidates[selected];
  if (args.objective == "pathmap") {
    doc["path"] = std::move(path_json);
  }
  if (args.top_k_out > 0 &&
      candidates.size() > static_cast<std::size_t>(args.top_k_out)) {
    json trimmed = json::array();
    for (std::int32_t i = 0; i < args.top_k_out; ++i) trimmed.push_back(candidates[i]);
    candidates = std::move(trimmed);
  }
  doc["candidates"] = std::move(candidates);
  if (args.timings) {
    doc["decode_seconds"] =
        std::chrono::duration<double>(finished - started).count();
  }
  if (args.pretty) {
    const json& sel = doc["selected"];
    std::cout << "tokens:";
    for (const auto& t : sel["tokens"]) std::cout << " " << t.get<std::string>();
    std::cout << "\nlog_marginal: " << sel["log_marginal"].dump();
    if (sel.contains("total")) std::cout << "\ntotal:        " << sel["total"].dump();
    if (sel.contains("log_best_path")) {
      std::cout << "\nlog_best_path: " << sel["log_best_path"].dump();
    }
    std::cout << "\ncandidates:   " << doc["candidates"].size() << "\n";
    return kExitOk;
  }
  emit(doc);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string hyp_path, ref_path, src_path;
  bool tsv = false;
  bool pretty = false;
};

int run_eval(const EvalArgs& args) {
  auto hyp_lines = read_lines(args.hyp_path);
  auto ref_lines = read_lines(args.ref_path);
  if (hyp_lines.size() != ref_lines.size()) {
    throw std::invalid_argument("hypothesis and reference files differ in line count");
  }
  std::vector<std::string> src_lines;
  if (!args.src_path.empty()) {
    src_lines = read_lines(args.src_path);
    if (src_lines.size() != hyp_lines.size()) {
      throw std::invalid_argument("source file differs in line count");
    }
  }

  struct LineScores {
    RougeScore r1, r2, rl;
    double rsum;
    bool has_novelty = false;
    double novelty = 0.0;
  };
  std::vector<LineScores> lines(hyp_lines.size());

  for (std::size_t i = 0; i < hyp_lines.size(); ++i) {
    auto hyp = tokenize(hyp_lines[i]);
    auto ref = tokenize(ref_lines[i]);
    auto& s = lines[i];
    s.r1 = rouge_n(hyp, ref, 1);
    s.r2 = rouge_n(hyp, ref, 2);
    s.rl = rouge_l(hyp, ref);
    s.rsum = (s.r1.f1 + s.r2.f1 + s.rl.f1) * 100.0;
    if (!src_lines.empty() && !hyp.empty()) {
      s.has_novelty = true;
      s.novelty = word_novelty(hyp, tokenize(src_lines[i]));
    }
  }

  LineScores avg{};
  std::size_t novelty_count = 0;
  for (const auto& s : lines) {
    avg.r1.precision += s.r1.precision; avg.r1.recall += s.r1.recall; avg.r1.f1 += s.r1.f1;
    avg.r2.precision += s.r2.precision; avg.r2.recall += s.r2.recall; avg.r2.f1 += s.r2.f1;
    avg.rl.precision += s.rl.precision; avg.rl.recall += s.rl.recall; avg.rl.f1 += s.rl.f1;
    avg.rsum += s.rsum;
    if (s.has_novelty) {
      avg.novelty += s.novelty;
      ++novelty_count;
    }
  }
  const double n = lines.empty() ? 1.0 : static_cast<double>(lines.size());
  for (double* x : {&avg.r1.precision, &avg.r1.recall, &avg.r1.f1, &avg.r2.precision,
                    &avg.r2.recall, &avg.r2.f1, &avg.rl.precision, &avg.rl.recall,
                    &avg.rl.f1, &avg.rsum}) {
    *x /= n;
  }
  if (novelty_count > 0) avg.novelty /= static_cast<double>(novelty_count);

  auto rouge_json = [](const RougeScore& r) {
    json j;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    return j;
  };
  auto line_json = [&](const LineScores& s) {
    json j;
    j["rouge1"] = rouge_json(s.r1);
    j["rouge2"] = rouge_json(s.r2);
    j["rougeL"] = rouge_json(s.rl);
    j["rsum"] = s.rsum;
    if (s.has_novelty) j["novelty"] = s.novelty;
    return j;
  };

  if (args.tsv) {
    std::cout << "line\tr1_f1\tr2_f1\trl_f1\trsum\tnovelty\n";
    auto row = [&](const std::string& name, const LineScores& s) {
      std::cout << name << "\t" << s.r1.f1 << "\t" << s.r2.f1 << "\t" << s.rl.f1 << "\t"
                << s.rsum << "\t";
      if (s.has_novelty || (&s == &avg && novelty_count > 0)) {
        std::cout << s.novelty;
      } else {
        std::cout << "-";
      }
      std::cout << "\n";
    };
    for (std::size_t i = 0; i < lines.size(); ++i) row(std::to_string(i), lines[i]);
    row("avg", avg);
    return kExitOk;
  }
  if (args.pretty) {
    std::cout << "lines: " << lines.size() << "\n";
    std::cout << "R-1 F1:  " << avg.r1.f1 * 100.0 << "\n";
    std::cout << "R-2 F1:  " << avg.r2.f1 * 100.0 << "\n";
    std::cout << "R-L F1:  " << avg.rl.f1 * 100.0 << "\n";
    std::cout << "R-Sum:   " << avg.rsum << "\n";
    if (novelty_count > 0) std::cout << "Novelty: " << avg.novelty * 100.0 << "%\n";
    return kExitOk;
  }

  json doc;
  doc["version"] = 1;
  doc["command"] = "eval";
  json per_line = json::array();
  for (const auto& s : lines) per_line.push_back(line_json(s));
  doc["lines"] = std::move(per_line);
  json avg_json = line_json(avg);
  if (novelty_count > 0) avg_json["novelty"] = avg.novelty;
  doc["average"] = std::move(avg_json);
  emit(doc);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

struct OracleCheckArgs {
  std::int64_t seeds = 50;
  std::int32_t max_steps = 7;
  std::int32_t max_vocab = 5;
  std::int32_t max_length = 3;
  double concentration = 1.0;
};

struct PropertyStats {
  std::string name;
  std::int64_t runs = 0;
  std::vector<std::string> failures;
};

int run_oracle_check(const OracleCheckArgs& args) {
  if (args.seeds <= 0) {
    throw std::invalid_argument("--seeds must be positive: nothing to check");
  }
  if (args.max_steps < 4 || args.max_steps > 10 || args.max_vocab < 3 ||
      args.max_length < 1) {
    throw std::invalid_argument("size caps out of range (4 <= max-steps <= 10)");
  }

  PropertyStats pathmap_prop{"pathmap-vs-oracle", 0, {}};
  PropertyStats seqmap_prop{"seqmap-exhaustive-vs-oracle", 0, {}};
  PropertyStats mass_prop{"path-mass-normalization", 0, {}};
  PropertyStats marginal_prop{"marginal-vs-enumeration", 0, {}};
  constexpr double kTol = 1e-9;

  for (std::int64_t i = 0; i < args.seeds; ++i) {
    SplitMix64 derive(static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL + 1);
    GenSpec spec;
    spec.steps = 4 + static_cast<std::int32_t>(derive.next() % (args.max_steps - 3));
    spec.vocab_size = 3 + static_cast<std::int32_t>(derive.next() % (args.max_vocab - 2));
    spec.seed = derive.next();
    spec.concentration = args.concentration;
    DatLattice lat = generate(spec);
    const std::int32_t t_cap = std::min<std::int32_t>(args.max_length, spec.steps - 2);
    const std::int32_t T = 1 + static_cast<std::int32_t>(derive.next() % t_cap);
    const TerminationMode term = i % 2 == 0 ? TerminationMode::Eos : TerminationMode::Free;
    const std::string term_name = term == TerminationMode::Eos ? "eos" : "free";
    auto tag = [&](const std::string& detail) {
      return "seed=" + std::to_string(i) + " S=" + std::to_string(spec.steps) +
             " |V|=" + std::to_string(spec.vocab_size) + " T=" + std::to_string(T) +
             " mode=" + term_name + ": " + detail;
    };

    // PathMAP against exhaustive enumeration.
    ++pathmap_prop.runs;
    try {
      PathMapResult dp = pathmap_decode(lat, T, term);
      OraclePathMapResult ref = oracle_pathmap(lat, T, term);
      double diff = std::fabs(*dp.sequence.log_best_path - std::log(ref.probability));
      std::vector<std::int32_t> dp_content =
          term == TerminationMode::Eos
              ? std::vector<std::int32_t>(dp.path.linked_steps.begin() + 1,
                                          dp.path.linked_steps.end() - 1)
              : dp.path.linked_steps;
      if (diff > kTol) {
        pathmap_prop.failures.push_back(tag("score diff " + std::to_string(diff)));
      } else if (dp.sequence.tokens != ref.tokens || dp_content != ref.content_steps) {
        pathmap_prop.failures.push_back(tag("sequence or path mismatch"));
      }
    } catch (const std::exception& e) {
      pathmap_prop.failures.push_back(tag(e.what()));
    }

    // SeqMAP under exhaustive settings must reproduce the true argmax.
    ++seqmap_prop.runs;
    try {
      const auto content = lat.vocab.content_ids();
      std::int32_t k = 1;
      for (std::int32_t t = 0; t < T; ++t) k *= static_cast<std::int32_t>(content.size());
      DecodeConfig config;
      config.beam = k;
      config.expand = static_cast<std::int32_t>(content.size());
      config.termination = term;
      config.length = T;
      auto beam = seqmap_decode(lat, config);
      auto ref = oracle_seqmap(lat, T, term);
      double diff = std::fabs(beam[0].total - std::log(ref[0].marginal));
      if (beam[0].tokens != ref[0].tokens) {
        seqmap_prop.failures.push_back(tag("argmax sequence mismatch"));
      } else if (diff > kTol) {
        seqmap_prop.failures.push_back(tag("total diff " + std::to_string(diff)));
      }
    } catch (const std::exception& e) {
      seqmap_prop.failures.push_back(tag(e.what()));
    }

    // Complete bos->eos walks carry unit mass.
    if (term == TerminationMode::Eos) {
      ++mass_prop.runs;
      double mass = total_complete_path_mass(lat);
      if (std::fabs(mass - 1.0) > kTol) {
        mass_prop.failures.push_back(tag("total mass " + std::to_string(mass)));
      }
    }

    // Forward DP against linear-space enumeration, every sequence.
    ++marginal_prop.runs;
    try {
      for (const auto& row : oracle_seqmap(lat, T, term)) {
        double dp = sequence_log_marginal(lat, row.tokens, term);
        if (row.marginal == 0.0) {
          if (dp != kNegInf) {
            marginal_prop.failures.push_back(tag("zero marginal decoded as finite"));
            break;
          }
          continue;
        }
        if (std::fabs(dp - std::log(row.marginal)) > kTol) {
          marginal_prop.failures.push_back(tag("marginal diff at a sequence"));
          break;
        }
      }
    } catch (const std::exception& e) {
      marginal_prop.failures.push_back(tag(e.what()));
    }
  }

  bool all_ok = true;
  for (const auto* prop : {&pathmap_prop, &seqmap_prop, &mass_prop, &marginal_prop}) {
    if (prop->failures.empty()) {
      std::cout << "PASS " << prop->name << " (" << prop->runs << " runs)\n";
    } else {
      all_ok = false;
      std::cout << "FAIL " << prop->name << " (" << prop->failures.size() << "/"
                << prop->runs << " runs failed)\n";
      for (const auto& f : prop->failures) std::cout << "  " << f << "\n";
    }
  }
  return all_ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> objectives{"pathmap", "seqmap"};
  std::vector<std::string> lattice_files;  // overrides the generator when set
  std::int32_t count = 100;
  std::int32_t steps = 64;
  std::int32_t vocab = 100;
  std::int32_t length = 12;
  std::int32_t beam = 20;
  std::int32_t expand = 5;
  std::uint64_t seed = 1;
  std::string termination = "eos";
  bool pretty = false;
};

int run_bench(const BenchArgs& args) {
  for (const auto& o : args.objectives) {
    if (o != "pathmap" && o != "seqmap") {
      throw std::invalid_argument("unknown objective: " + o);
    }
  }
  const TerminationMode term = parse_termination(args.termination);

  std::vector<DatLattice> lattices;
  if (!args.lattice_files.empty()) {
    for (const auto& path : args.lattice_files) {
      lattices.push_back(read_lattice_file(path));
    }
  } else {
    lattices.reserve(args.count);
    for (std::int32_t i = 0; i < args.count; ++i) {
      lattices.push_back(generate({args.steps, args.vocab, args.seed + i, 1.0}));
    }
  }
  const auto lattice_count = static_cast<std::int32_t>(lattices.size());

  json results = json::array();
  for (const auto& objective : args.objectives) {
    std::uint64_t checksum = 1469598103934665603ULL;  // FNV-1a over token ids
    auto fold = [&checksum](std::int32_t id) {
      checksum ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(id));
      checksum *= 1099511628211ULL;
    };
    const auto started = std::chrono::steady_clock::now();
    for (const auto& lat : lattices) {  // batch size 1: one lattice at a time
      if (objective == "pathmap") {
        PathMapResult r = pathmap_decode(lat, args.length, term);
        for (std::int32_t id : r.sequence.tokens) fold(id);
      } else {
        DecodeConfig config;
        config.beam = args.beam;
        config.expand = args.expand;
        config.termination = term;
        config.length = args.length;
        auto r = seqmap_decode(lat, config);
        for (std::int32_t id : r[0].tokens) fold(id);
      }
    }
    const auto finished = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(finished - started).count();

    json row;
    row["objective"] = objective;
    row["lattices"] = lattice_count;
    row["steps"] = args.steps;
    row["vocab"] = args.vocab;
    row["target_length"] = args.length;
    if (objective == "seqmap") {
      row["beam"] = args.beam;
      row["expand"] = args.expand;
    }
    row["wall_seconds"] = seconds;
    row["sentences_per_s"] = seconds > 0.0 ? lattice_count / seconds : 0.0;
    row["words_per_s"] =
        seconds > 0.0 ? static_cast<double>(lattice_count) * args.length / seconds : 0.0;
    row["output_checksum"] = checksum;
    results.push_back(std::move(row));
  }

  if (args.pretty) {
    std::cout << "objective    sentences/s      words/s\n";
    for (const auto& row : results) {
      std::printf("%-12s %11.2f %12.2f\n", row["objective"].get<std::string>().c_str(),
                  row["sentences_per_s"].get<double>(),
                  row["words_per_s"].get<double>());
    }
    return kExitOk;
  }
  json doc;
  doc["version"] = 1;
  doc["command"] = "bench";
  doc["results"] = std::move(results);
  emit(doc);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"length-control decoding over DAT output lattices"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a reproducible random lattice");
  gen->add_option("--steps", gen_args.spec.steps, "prediction steps (>= 3)")->required();
  gen->add_option("--vocab", gen_args.spec.vocab_size, "vocabulary size incl. bos/eos (>= 3)")
      ->required();
  gen->add_option("--seed", gen_args.spec.seed, "64-bit seed")->required();
  gen->add_option("--concentration", gen_args.spec.concentration,
                  "row sharpness; smaller = peakier (default 1.0)");
  gen->add_option("--source-len", gen_args.source_len,
                  "record a source length (enables --ratio decoding)");
  gen->add_option("-o,--out", gen_args.out, "output file (stdout when omitted)");

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "check a lattice file's invariants");
  val->add_option("lattice", validate_path, "lattice file")->required();

  DecodeArgs dec_args;
  auto* dec = app.add_subcommand("decode", "decode one lattice");
  dec->add_option("--lattice", dec_args.lattice_path, "lattice file")->required();
  dec->add_option("--objective", dec_args.objective, "pathmap | seqmap")
      ->check(CLI::IsMember({"pathmap", "seqmap"}));
  dec->add_option("--length", dec_args.length, "target content length T");
  dec->add_option("--ratio", dec_args.ratio, "T = max(1, floor(ratio * source_len))");
  dec->add_option("--beam", dec_args.beam, "beam size K (default 20)");
  dec->add_option("--expand", dec_args.expand, "words explored per step V (default 5)");
  dec->add_option("--termination", dec_args.termination, "eos | free")
      ->check(CLI::IsMember({"eos", "free"}));
  dec->add_option("--bos", dec_args.bos, "strict | verbatim")
      ->check(CLI::IsMember({"strict", "verbatim"}));
  dec->add_option("--rerank", dec_args.rerank, "none | marginal | overlap:<ref-file>");
  dec->add_option("--top-k-out", dec_args.top_k_out, "limit reported candidates");
  dec->add_flag("--renormalize", dec_args.renormalize,
                "renormalize rows on load instead of rejecting drift");
  dec->add_flag("--timings", dec_args.timings,
                "include wall-clock time in the report (breaks byte determinism)");
  dec->add_flag("--pretty", dec_args.pretty, "short human summary instead of JSON");

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "score hypothesis summaries");
  ev->add_option("--hyp", eval_args.hyp_path, "hypotheses, one tokenized line each")
      ->required();
  ev->add_option("--ref", eval_args.ref_path, "references, line-aligned")->required();
  ev->add_option("--src", eval_args.src_path, "sources, line-aligned (enables novelty)");
  ev->add_flag("--tsv", eval_args.tsv, "emit TSV instead of JSON");
  ev->add_flag("--pretty", eval_args.pretty, "emit a short human summary");

  OracleCheckArgs oc_args;
  auto* oc = app.add_subcommand("oracle-check",
                                "verify decoders against brute-force references");
  oc->add_option("--seeds", oc_args.seeds, "number of random lattices");
  oc->add_option("--max-steps", oc_args.max_steps, "largest S (<= 10)");
  oc->add_option("--max-vocab", oc_args.max_vocab, "largest vocabulary");
  oc->add_option("--max-length", oc_args.max_length, "largest target length");
  oc->add_option("--concentration", oc_args.concentration, "generator concentration");

  BenchArgs bench_args;
  auto* be = app.add_subcommand("bench", "time decoding, one lattice at a time");
  be->add_option("--objective", bench_args.objectives, "pathmap and/or seqmap");
  be->add_option("--count", bench_args.count, "number of generated lattices");
  be->add_option("--lattice-set", bench_args.lattice_files,
                 "bench these lattice files instead of generating");
  be->add_option("--steps", bench_args.steps, "lattice steps");
  be->add_option("--vocab", bench_args.vocab, "vocabulary size");
  be->add_option("--length", bench_args.length, "target length");
  be->add_option("--beam", bench_args.beam, "seqmap beam size");
  be->add_option("--expand", bench_args.expand, "seqmap expansion width");
  be->add_option("--seed", bench_args.seed, "base seed");
  be->add_option("--termination", bench_args.termination, "eos | free")
      ->check(CLI::IsMember({"eos", "free"}));
  be->add_flag("--pretty", bench_args.pretty, "print a table instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (val->parsed()) return run_validate(validate_path);
    if (dec->parsed()) return run_decode(dec_args);
    if (ev->parsed()) return run_eval(eval_args);
    if (oc->parsed()) return run_oracle_check(oc_args);
    if (be->parsed()) return run_bench(bench_args);
  } catch (const InfeasibleLengthError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NoValidPathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NoValidSequenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EnumerationCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
