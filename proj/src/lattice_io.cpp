#include "datlc/lattice_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "datlc/errors.hpp"

namespace datlc {

namespace {

using json = nlohmann::ordered_json;

json encode_logprob(double x) {
  if (x == kNegInf) return json("-inf");
  return json(x);
}

double decode_logprob(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return kNegInf;
    throw SchemaError(field, "only the string \"-inf\" may stand for a number");
  }
  throw SchemaError(field, "expected a number or \"-inf\"");
}

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw SchemaError(field, "missing required field");
  return *it;
}

}  // namespace

DatLattice read_lattice(const std::string& bytes, const ReadOptions& options) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SchemaError("(document)", e.what());
  }
  if (!doc.is_object()) throw SchemaError("(document)", "expected a JSON object");

  const json& version = require(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    throw SchemaError("version", "unsupported version (expected 1)");
  }

  DatLattice lat;

  const json& steps = require(doc, "steps");
  if (!steps.is_number_integer() || steps.get<std::int64_t>() < 1) {
    throw SchemaError("steps", "expected a positive integer");
  }
  lat.steps = steps.get<std::int32_t>();

  const json& vocab = require(doc, "vocab");
  if (!vocab.is_array() || vocab.empty()) {
    throw SchemaError("vocab", "expected a non-empty array of strings");
  }
  for (const auto& t : vocab) {
    if (!t.is_string()) throw SchemaError("vocab", "expected strings");
    lat.vocab.tokens.push_back(t.get<std::string>());
  }

  const json& bos = require(doc, "bos_id");
  const json& eos = require(doc, "eos_id");
  if (!bos.is_number_integer()) throw SchemaError("bos_id", "expected an integer");
  if (!eos.is_number_integer()) throw SchemaError("eos_id", "expected an integer");
  lat.vocab.bos_id = bos.get<std::int32_t>();
  lat.vocab.eos_id = eos.get<std::int32_t>();

  if (auto it = doc.find("source_len"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
      throw SchemaError("source_len", "expected a positive integer");
    }
    lat.source_len = it->get<std::int32_t>();
  }
  if (auto it = doc.find("source_tokens"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("source_tokens", "expected an array");
    std::vector<std::string> toks;
    for (const auto& t : *it) {
      if (!t.is_string()) throw SchemaError("source_tokens", "expected strings");
      toks.push_back(t.get<std::string>());
    }
    lat.source_tokens = std::move(toks);
  }

  const json& words = require(doc, "word_logprobs");
  if (!words.is_array() || words.size() != static_cast<std::size_t>(lat.steps)) {
    throw SchemaError("word_logprobs", "expected one row per step");
  }
  const std::size_t V = lat.vocab.tokens.size();
  lat.word_logprobs.reserve(static_cast<std::size_t>(lat.steps) * V);
  for (std::size_t s = 0; s < words.size(); ++s) {
    const json& row = words[s];
    if (!row.is_array() || row.size() != V) {
      throw SchemaError("word_logprobs",
                        "row " + std::to_string(s) + " must have |vocab| entries");
    }
    for (const auto& x : row) {
      lat.word_logprobs.push_back(decode_logprob(x, "word_logprobs"));
    }
  }

  const json& links = require(doc, "link_logprobs");
  if (!links.is_array() || links.size() != static_cast<std::size_t>(lat.steps - 1)) {
    throw SchemaError("link_logprobs", "expected steps-1 rows");
  }
  for (std::size_t s = 0; s < links.size(); ++s) {
    const json& row = links[s];
    const std::size_t want = static_cast<std::size_t>(lat.steps) - 1 - s;
    if (!row.is_array() || row.size() != want) {
      throw SchemaError("link_logprobs", "row " + std::to_string(s) + " must have " +
                                             std::to_string(want) + " entries");
    }
    std::vector<double> out;
    out.reserve(want);
    for (const auto& x : row) {
      out.push_back(decode_logprob(x, "link_logprobs"));
    }
    lat.link_logprobs.push_back(std::move(out));
  }

  if (options.renormalize) renormalize(lat);
  ValidationReport report = validate(lat);
  if (!report.ok()) throw ValidationError(std::move(report));
  return lat;
}

std::string write_lattice(const DatLattice& lattice) {
  ValidationReport report = validate(lattice);
  if (!report.ok()) throw ValidationError(std::move(report));

  json doc;
  doc["version"] = 1;
  doc["steps"] = lattice.steps;
  doc["vocab"] = lattice.vocab.tokens;
  doc["bos_id"] = lattice.vocab.bos_id;
  doc["eos_id"] = lattice.vocab.eos_id;
  if (lattice.source_len) doc["source_len"] = *lattice.source_len;
  if (lattice.source_tokens) doc["source_tokens"] = *lattice.source_tokens;

  json words = json::array();
  for (std::int32_t s = 0; s < lattice.steps; ++s) {
    json row = json::array();
    for (double x : lattice.word_row(s)) row.push_back(encode_logprob(x));
    words.push_back(std::move(row));
  }
  doc["word_logprobs"] = std::move(words);

  json links = json::array();
  for (const auto& src : lattice.link_logprobs) {
    json row = json::array();
    for (double x : src) row.push_back(encode_logprob(x));
    links.push_back(std::move(row));
  }
  doc["link_logprobs"] = std::move(links);

  return doc.dump(1) + "\n";
}

DatLattice read_lattice_file(const std::string& path, const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open lattice file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_lattice(buf.str(), options);
}

void write_lattice_file(const DatLattice& lattice, const std::string& path) {
  std::string bytes = write_lattice(lattice);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << bytes;
}

}  // namespace datlc
