#include "dnaood/seqio.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dnaood/errors.hpp"

namespace dnaood {

namespace {

constexpr std::string_view kAlphabet = "ACGTRYSWKMBDHVN-";

std::array<bool, 256> make_base_table() {
  std::array<bool, 256> t{};
  for (char c : kAlphabet) t[static_cast<unsigned char>(c)] = true;
  return t;
}

const std::array<bool, 256> kIsBase = make_base_table();

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool is_valid_base(char c) { return kIsBase[static_cast<unsigned char>(c)]; }

const AlignedSequence* Alignment::find(std::string_view taxon_id) const {
  for (const auto& seq : sequences) {
    if (seq.taxon_id == taxon_id) return &seq;
  }
  return nullptr;
}

Alignment parse_fasta(std::string_view text) {
  Alignment out;
  std::set<std::string> seen_ids;
  bool in_record = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    line = rstrip(line);
    if (line.empty()) continue;

    if (line.front() == '>') {
      line.remove_prefix(1);
      const std::size_t ws = line.find_first_of(" \t");
      std::string id(line.substr(0, ws));
      std::string desc;
      if (ws != std::string_view::npos) {
        std::string_view rest = line.substr(ws + 1);
        while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
        desc = std::string(rest);
      }
      if (id.empty()) throw ValidationError("FASTA: header with empty taxon id");
      if (!seen_ids.insert(id).second) {
        throw ValidationError("FASTA: duplicate taxon id '" + id + "'");
      }
      out.sequences.push_back({std::move(id), std::move(desc), std::string{}});
      in_record = true;
      continue;
    }

    if (!in_record) {
      throw ValidationError("FASTA: sequence data before the first '>' header");
    }
    AlignedSequence& rec = out.sequences.back();
    for (char c : line) {
      const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (!is_valid_base(u)) {
        throw ValidationError("FASTA: invalid character '" + std::string(1, c) + "' in record '" +
                              rec.taxon_id + "' at site " + std::to_string(rec.bases.size() + 1));
      }
      rec.bases.push_back(u);
    }
  }

  if (out.sequences.empty()) throw ValidationError("FASTA: empty input, no records found");

  const std::size_t len = out.sequences.front().bases.size();
  for (const auto& seq : out.sequences) {
    if (seq.bases.empty()) {
      throw ValidationError("FASTA: record '" + seq.taxon_id + "' has no sequence data");
    }
    if (seq.bases.size() != len) {
      throw ValidationError("FASTA: unequal sequence lengths (" + std::to_string(len) + " vs " +
                            std::to_string(seq.bases.size()) + ") for record '" + seq.taxon_id + "'");
    }
  }
  return out;
}

Alignment read_fasta_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open FASTA file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_fasta(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string to_fasta(const Alignment& alignment) {
  std::string out;
  for (const auto& seq : alignment.sequences) {
    out += '>';
    out += seq.taxon_id;
    if (!seq.description.empty()) {
      out += ' ';
      out += seq.description;
    }
    out += '\n';
    out += seq.bases;
    out += '\n';
  }
  return out;
}

std::set<std::string> validate_against_classes(const Alignment& alignment,
                                               const std::set<std::string>& class_names) {
  std::set<std::string> missing;
  for (const auto& name : class_names) {
    if (alignment.find(name) == nullptr) missing.insert(name);
  }
  return missing;
}

Alignment filter_taxa(const Alignment& alignment, std::span<const std::string> taxa) {
  Alignment out;
  out.sequences.reserve(taxa.size());
  for (const auto& taxon : taxa) {
    const AlignedSequence* seq = alignment.find(taxon);
    if (seq == nullptr) throw ValidationError("no barcode sequence for taxon '" + taxon + "'");
    out.sequences.push_back(*seq);
  }
  return out;
}

}  // namespace dnaood
