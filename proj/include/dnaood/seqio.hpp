#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dnaood {

// One row of a multiple sequence alignment. Bases are uppercase characters
// from {A,C,G,T}, the IUPAC ambiguity codes {R,Y,S,W,K,M,B,D,H,V,N}, or the
// gap character '-'.
struct AlignedSequence {
  std::string taxon_id;
  std::string description;  // header text after the first whitespace
  std::string bases;

  bool operator==(const AlignedSequence&) const = default;
};

struct Alignment {
  std::vector<AlignedSequence> sequences;

  bool operator==(const Alignment&) const = default;

  std::size_t size() const { return sequences.size(); }
  // Number of sites; valid alignments have at least one sequence.
  std::size_t length() const { return sequences.empty() ? 0 : sequences.front().bases.size(); }
  const AlignedSequence* find(std::string_view taxon_id) const;
};

bool is_valid_base(char c);

// Parses FASTA text into a validated Alignment: headers start with '>', the
// taxon id is the header token up to the first whitespace, sequence lines are
// concatenated and uppercased. Blank lines and trailing whitespace are
// ignored; '\n' and '\r\n' both work. Throws ValidationError on empty input,
// sequence data before a header, duplicate taxon ids, unequal lengths, or
// characters outside the accepted alphabet.
Alignment parse_fasta(std::string_view text);

Alignment read_fasta_file(const std::string& path);

std::string to_fasta(const Alignment& alignment);

// Returns the class names that have no matching taxon in the alignment;
// empty means fully covered. Extra sequences are permitted.
std::set<std::string> validate_against_classes(const Alignment& alignment,
                                               const std::set<std::string>& class_names);

// Alignment restricted to the given taxa, in the given order.
// Throws ValidationError if a taxon is missing.
Alignment filter_taxa(const Alignment& alignment, std::span<const std::string> taxa);

}  // namespace dnaood
