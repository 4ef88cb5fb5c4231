//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_TOKENIZER_H_
#define COLDDTI_TOKENIZER_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "colddti/data_model.h"

namespace colddti {

struct DrugToken {
  std::string text;

  bool operator==(const DrugToken &) const = default;
};

enum class ProteinTokenKind { kResidue, kTag };

struct ProteinToken {
  std::string text;
  ProteinTokenKind kind = ProteinTokenKind::kResidue;
  std::optional<int> residue_index;  // 1-based, residues only

  bool operator==(const ProteinToken &) const = default;
};

namespace tags {
inline constexpr std::string_view kSecondaryStart = "[secondary_start]";
inline constexpr std::string_view kSecondaryEnd = "[secondary_end]";
inline constexpr std::string_view kTertiaryStart = "[tertiary_start]";
inline constexpr std::string_view kTertiaryEnd = "[tertiary_end]";
inline constexpr std::string_view kUnknown = "[UNK]";

// The full structure-tag vocabulary, including the four secondary types.
inline constexpr std::array<std::string_view, 8> kSpecial = {
  kSecondaryStart, kSecondaryEnd, "Helix",      "Sheet",
  "Turn",          "Bend",        kTertiaryStart, kTertiaryEnd,
};
}  // namespace tags

// Splits SMILES into atom / bond / branch / ring-closure tokens using the
// usual regex scheme: bracket atoms, Br, Cl, %NN and single characters.
// Printable characters outside that alphabet become one-character tokens;
// unbalanced brackets, a bad %NN or non-printable bytes throw DataError.
std::vector<DrugToken> tokenize_smiles(std::string_view smiles);

// Token positions of one span inside the tagged protein sequence.
struct SpanAnchors {
  std::size_t start_tag = 0;
  std::optional<std::size_t> type_token;  // secondary spans only
  std::size_t first_residue = 0;
  std::size_t last_residue = 0;
  std::size_t end_tag = 0;
};

struct TaggedProtein {
  std::vector<ProteinToken> tokens;
  std::vector<std::size_t> residue_positions;  // token index of residue i
  std::vector<SpanAnchors> anchors;            // parallel to the span list
};

// Inserts structure tags around each span. At a shared residue, start tags
// come tertiary-first and outer-first; end tags close secondary-first and
// inner-first. The result does not depend on the order of the span list.
TaggedProtein layout_protein_tags(const ProteinRecord &protein);

inline std::vector<ProteinToken>
expand_protein_tags(const ProteinRecord &protein) {
  return layout_protein_tags(protein).tokens;
}

class Vocabulary {
public:
  Vocabulary() = default;
  // Indices follow lexicographic token order; [UNK] is always included.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  int index_of(std::string_view token) const;  // [UNK] index if absent
  std::optional<int> find(std::string_view token) const;
  const std::string &token(int index) const { return tokens_.at(index); }
  const std::vector<std::string> &tokens() const { return tokens_; }
  int unknown_index() const { return unk_; }

  bool operator==(const Vocabulary &o) const { return tokens_ == o.tokens_; }

private:
  std::vector<std::string> tokens_;
  std::map<std::string, int, std::less<>> index_;
  int unk_ = -1;
};

struct Vocabularies {
  Vocabulary drug;
  Vocabulary protein;
};

// Vocabulary over every drug and protein record in the corpus; the protein
// side always carries the eight structure tags.
Vocabularies build_vocabulary(const Dataset &corpus);

}  // namespace colddti

#endif  // COLDDTI_TOKENIZER_H_
