//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/tokenizer.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

namespace colddti {

namespace {

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

[[noreturn]] void smiles_error(std::string_view smiles, std::size_t pos,
                               std::string_view what) {
  std::ostringstream oss;
  oss << "SMILES '" << smiles << "' position " << pos + 1 << ": " << what;
  throw DataError(oss.str());
}

}  // namespace

std::vector<DrugToken> tokenize_smiles(std::string_view smiles) {
  if (smiles.empty())
    throw DataError("empty SMILES");

  std::vector<DrugToken> out;
  std::size_t i = 0;
  while (i < smiles.size()) {
    const char c = smiles[i];
    std::size_t len = 1;

    if (c == '[') {
      std::size_t close = smiles.find_first_of("[]", i + 1);
      if (close == std::string_view::npos || smiles[close] == '[')
        smiles_error(smiles, i, "unmatched '['");
      if (close == i + 1)
        smiles_error(smiles, i, "empty bracket atom");
      len = close - i + 1;
    } else if (c == ']') {
      smiles_error(smiles, i, "unmatched ']'");
    } else if (c == '%') {
      if (i + 2 >= smiles.size() || !is_digit(smiles[i + 1])
          || !is_digit(smiles[i + 2]))
        smiles_error(smiles, i, "'%' must be followed by two digits");
      len = 3;
    } else if ((c == 'B' || c == 'C') && i + 1 < smiles.size()
               && smiles[i + 1] == (c == 'B' ? 'r' : 'l')) {
      len = 2;
    } else if (static_cast<unsigned char>(c) <= 0x20
               || static_cast<unsigned char>(c) >= 0x7F) {
      smiles_error(smiles, i, "character outside the SMILES alphabet");
    }

    out.push_back({ std::string(smiles.substr(i, len)) });
    i += len;
  }
  return out;
}

namespace {

struct TagEvent {
  // Sort key within one boundary; smaller goes first.
  std::tuple<int, int, int, std::size_t> key;
  std::size_t span;
};

}  // namespace

TaggedProtein layout_protein_tags(const ProteinRecord &protein) {
  const int m = protein.length();
  for (const StructureSpan &s: protein.spans)
    check_span(s, m);

  // opens[r] / closes[r]: spans starting / ending at residue r (1-based).
  std::vector<std::vector<TagEvent>> opens(m + 1), closes(m + 1);
  for (std::size_t k = 0; k < protein.spans.size(); ++k) {
    const StructureSpan &s = protein.spans[k];
    const int kind_rank = s.kind == SpanKind::kTertiary ? 0 : 1;
    const int type_rank = static_cast<int>(s.secondary_type);
    // Opening: tertiary first, then longer (outer) spans first. Closing:
    // secondary first, then shorter (inner) spans first. The trailing index
    // only orders identical spans, which produce identical tokens.
    opens[s.start].push_back(
        { { kind_rank, -s.end, type_rank, k }, k });
    closes[s.end].push_back(
        { { -kind_rank, -s.start, type_rank, k }, k });
  }
  auto by_key = [](const TagEvent &a, const TagEvent &b) {
    return a.key < b.key;
  };

  TaggedProtein out;
  out.anchors.resize(protein.spans.size());
  out.residue_positions.reserve(m);
  out.tokens.reserve(m + 3 * protein.spans.size());

  auto push_tag = [&](std::string_view text) {
    out.tokens.push_back(
        { std::string(text), ProteinTokenKind::kTag, std::nullopt });
    return out.tokens.size() - 1;
  };

  for (int r = 1; r <= m; ++r) {
    std::sort(opens[r].begin(), opens[r].end(), by_key);
    for (const TagEvent &ev: opens[r]) {
      const StructureSpan &s = protein.spans[ev.span];
      SpanAnchors &a = out.anchors[ev.span];
      if (s.kind == SpanKind::kSecondary) {
        a.start_tag = push_tag(tags::kSecondaryStart);
        a.type_token = push_tag(to_string(s.secondary_type));
      } else {
        a.start_tag = push_tag(tags::kTertiaryStart);
      }
    }

    out.tokens.push_back({ std::string(1, protein.residues[r - 1]),
                           ProteinTokenKind::kResidue, r });
    out.residue_positions.push_back(out.tokens.size() - 1);

    std::sort(closes[r].begin(), closes[r].end(), by_key);
    for (const TagEvent &ev: closes[r]) {
      const StructureSpan &s = protein.spans[ev.span];
      out.anchors[ev.span].end_tag = push_tag(
          s.kind == SpanKind::kSecondary ? tags::kSecondaryEnd
                                         : tags::kTertiaryEnd);
    }
  }

  for (std::size_t k = 0; k < protein.spans.size(); ++k) {
    const StructureSpan &s = protein.spans[k];
    out.anchors[k].first_residue = out.residue_positions[s.start - 1];
    out.anchors[k].last_residue = out.residue_positions[s.end - 1];
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  tokens.emplace_back(tags::kUnknown);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    index_.emplace(tokens_[i], static_cast<int>(i));
  unk_ = index_.find(tags::kUnknown)->second;
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

int Vocabulary::index_of(std::string_view token) const {
  return find(token).value_or(unk_);
}

Vocabularies build_vocabulary(const Dataset &corpus) {
  std::set<std::string> drug, protein;
  for (const auto &[id, d]: corpus.drugs) {
    for (DrugToken &t: tokenize_smiles(d.smiles))
      drug.insert(std::move(t.text));
  }
  for (std::string_view t: tags::kSpecial)
    protein.emplace(t);
  for (const auto &[id, p]: corpus.proteins) {
    for (char c: p.residues)
      protein.emplace(1, c);
  }
  return { Vocabulary({ drug.begin(), drug.end() }),
           Vocabulary({ protein.begin(), protein.end() }) };
}

}  // namespace colddti
