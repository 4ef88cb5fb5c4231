//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/tokenizer.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "test_support.h"

namespace colddti {
namespace {

std::vector<std::string> texts(const std::vector<DrugToken> &tokens) {
  std::vector<std::string> out;
  for (const DrugToken &t: tokens)
    out.push_back(t.text);
  return out;
}

std::vector<std::string> texts(const std::vector<ProteinToken> &tokens) {
  std::vector<std::string> out;
  for (const ProteinToken &t: tokens)
    out.push_back(t.text);
  return out;
}

using Strings = std::vector<std::string>;

TEST(TokenizeSmilesTest, Examples) {
  EXPECT_EQ(texts(tokenize_smiles("CCO")), (Strings { "C", "C", "O" }));
  EXPECT_EQ(texts(tokenize_smiles("C(=O)[O-]")),
            (Strings { "C", "(", "=", "O", ")", "[O-]" }));
  EXPECT_EQ(texts(tokenize_smiles("c1ccccc1")),
            (Strings { "c", "1", "c", "c", "c", "c", "c", "1" }));
}

TEST(TokenizeSmilesTest, MultiCharacterTokens) {
  EXPECT_EQ(texts(tokenize_smiles("ClCBr")), (Strings { "Cl", "C", "Br" }));
  EXPECT_EQ(texts(tokenize_smiles("C%12CC%12")),
            (Strings { "C", "%12", "C", "C", "%12" }));
  EXPECT_EQ(texts(tokenize_smiles("[C@@H](N)/C=C\\C#N")),
            (Strings { "[C@@H]", "(", "N", ")", "/", "C", "=", "C", "\\",
                       "C", "#", "N" }));
  // Printable but outside the alphabet: kept as a token, [UNK] later.
  EXPECT_EQ(texts(tokenize_smiles("C!C")), (Strings { "C", "!", "C" }));
}

TEST(TokenizeSmilesTest, StructuralErrors) {
  EXPECT_THROW(tokenize_smiles(""), DataError);
  EXPECT_THROW(tokenize_smiles("C[NH"), DataError);
  EXPECT_THROW(tokenize_smiles("C]"), DataError);
  EXPECT_THROW(tokenize_smiles("C[]"), DataError);
  EXPECT_THROW(tokenize_smiles("C%1"), DataError);
  EXPECT_THROW(tokenize_smiles("C\tC"), DataError);
}

TEST(TokenizeSmilesTest, RoundTripProperty) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string s = test::random_smiles(rng, 12) + "(=O)c1cc%10c1";
    std::string joined;
    for (const DrugToken &t: tokenize_smiles(s)) {
      EXPECT_FALSE(t.text.empty());
      joined += t.text;
    }
    EXPECT_EQ(joined, s);
  }
}

ProteinRecord protein(std::string residues, std::vector<StructureSpan> spans) {
  return { "p", std::move(residues), std::move(spans) };
}

TEST(ExpandProteinTagsTest, Examples) {
  EXPECT_EQ(texts(expand_protein_tags(protein(
                "MKV", { { 1, 2, SpanKind::kSecondary,
                           SecondaryType::kHelix } }))),
            (Strings { "[secondary_start]", "Helix", "M", "K",
                       "[secondary_end]", "V" }));
  EXPECT_EQ(texts(expand_protein_tags(protein("MKV", {}))),
            (Strings { "M", "K", "V" }));
  EXPECT_EQ(texts(expand_protein_tags(protein(
                "AC", { { 1, 2, SpanKind::kTertiary, SecondaryType::kNone },
                        { 2, 2, SpanKind::kSecondary,
                          SecondaryType::kSheet } }))),
            (Strings { "[tertiary_start]", "A", "[secondary_start]", "Sheet",
                       "C", "[secondary_end]", "[tertiary_end]" }));
}

TEST(ExpandProteinTagsTest, ResidueIndices) {
  auto tokens = expand_protein_tags(protein(
      "MKV", { { 2, 3, SpanKind::kSecondary, SecondaryType::kTurn } }));
  int next = 1;
  for (const ProteinToken &t: tokens) {
    if (t.kind == ProteinTokenKind::kResidue) {
      ASSERT_TRUE(t.residue_index);
      EXPECT_EQ(*t.residue_index, next++);
    } else {
      EXPECT_FALSE(t.residue_index);
    }
  }
}

TEST(ExpandProteinTagsTest, Properties) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    ProteinRecord p = test::random_protein(rng, "p", 15, 4, 3);
    const auto tokens = expand_protein_tags(p);

    std::string residues;
    std::map<std::string, int> count;
    for (const ProteinToken &t: tokens) {
      if (t.kind == ProteinTokenKind::kResidue)
        residues += t.text;
      else
        ++count[t.text];
    }
    EXPECT_EQ(residues, p.residues);
    EXPECT_EQ(count["[secondary_start]"], count["[secondary_end]"]);
    EXPECT_EQ(count["[tertiary_start]"], count["[tertiary_end]"]);
    EXPECT_EQ(static_cast<std::size_t>(count["[secondary_start]"]),
              p.count_spans(SpanKind::kSecondary));

    // Well nested: a stack of open tags never closes out of order.
    std::vector<std::string> open;
    for (const ProteinToken &t: tokens) {
      if (t.text == "[secondary_start]" || t.text == "[tertiary_start]")
        open.push_back(t.text);
      if (t.text == "[secondary_end]" || t.text == "[tertiary_end]") {
        ASSERT_FALSE(open.empty());
        open.pop_back();
      }
    }
    EXPECT_TRUE(open.empty());

    ProteinRecord shuffled = p;
    rng.shuffle(shuffled.spans);
    EXPECT_EQ(expand_protein_tags(shuffled), tokens);
  }
}

TEST(VocabularyTest, Examples) {
  Dataset ds;
  ds.drugs.emplace("d", DrugRecord { "d", "CC" });
  ds.proteins.emplace("p", ProteinRecord { "p", "MK", {} });
  Vocabularies v = build_vocabulary(ds);
  EXPECT_EQ(v.drug.tokens(), (Strings { "C", "[UNK]" }));
  Strings want = { "M", "K", "[UNK]" };
  for (std::string_view s: tags::kSpecial)
    want.emplace_back(s);
  std::sort(want.begin(), want.end());
  EXPECT_EQ(v.protein.tokens(), want);
  EXPECT_EQ(v.drug.index_of("Br"), v.drug.unknown_index());

  Vocabularies empty = build_vocabulary(Dataset {});
  EXPECT_EQ(empty.drug.tokens(), (Strings { "[UNK]" }));
  EXPECT_EQ(empty.protein.size(), 9);
}

TEST(VocabularyTest, IndicesFollowLexicographicOrder) {
  Vocabulary v({ "b", "a", "c", "a" });
  EXPECT_EQ(v.tokens(), (Strings { "[UNK]", "a", "b", "c" }));
  EXPECT_EQ(v.index_of("c"), 3);
  EXPECT_EQ(v.find("zz"), std::nullopt);
}

}  // namespace
}  // namespace colddti
