//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/attention_export.h"

#include <gtest/gtest.h>

#include "colddti/errors.h"
#include "colddti/trainer.h"
#include "test_support.h"

namespace colddti {
namespace {

struct Case {
  Dataset ds;
  EmbeddingProvider provider = EmbeddingProvider::toy({}, 4);
  ModelParams params;
};

Case make_case(std::vector<StructureSpan> spans, std::uint64_t seed) {
  Case c;
  c.ds.drugs.emplace("d", DrugRecord { "d", "CC(=O)N" });
  c.ds.proteins.emplace("p", ProteinRecord { "p", "MKVLAHG", std::move(spans) });
  c.ds.samples.push_back({ "d", "p", 1 });
  c.provider = EmbeddingProvider::toy(build_vocabulary(c.ds), 4);
  SplitMix64 rng(seed);
  ModelShape shape = shape_for(c.provider);
  shape.hidden = { 6 };
  c.params = ModelParams::init(shape, rng);
  return c;
}

const std::vector<StructureSpan> kSpans = {
  { 2, 4, SpanKind::kSecondary, SecondaryType::kHelix },
  { 1, 7, SpanKind::kTertiary, SecondaryType::kNone },
  { 5, 6, SpanKind::kSecondary, SecondaryType::kSheet },
};

TEST(AttentionExportTest, LabelsAlignWithMaps) {
  Case c = make_case(kSpans, 1);
  AttentionDump dump = export_attention(c.params, "d", "p", c.ds, c.provider);
  const LabeledMatrix &lp =
      *dump.maps[map_index(DrugLevel::kLocal, ProteinLevel::kPrimary)];
  EXPECT_EQ(lp.row_labels,
            (std::vector<std::string> { "C:1", "C:2", "(:3", "=:4", "O:5",
                                        "):6", "N:7" }));
  EXPECT_EQ(lp.col_labels.front(), "M:1");
  EXPECT_EQ(lp.col_labels.back(), "G:7");
  EXPECT_EQ(lp.values.rows(), 7);
  EXPECT_EQ(lp.values.cols(), 7);
  const LabeledMatrix &gs =
      *dump.maps[map_index(DrugLevel::kGlobal, ProteinLevel::kSecondary)];
  EXPECT_EQ(gs.row_labels, (std::vector<std::string> { "global" }));
  EXPECT_EQ(gs.col_labels, (std::vector<std::string> {
                               kSpans[0].descriptor(), kSpans[2].descriptor() }));
  const LabeledMatrix &lq =
      *dump.maps[map_index(DrugLevel::kLocal, ProteinLevel::kQuaternary)];
  EXPECT_EQ(lq.col_labels, (std::vector<std::string> { "quaternary" }));
  for (const auto &m: dump.maps) {
    ASSERT_TRUE(m);
    EXPECT_EQ(static_cast<std::size_t>(m->values.rows()), m->row_labels.size());
    EXPECT_EQ(static_cast<std::size_t>(m->values.cols()), m->col_labels.size());
  }
}

TEST(AttentionExportTest, WeightsAreDistributions) {
  for (int trial = 0; trial < 50; ++trial) {
    Case c = make_case(kSpans, 100 + trial);
    AttentionDump dump =
        export_attention(c.params, "d", "p", c.ds, c.provider);
    for (int b = 0; b < 3; ++b)
      EXPECT_NEAR(dump.level_weights[b].sum(), 1.0, 1e-12);
    EXPECT_NEAR(dump.local_weights.sum(), 1.0, 1e-12);
    EXPECT_NEAR(dump.protein_weights.sum(), 1.0, 1e-12);
    EXPECT_NEAR(dump.drug_weights.sum(), 1.0, 1e-12);
    EXPECT_EQ(dump.level_weights[3].size(), 0);
  }
}

TEST(AttentionExportTest, NoTertiarySpans) {
  Case c = make_case({ kSpans[0] }, 3);
  AttentionDump dump = export_attention(c.params, "d", "p", c.ds, c.provider);
  const LabeledMatrix &lt =
      *dump.maps[map_index(DrugLevel::kLocal, ProteinLevel::kTertiary)];
  EXPECT_EQ(lt.values.rows(), 7);
  EXPECT_EQ(lt.values.cols(), 0);
  EXPECT_EQ(dump.protein_weights[2], 0.0);
  EXPECT_EQ(dump.level_weights[2].size(), 0);
  nlohmann::json j = dump_json(dump);
  EXPECT_EQ(j["maps"]["I_lt"]["cols"], 0);
  EXPECT_EQ(j["intensities"]["S_t"].size(), 0);
}

TEST(AttentionExportTest, ZeroProjectionsGiveUniformWeights) {
  Case c = make_case(kSpans, 4);
  for (BilinearProjection &p: c.params.projections) {
    p.drug_side.setZero();
    p.protein_side.setZero();
  }
  AttentionDump dump = export_attention(c.params, "d", "p", c.ds, c.provider);
  for (const auto &m: dump.maps)
    EXPECT_TRUE(m->values.isZero(0.0));
  EXPECT_TRUE(dump.level_weights[0].isConstant(1.0 / 7, 1e-15));
  EXPECT_TRUE(dump.level_weights[1].isConstant(0.5, 1e-15));
  EXPECT_TRUE(dump.local_weights.isConstant(1.0 / 7, 1e-15));
  EXPECT_TRUE(dump.protein_weights.isConstant(0.25, 1e-15));
  EXPECT_TRUE(dump.drug_weights.isConstant(0.5, 1e-15));
}

TEST(AttentionExportTest, PredictionMatchesEvaluation) {
  Case c = make_case(kSpans, 5);
  AttentionDump dump = export_attention(c.params, "d", "p", c.ds, c.provider);
  const std::vector<double> eval = predict(
      c.params, c.ds, PreparedSet(c.ds, c.provider));
  EXPECT_EQ(dump.prediction, eval[0]);
}

TEST(AttentionExportTest, AblatedLevelExportsNull) {
  Case c = make_case(kSpans, 6);
  AttentionDump dump = export_attention(c.params, "d", "p", c.ds, c.provider,
                                        { true, false, true, true });
  EXPECT_FALSE(dump.maps[map_index(DrugLevel::kLocal,
                                   ProteinLevel::kSecondary)]);
  EXPECT_EQ(dump.protein_weights[1], 0.0);
  nlohmann::json j = dump_json(dump);
  EXPECT_TRUE(j["maps"]["I_gs"].is_null());
  EXPECT_TRUE(j["intensities"]["S_s"].is_null());
  EXPECT_EQ(j["weights"]["w_T"].size(), 4);
}

TEST(AttentionExportTest, UnknownIdsRejected) {
  Case c = make_case(kSpans, 7);
  EXPECT_THROW(export_attention(c.params, "x", "p", c.ds, c.provider),
               DataError);
  EXPECT_THROW(export_attention(c.params, "d", "x", c.ds, c.provider),
               DataError);
}

}  // namespace
}  // namespace colddti
