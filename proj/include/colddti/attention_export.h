//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_ATTENTION_EXPORT_H_
#define COLDDTI_ATTENTION_EXPORT_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "colddti/data_model.h"
#include "colddti/embedding.h"
#include "colddti/model.h"

namespace colddti {

struct LabeledMatrix {
  Matrix values;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

struct AttentionDump {
  std::string drug_id;
  std::string protein_id;
  double prediction = 0.0;
  // Indexed by map_index; unset for ablated levels.
  std::array<std::optional<LabeledMatrix>, kMapCount> maps;
  IntensityVectors intensities;
  std::array<Vector, kProteinLevels> level_weights;  // w_p, w_s, w_t; q empty
  Vector local_weights;                              // w_l
  Vector protein_weights;                            // w_T
  Vector drug_weights;                               // w_D
};

// Drug rows are "token:position" (1-based); residue columns "code:index";
// span columns use StructureSpan::descriptor() in record order.
std::vector<std::string> drug_labels(const PreparedDrug &drug);
std::vector<std::string> level_labels(const PreparedProtein &protein,
                                      ProteinLevel level);

// Everything comes from one forward pass, so the dump's prediction is the
// evaluation-path prediction bit for bit.
AttentionDump export_attention(const ModelParams &params,
                               const PreparedDrug &drug,
                               const PreparedProtein &protein,
                               const LevelMask &enabled = kAllLevels);

// Throws DataError for an id the dataset does not contain.
AttentionDump export_attention(const ModelParams &params,
                               const std::string &drug_id,
                               const std::string &protein_id,
                               const Dataset &ds,
                               const EmbeddingProvider &provider,
                               const LevelMask &enabled = kAllLevels);

nlohmann::json dump_json(const AttentionDump &dump);

}  // namespace colddti

#endif  // COLDDTI_ATTENTION_EXPORT_H_
