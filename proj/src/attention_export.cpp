//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/attention_export.h"

#include "colddti/errors.h"

namespace colddti {

std::vector<std::string> drug_labels(const PreparedDrug &drug) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < drug.tokens.size(); ++i)
    out.push_back(drug.tokens[i].text + ":" + std::to_string(i + 1));
  return out;
}

std::vector<std::string> level_labels(const PreparedProtein &protein,
                                      ProteinLevel level) {
  std::vector<std::string> out;
  switch (level) {
  case ProteinLevel::kPrimary:
    for (const ProteinToken &t: protein.layout.tokens)
      if (t.kind == ProteinTokenKind::kResidue)
        out.push_back(t.text + ":" + std::to_string(*t.residue_index));
    break;
  case ProteinLevel::kSecondary:
  case ProteinLevel::kTertiary: {
    const SpanKind kind = level == ProteinLevel::kSecondary
                              ? SpanKind::kSecondary
                              : SpanKind::kTertiary;
    for (const StructureSpan &s: protein.spans)
      if (s.kind == kind)
        out.push_back(s.descriptor());
    break;
  }
  case ProteinLevel::kQuaternary:
    out.push_back("quaternary");
    break;
  }
  return out;
}

AttentionDump export_attention(const ModelParams &params,
                               const PreparedDrug &drug,
                               const PreparedProtein &protein,
                               const LevelMask &enabled) {
  ForwardPass f = forward(params, drug, protein, enabled);

  AttentionDump dump;
  dump.drug_id = drug.id;
  dump.protein_id = protein.id;
  dump.prediction = f.prediction;

  const std::vector<std::string> local_rows = drug_labels(drug);
  for (ProteinLevel b: kAllProteinLevels) {
    const std::vector<std::string> cols = level_labels(protein, b);
    for (DrugLevel a: { DrugLevel::kLocal, DrugLevel::kGlobal }) {
      const std::optional<Matrix> &map = f.maps.get(a, b);
      if (!map)
        continue;
      LabeledMatrix m;
      m.values = *map;
      m.row_labels = a == DrugLevel::kLocal ? local_rows
                                            : std::vector<std::string> {
                                                  "global" };
      m.col_labels = cols;
      if (static_cast<std::size_t>(m.values.rows()) != m.row_labels.size()
          || static_cast<std::size_t>(m.values.cols()) != m.col_labels.size())
        throw NumericalError("map " + std::string(map_name(map_index(a, b)))
                             + " does not match its labels");
      dump.maps[map_index(a, b)] = std::move(m);
    }
  }
  dump.intensities = std::move(f.intensities);
  dump.level_weights = std::move(f.level_weights);
  dump.local_weights = std::move(f.local.weights);
  dump.protein_weights = std::move(f.protein_side.weights);
  dump.drug_weights = std::move(f.drug_side.weights);
  return dump;
}

AttentionDump export_attention(const ModelParams &params,
                               const std::string &drug_id,
                               const std::string &protein_id,
                               const Dataset &ds,
                               const EmbeddingProvider &provider,
                               const LevelMask &enabled) {
  auto d = ds.drugs.find(drug_id);
  if (d == ds.drugs.end())
    throw DataError("unknown drug id '" + drug_id + "'");
  auto p = ds.proteins.find(protein_id);
  if (p == ds.proteins.end())
    throw DataError("unknown protein id '" + protein_id + "'");
  return export_attention(params, provider.prepare(d->second),
                          provider.prepare(p->second), enabled);
}

namespace {

nlohmann::json vector_json(const Vector &v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json matrix_json(const LabeledMatrix &m) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m.values.size()));
  for (Eigen::Index i = 0; i < m.values.rows(); ++i)
    for (Eigen::Index j = 0; j < m.values.cols(); ++j)
      values.push_back(m.values(i, j));
  return { { "rows", m.values.rows() },
           { "cols", m.values.cols() },
           { "row_labels", m.row_labels },
           { "col_labels", m.col_labels },
           { "values", values } };
}

}  // namespace

nlohmann::json dump_json(const AttentionDump &dump) {
  nlohmann::json maps = nlohmann::json::object();
  for (std::size_t i = 0; i < kMapCount; ++i) {
    const std::string key = "I_" + std::string(map_name(i));
    maps[key] = dump.maps[i] ? matrix_json(*dump.maps[i]) : nullptr;
  }

  nlohmann::json intensities = nlohmann::json::object();
  for (ProteinLevel b: kAllProteinLevels) {
    const std::string key = std::string("S_") + level_code(b);
    const auto &s = dump.intensities.get(b);
    intensities[key] = s ? vector_json(*s) : nullptr;
  }
  intensities["S_l"] = vector_json(dump.intensities.local);
  intensities["S_g"] = dump.intensities.global;

  nlohmann::json weights = {
    { "w_p", vector_json(dump.level_weights[0]) },
    { "w_s", vector_json(dump.level_weights[1]) },
    { "w_t", vector_json(dump.level_weights[2]) },
    { "w_l", vector_json(dump.local_weights) },
    { "w_T", vector_json(dump.protein_weights) },
    { "w_D", vector_json(dump.drug_weights) },
  };

  return { { "drug_id", dump.drug_id },
           { "protein_id", dump.protein_id },
           { "prediction", dump.prediction },
           { "maps", maps },
           { "intensities", intensities },
           { "weights", weights } };
}

}  // namespace colddti
