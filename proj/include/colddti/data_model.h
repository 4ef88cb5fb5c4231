//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_DATA_MODEL_H_
#define COLDDTI_DATA_MODEL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "colddti/errors.h"

namespace colddti {

struct DrugRecord {
  std::string id;
  std::string smiles;

  bool operator==(const DrugRecord &) const = default;
};

enum class SpanKind { kSecondary, kTertiary };

enum class SecondaryType { kHelix, kSheet, kTurn, kBend, kNone };

std::string_view to_string(SpanKind kind);
std::string_view to_string(SecondaryType type);

// Both parsers throw DataError on unknown names.
SpanKind parse_span_kind(std::string_view text);
SecondaryType parse_secondary_type(std::string_view text);

// Residue positions are 1-based and inclusive on both ends.
struct StructureSpan {
  int start = 1;
  int end = 1;
  SpanKind kind = SpanKind::kSecondary;
  SecondaryType secondary_type = SecondaryType::kNone;

  bool operator==(const StructureSpan &) const = default;

  // "kind:type:start-end", e.g. "secondary:Helix:3-9" or "tertiary:-:1-40".
  std::string descriptor() const;
};

struct ProteinRecord {
  std::string id;
  std::string residues;
  std::vector<StructureSpan> spans;

  bool operator==(const ProteinRecord &) const = default;

  int length() const { return static_cast<int>(residues.size()); }
  std::size_t count_spans(SpanKind kind) const;
};

// Throws DataError if the span violates its invariants for a protein of
// the given length.
void check_span(const StructureSpan &span, int protein_length);

struct InteractionSample {
  std::string drug_id;
  std::string protein_id;
  int label = 0;

  bool operator==(const InteractionSample &) const = default;
};

struct Dataset {
  std::map<std::string, DrugRecord> drugs;
  std::map<std::string, ProteinRecord> proteins;
  std::vector<InteractionSample> samples;
  // Hex SHA-256 of the interactions file bytes; empty for in-memory data.
  std::string interactions_sha256;

  bool operator==(const Dataset &) const = default;

  // Same entity maps, only the selected samples (in the given order).
  Dataset subset(const std::vector<std::size_t> &indices) const;
};

// Throws DataError on dangling references, duplicate pairs or bad spans.
void check_invariants(const Dataset &ds);

struct DataPaths {
  std::filesystem::path drugs;
  std::filesystem::path proteins;
  std::filesystem::path structures;
  std::filesystem::path interactions;

  // drugs.tsv, proteins.tsv, structures.tsv, interactions.tsv under dir.
  static DataPaths in_directory(const std::filesystem::path &dir);
};

Dataset load_dataset(const DataPaths &paths);

// Writes the four TSV files; inverse of load_dataset.
void write_dataset(const Dataset &ds, const DataPaths &paths);

struct ValidationReport {
  std::size_t drugs = 0;
  std::size_t proteins = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t proteins_without_secondary = 0;
  std::size_t proteins_without_tertiary = 0;

  bool operator==(const ValidationReport &) const = default;
};

ValidationReport validate(const Dataset &ds);

}  // namespace colddti

#endif  // COLDDTI_DATA_MODEL_H_
