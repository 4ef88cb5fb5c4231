//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/synthetic.h"

#include <cstdio>
#include <set>
#include <string>
#include <utility>

#include "colddti/errors.h"
#include "colddti/rng.h"
#include "colddti/tokenizer.h"

namespace colddti {

bool planted_rule(const DrugRecord &drug, const ProteinRecord &protein) {
  bool has_n = false;
  for (const DrugToken &t: tokenize_smiles(drug.smiles))
    has_n = has_n || t.text == "N";
  if (!has_n)
    return false;
  for (const StructureSpan &s: protein.spans) {
    if (s.kind != SpanKind::kSecondary
        || s.secondary_type != SecondaryType::kHelix)
      continue;
    for (int r = s.start; r <= s.end; ++r)
      if (protein.residues[r - 1] == 'H')
        return true;
  }
  return false;
}

namespace {

std::string make_id(char prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%04zu", prefix, i + 1);
  return buf;
}

std::string make_smiles(SplitMix64 &rng, bool with_n) {
  static const char *kAtoms[] = { "C", "C", "C", "O", "S", "F", "Cl", "Br" };
  const std::size_t n = 5 + rng.below(6);
  std::vector<std::string> atoms(n);
  for (std::string &a: atoms)
    a = kAtoms[rng.below(std::size(kAtoms))];
  if (with_n) {
    const std::size_t copies = 1 + rng.below(2);
    for (std::size_t k = 0; k < copies; ++k)
      atoms[rng.below(n)] = "N";
  }

  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng.uniform() < 0.15)
      out += '=';
    if (i > 0 && i + 1 < n && rng.uniform() < 0.15)
      out += "(" + atoms[i] + ")";
    else
      out += atoms[i];
  }
  return out;
}

ProteinRecord make_protein(SplitMix64 &rng, std::string id, bool with_h) {
  static constexpr std::string_view kResidues = "ACDEFGIKLMNPQRSTVWY";
  static constexpr SecondaryType kTypes[] = {
    SecondaryType::kHelix, SecondaryType::kSheet, SecondaryType::kTurn,
    SecondaryType::kBend
  };

  ProteinRecord p;
  p.id = std::move(id);
  const int length = 20 + static_cast<int>(rng.below(17));
  for (int i = 0; i < length; ++i)
    p.residues += kResidues[rng.below(kResidues.size())];

  const std::size_t wanted = 1 + rng.below(3);
  int cursor = 1 + static_cast<int>(rng.below(4));
  for (std::size_t k = 0; k < wanted; ++k) {
    const int span_len = 4 + static_cast<int>(rng.below(4));
    if (cursor + span_len - 1 > length)
      break;
    StructureSpan s { cursor, cursor + span_len - 1, SpanKind::kSecondary,
                      kTypes[rng.below(4)] };
    if (k == 0 && with_h) {
      s.secondary_type = SecondaryType::kHelix;
      for (int c = 0; c < 2; ++c)
        p.residues[s.start - 1 + rng.below(span_len)] = 'H';
    }
    p.spans.push_back(s);
    cursor = s.end + 2 + static_cast<int>(rng.below(4));
  }

  if (rng.uniform() < 0.7) {
    const int start = 1 + static_cast<int>(rng.below(4));
    const int end = length - static_cast<int>(rng.below(4));
    p.spans.push_back({ start, end, SpanKind::kTertiary,
                        SecondaryType::kNone });
  }
  return p;
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig &cfg) {
  if (cfg.drugs < 3 || cfg.proteins < 3)
    throw ConfigError("synthetic corpus needs at least 3 drugs and 3 proteins");
  if (cfg.samples > cfg.drugs * cfg.proteins)
    throw ConfigError("more samples requested than distinct pairs");
  if (!(cfg.motif_rate >= 0 && cfg.motif_rate <= 1))
    throw ConfigError("motif_rate must lie in [0, 1]");

  SplitMix64 rng(cfg.seed);
  Dataset ds;
  std::vector<std::string> drug_ids, protein_ids;
  for (std::size_t i = 0; i < cfg.drugs; ++i) {
    const bool with_n = rng.uniform() < cfg.motif_rate;
    DrugRecord d { make_id('D', i), make_smiles(rng, with_n) };
    drug_ids.push_back(d.id);
    ds.drugs.emplace(d.id, std::move(d));
  }
  for (std::size_t i = 0; i < cfg.proteins; ++i) {
    const bool with_h = rng.uniform() < cfg.motif_rate;
    ProteinRecord p = make_protein(rng, make_id('P', i), with_h);
    protein_ids.push_back(p.id);
    ds.proteins.emplace(p.id, std::move(p));
  }

  std::set<std::pair<std::size_t, std::size_t>> used;
  while (ds.samples.size() < cfg.samples) {
    const std::size_t d = rng.below(cfg.drugs);
    const std::size_t p = rng.below(cfg.proteins);
    if (!used.emplace(d, p).second)
      continue;
    const int label = planted_rule(ds.drugs.at(drug_ids[d]),
                                   ds.proteins.at(protein_ids[p]))
                          ? 1
                          : 0;
    ds.samples.push_back({ drug_ids[d], protein_ids[p], label });
  }
  return ds;
}

}  // namespace colddti
