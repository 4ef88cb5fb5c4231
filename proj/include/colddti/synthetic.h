//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_SYNTHETIC_H_
#define COLDDTI_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>

#include "colddti/data_model.h"

namespace colddti {

struct SyntheticConfig {
  std::size_t drugs = 400;
  std::size_t proteins = 200;
  std::size_t samples = 4000;
  std::uint64_t seed = 7;
  // Chance that a drug carries N, and that a protein carries an H inside a
  // Helix span. H never occurs anywhere else.
  double motif_rate = 0.7;
};

// Label 1 iff the drug has an "N" token and some Helix span of the protein
// covers an "H" residue.
bool planted_rule(const DrugRecord &drug, const ProteinRecord &protein);

// Throws ConfigError for impossible sizes (fewer than three entities per
// side, or more samples than distinct pairs).
Dataset generate_synthetic(const SyntheticConfig &cfg);

}  // namespace colddti

#endif  // COLDDTI_SYNTHETIC_H_
