//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_INTERACTION_H_
#define COLDDTI_INTERACTION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "colddti/embedding.h"
#include "colddti/matrix.h"
#include "colddti/rng.h"

namespace colddti {

enum class DrugLevel { kLocal = 0, kGlobal = 1 };
enum class ProteinLevel {
  kPrimary = 0,
  kSecondary = 1,
  kTertiary = 2,
  kQuaternary = 3,
};

inline constexpr std::size_t kDrugLevels = 2;
inline constexpr std::size_t kProteinLevels = 4;
inline constexpr std::size_t kMapCount = kDrugLevels * kProteinLevels;

inline constexpr std::array<ProteinLevel, kProteinLevels> kAllProteinLevels =
    { ProteinLevel::kPrimary, ProteinLevel::kSecondary,
      ProteinLevel::kTertiary, ProteinLevel::kQuaternary };

// Single-letter level codes: l, g / p, s, t, q.
char level_code(DrugLevel level);
char level_code(ProteinLevel level);
std::optional<ProteinLevel> parse_protein_level(char code);

// Maps are numbered drug-major: lp, ls, lt, lq, gp, gs, gt, gq.
constexpr std::size_t map_index(DrugLevel a, ProteinLevel b) {
  return static_cast<std::size_t>(a) * kProteinLevels
         + static_cast<std::size_t>(b);
}

// "lp", "ls", ... "gq".
std::string_view map_name(std::size_t index);

// Protein levels that take part in a forward pass (ablation mask).
using LevelMask = std::array<bool, kProteinLevels>;
inline constexpr LevelMask kAllLevels = { true, true, true, true };

// One bilinear form: intensity(x_a, x_b) = (W_a x_a) . (W_b x_b).
struct BilinearProjection {
  Matrix drug_side;     // k x d_a
  Matrix protein_side;  // k x d_b

  static BilinearProjection init(Eigen::Index k, Eigen::Index d_a,
                                 Eigen::Index d_b, SplitMix64 &rng);
  static BilinearProjection zero(Eigen::Index k, Eigen::Index d_a,
                                 Eigen::Index d_b);
};

using Projections = std::array<BilinearProjection, kMapCount>;

// (X_a W_a^T)(X_b W_b^T)^T, an n_a x n_b matrix of raw intensities. Throws
// NumericalError when widths do not match the projection.
Matrix interaction_map(const Matrix &x_a, const Matrix &x_b,
                       const BilinearProjection &proj);

struct InteractionMapGrad {
  Matrix d_x_a;
  Matrix d_x_b;
  BilinearProjection d_proj;
};

// Pulls d(loss)/d(map) back to both inputs and both projection matrices.
InteractionMapGrad interaction_map_backward(const Matrix &x_a,
                                            const Matrix &x_b,
                                            const BilinearProjection &proj,
                                            const Matrix &d_map);

// The eight maps; ablated levels are left unset.
struct InteractionMaps {
  std::array<std::optional<Matrix>, kMapCount> maps;

  const std::optional<Matrix> &get(DrugLevel a, ProteinLevel b) const {
    return maps[map_index(a, b)];
  }
  std::optional<Matrix> &get(DrugLevel a, ProteinLevel b) {
    return maps[map_index(a, b)];
  }
};

const Matrix &level_matrix(const DrugEmbeddings &drug, DrugLevel level);
const Matrix &level_matrix(const LevelEmbeddings &prot, ProteinLevel level);
Matrix &level_matrix(DrugEmbeddings &drug, DrugLevel level);
Matrix &level_matrix(LevelEmbeddings &prot, ProteinLevel level);

// Dimension errors name the offending map.
InteractionMaps compute_all(const DrugEmbeddings &drug,
                            const LevelEmbeddings &prot,
                            const Projections &params,
                            const LevelMask &levels = kAllLevels);

}  // namespace colddti

#endif  // COLDDTI_INTERACTION_H_
