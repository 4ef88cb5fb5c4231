//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/interaction.h"

#include <sstream>
#include <string>

#include "colddti/errors.h"

namespace colddti {

char level_code(DrugLevel level) {
  return level == DrugLevel::kLocal ? 'l' : 'g';
}

char level_code(ProteinLevel level) {
  static constexpr char kCodes[] = { 'p', 's', 't', 'q' };
  return kCodes[static_cast<int>(level)];
}

std::optional<ProteinLevel> parse_protein_level(char code) {
  for (ProteinLevel level: kAllProteinLevels)
    if (level_code(level) == code)
      return level;
  return std::nullopt;
}

std::string_view map_name(std::size_t index) {
  static constexpr std::string_view kNames[] = { "lp", "ls", "lt", "lq",
                                                 "gp", "gs", "gt", "gq" };
  return kNames[index];
}

BilinearProjection BilinearProjection::init(Eigen::Index k, Eigen::Index d_a,
                                            Eigen::Index d_b,
                                            SplitMix64 &rng) {
  BilinearProjection p;
  p.drug_side = uniform_init(k, d_a, rng);
  p.protein_side = uniform_init(k, d_b, rng);
  return p;
}

BilinearProjection BilinearProjection::zero(Eigen::Index k, Eigen::Index d_a,
                                            Eigen::Index d_b) {
  return { Matrix::Zero(k, d_a), Matrix::Zero(k, d_b) };
}

namespace {

void check_shapes(const Matrix &x_a, const Matrix &x_b,
                  const BilinearProjection &proj) {
  if (proj.drug_side.rows() != proj.protein_side.rows()
      || proj.drug_side.rows() < 1) {
    throw NumericalError("projection widths disagree");
  }
  if (x_a.cols() != proj.drug_side.cols()
      || x_b.cols() != proj.protein_side.cols()) {
    std::ostringstream oss;
    oss << "dimension mismatch: inputs have widths " << x_a.cols() << " and "
        << x_b.cols() << ", projection expects " << proj.drug_side.cols()
        << " and " << proj.protein_side.cols();
    throw NumericalError(oss.str());
  }
}

}  // namespace

Matrix interaction_map(const Matrix &x_a, const Matrix &x_b,
                       const BilinearProjection &proj) {
  check_shapes(x_a, x_b, proj);
  const Matrix a = x_a * proj.drug_side.transpose();
  const Matrix b = x_b * proj.protein_side.transpose();
  return a * b.transpose();
}

InteractionMapGrad interaction_map_backward(const Matrix &x_a,
                                            const Matrix &x_b,
                                            const BilinearProjection &proj,
                                            const Matrix &d_map) {
  check_shapes(x_a, x_b, proj);
  const Matrix a = x_a * proj.drug_side.transpose();
  const Matrix b = x_b * proj.protein_side.transpose();
  const Matrix d_a = d_map * b;
  const Matrix d_b = d_map.transpose() * a;

  InteractionMapGrad g;
  g.d_x_a = d_a * proj.drug_side;
  g.d_x_b = d_b * proj.protein_side;
  g.d_proj.drug_side = d_a.transpose() * x_a;
  g.d_proj.protein_side = d_b.transpose() * x_b;
  return g;
}

const Matrix &level_matrix(const DrugEmbeddings &drug, DrugLevel level) {
  return level == DrugLevel::kLocal ? drug.local : drug.global;
}

Matrix &level_matrix(DrugEmbeddings &drug, DrugLevel level) {
  return level == DrugLevel::kLocal ? drug.local : drug.global;
}

const Matrix &level_matrix(const LevelEmbeddings &prot, ProteinLevel level) {
  switch (level) {
  case ProteinLevel::kPrimary:
    return prot.primary;
  case ProteinLevel::kSecondary:
    return prot.secondary;
  case ProteinLevel::kTertiary:
    return prot.tertiary;
  case ProteinLevel::kQuaternary:
    break;
  }
  return prot.quaternary;
}

Matrix &level_matrix(LevelEmbeddings &prot, ProteinLevel level) {
  return const_cast<Matrix &>(
      level_matrix(static_cast<const LevelEmbeddings &>(prot), level));
}

InteractionMaps compute_all(const DrugEmbeddings &drug,
                            const LevelEmbeddings &prot,
                            const Projections &params,
                            const LevelMask &levels) {
  InteractionMaps out;
  for (DrugLevel a: { DrugLevel::kLocal, DrugLevel::kGlobal }) {
    for (ProteinLevel b: kAllProteinLevels) {
      if (!levels[static_cast<std::size_t>(b)])
        continue;
      const std::size_t idx = map_index(a, b);
      try {
        out.maps[idx] = interaction_map(level_matrix(drug, a),
                                        level_matrix(prot, b), params[idx]);
      } catch (const NumericalError &e) {
        throw NumericalError("I_" + std::string(map_name(idx)) + ": "
                             + e.what());
      }
    }
  }
  return out;
}

}  // namespace colddti
