//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_MODEL_H_
#define COLDDTI_MODEL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "colddti/embedding.h"
#include "colddti/fusion.h"
#include "colddti/interaction.h"
#include "colddti/matrix.h"
#include "colddti/rng.h"

namespace colddti {

struct ModelShape {
  std::size_t drug_vocab = 0;     // 0 on the precomputed path
  std::size_t protein_vocab = 0;  // 0 on the precomputed path
  int dim = kDefaultEmbeddingDim;
  int projection_width = kDefaultEmbeddingDim;
  std::vector<int> hidden = kDefaultHidden;
};

// A named, mutable view over one parameter tensor (column-major storage).
struct TensorView {
  std::string name;
  Eigen::Map<Matrix> values;
};

struct ModelParams {
  Matrix drug_table;     // drug vocab x d; 0 x 0 when embeddings are frozen
  Matrix protein_table;  // protein vocab x d; likewise
  Projections projections;
  MlpParams mlp;

  // Draw order: drug table, protein table, the eight projections in map
  // order (drug side then protein side), then the classifier layers.
  static ModelParams init(const ModelShape &shape, SplitMix64 &rng);

  ModelParams zeros_like() const;
  int dim() const {
    return static_cast<int>(projections[0].drug_side.cols());
  }

  // Stable order and names: embedding.drug, embedding.protein, W_lp.l,
  // W_lp.p, ..., W_gq.q, mlp.0.weight, mlp.0.bias, ...
  std::vector<TensorView> tensors();
  std::size_t parameter_count() const;

  // Every entry rounded to the nearest float (the checkpoint precision).
  ModelParams rounded_to_float() const;
};

// Counts reads of protein-level tensors during a forward pass.
struct AccessLog {
  std::array<int, kProteinLevels> level_reads {};
  std::array<int, kMapCount> map_reads {};
};

struct ForwardPass {
  LevelMask enabled {};
  LevelMask present {};  // enabled and non-empty
  Matrix drug_tokens;
  Matrix protein_tokens;
  DrugEmbeddings drug;
  LevelEmbeddings protein;
  InteractionMaps maps;
  IntensityVectors intensities;
  std::array<Vector, kProteinLevels> level_weights;  // w_p, w_s, w_t; q empty
  std::array<Vector, kProteinLevels> fused_levels;   // r_p, r_s, r_t, r_q
  IntraFusion local;                                 // w_l, r_l
  Vector global;                                     // r_g
  InterFusion protein_side;                          // w_T, r_T
  InterFusion drug_side;                             // w_D, r_D
  Vector joint;                                      // z = [r_D; r_T]
  MlpTrace mlp;
  double logit = 0.0;
  double prediction = 0.5;
};

// Throws NumericalError if every protein level is disabled.
ForwardPass forward(const ModelParams &params, const PreparedDrug &drug,
                    const PreparedProtein &protein,
                    const LevelMask &enabled = kAllLevels,
                    AccessLog *log = nullptr);

// Accumulates d(loss)/d(params) into grad given d(loss)/d(logit).
void backward(const ModelParams &params, const PreparedDrug &drug,
              const PreparedProtein &protein, const ForwardPass &pass,
              double d_logit, ModelParams &grad);

// Per-sample loss and its gradient (accumulated into grad when non-null).
double loss_and_grad(const ModelParams &params, const PreparedDrug &drug,
                     const PreparedProtein &protein, int label,
                     const LevelMask &enabled, ModelParams *grad);

}  // namespace colddti

#endif  // COLDDTI_MODEL_H_
