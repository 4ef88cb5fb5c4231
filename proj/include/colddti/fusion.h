//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_FUSION_H_
#define COLDDTI_FUSION_H_

#include <array>
#include <optional>
#include <vector>

#include "colddti/interaction.h"
#include "colddti/matrix.h"
#include "colddti/rng.h"

namespace colddti {

// Max-subtracted softmax. Entries with mask[i] == false get weight 0 and do
// not enter the normalization; at least one entry must be unmasked.
Vector softmax(const Vector &s);
Vector masked_softmax(const Vector &s, const std::vector<bool> &mask);

// Given w = softmax(s) and dL/dw, returns dL/ds (masked entries have w = 0
// and therefore receive 0).
Vector softmax_backward(const Vector &w, const Vector &d_w);

// Per-structure interaction intensities, one vector per level.
struct IntensityVectors {
  // S_p, S_s, S_t, S_q. Unset for ablated levels; S_q has length 1.
  std::array<std::optional<Vector>, kProteinLevels> protein;
  Vector local;         // S_l, one entry per drug token
  double global = 0.0;  // S_g

  const std::optional<Vector> &get(ProteinLevel level) const {
    return protein[static_cast<std::size_t>(level)];
  }
  // Level takes part in inter-level fusion: not ablated and non-empty.
  bool present(ProteinLevel level) const {
    const auto &s = get(level);
    return s.has_value() && s->size() > 0;
  }
  LevelMask present_mask() const;
};

// S_x = I_gx + column means of I_lx for each protein level x; S_l sums the
// row means of the I_l* maps, S_g the means of the I_g* maps. Ablated and
// empty levels contribute nothing to S_l and S_g.
IntensityVectors intensity_vectors(const InteractionMaps &maps);

struct IntraFusion {
  Vector weights;  // softmax(S)
  Vector fused;    // X^T weights
};

// Throws NumericalError on an empty level or a length mismatch.
IntraFusion intra_fuse(const Matrix &x, const Vector &s);

// S_q * x_q with no normalization.
Vector fuse_quaternary(const Matrix &x_q, double s_q);

struct InterFusion {
  Vector weights;  // w_T (4 entries) or w_D (2 entries)
  Vector fused;    // r_T or r_D
};

// w_T = softmax of per-level mean intensities over present levels (absent
// levels get exactly 0); r_T = sum of w_T[x] r_x. Throws if no level is
// present.
InterFusion inter_fuse_protein(
    const IntensityVectors &s,
    const std::array<Vector, kProteinLevels> &fused_levels,
    const LevelMask &present);

// w_D = softmax(mean(S_l), S_g); r_D = w_D[0] r_l + w_D[1] r_g.
InterFusion inter_fuse_drug(const IntensityVectors &s, const Vector &r_local,
                            const Vector &r_global);

struct MlpLayer {
  Matrix weight;  // out x in
  Vector bias;
};

// Feed-forward head: ReLU between layers, a single output logit.
struct MlpParams {
  std::vector<MlpLayer> layers;

  static MlpParams init(Eigen::Index input, const std::vector<int> &hidden,
                        SplitMix64 &rng);
  Eigen::Index input_width() const { return layers.front().weight.cols(); }
};

inline const std::vector<int> kDefaultHidden = { 256, 256 };

// Pre-activations of every layer, kept for the backward pass.
struct MlpTrace {
  Vector input;
  std::vector<Vector> pre;
};

double mlp_logit(const Vector &z, const MlpParams &params,
                 MlpTrace *trace = nullptr);

// Accumulates parameter gradients into grad and returns dL/dz.
Vector mlp_backward(const MlpParams &params, const MlpTrace &trace,
                    double d_logit, MlpParams &grad);

double sigmoid(double x);

// sigmoid(logit) kept strictly inside (0, 1).
double probability_from_logit(double logit);

// Logistic of the head's logit; always strictly inside (0, 1) for finite
// input (saturation is clamped away from the endpoints).
double classify(const Vector &z, const MlpParams &params);

inline constexpr double kProbabilityFloor = 1e-7;

// Binary cross-entropy after clamping yhat to [1e-7, 1 - 1e-7]. Throws
// NumericalError for yhat outside (0, 1) or a label not in {0, 1}.
double bce_loss(double yhat, int label);

// d(bce_loss(sigmoid(logit)))/d(logit); zero where the clamp is active.
double bce_logit_grad(double yhat, int label);

}  // namespace colddti

#endif  // COLDDTI_FUSION_H_
