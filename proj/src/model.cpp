//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/model.h"

#include <algorithm>
#include <string>

#include "colddti/errors.h"

namespace colddti {

ModelParams ModelParams::init(const ModelShape &shape, SplitMix64 &rng) {
  if (shape.dim < 1 || shape.projection_width < 1)
    throw ConfigError("embedding and projection widths must be positive");

  ModelParams p;
  if (shape.drug_vocab > 0)
    p.drug_table = EmbeddingTable::init(shape.drug_vocab, shape.dim, rng)
                       .weights;
  if (shape.protein_vocab > 0)
    p.protein_table =
        EmbeddingTable::init(shape.protein_vocab, shape.dim, rng).weights;
  for (BilinearProjection &proj: p.projections)
    proj = BilinearProjection::init(shape.projection_width, shape.dim,
                                    shape.dim, rng);
  p.mlp = MlpParams::init(2 * shape.dim, shape.hidden, rng);
  return p;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (TensorView &t: z.tensors())
    t.values.setZero();
  return z;
}

std::vector<TensorView> ModelParams::tensors() {
  std::vector<TensorView> out;
  auto add = [&](std::string name, Matrix &m) {
    out.push_back({ std::move(name),
                    Eigen::Map<Matrix>(m.data(), m.rows(), m.cols()) });
  };
  auto add_vec = [&](std::string name, Vector &v) {
    out.push_back({ std::move(name),
                    Eigen::Map<Matrix>(v.data(), v.size(), 1) });
  };

  if (drug_table.size() > 0)
    add("embedding.drug", drug_table);
  if (protein_table.size() > 0)
    add("embedding.protein", protein_table);
  for (std::size_t i = 0; i < kMapCount; ++i) {
    const std::string map(map_name(i));
    add("W_" + map + "." + map[0], projections[i].drug_side);
    add("W_" + map + "." + map[1], projections[i].protein_side);
  }
  for (std::size_t i = 0; i < mlp.layers.size(); ++i) {
    add("mlp." + std::to_string(i) + ".weight", mlp.layers[i].weight);
    add_vec("mlp." + std::to_string(i) + ".bias", mlp.layers[i].bias);
  }
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const TensorView &t: const_cast<ModelParams *>(this)->tensors())
    n += static_cast<std::size_t>(t.values.size());
  return n;
}

ModelParams ModelParams::rounded_to_float() const {
  ModelParams out = *this;
  for (TensorView &t: out.tensors())
    t.values = t.values.cast<float>().cast<double>();
  return out;
}

namespace {

Matrix token_embeddings(const Matrix &table, const std::vector<int> &ids,
                        const std::optional<Matrix> &fixed,
                        const char *side) {
  if (fixed)
    return *fixed;
  if (table.size() == 0)
    throw NumericalError(std::string("model has no ") + side
                         + " embedding table for a token-id entity");
  return toy_encode(ids, table);
}

std::size_t idx(ProteinLevel level) {
  return static_cast<std::size_t>(level);
}

}  // namespace

ForwardPass forward(const ModelParams &params, const PreparedDrug &drug,
                    const PreparedProtein &protein, const LevelMask &enabled,
                    AccessLog *log) {
  bool any = false;
  for (bool e: enabled)
    any = any || e;
  if (!any)
    throw NumericalError("every protein level is disabled");

  ForwardPass f;
  f.enabled = enabled;
  f.drug_tokens =
      token_embeddings(params.drug_table, drug.ids, drug.fixed, "drug");
  f.protein_tokens = token_embeddings(params.protein_table, protein.ids,
                                      protein.fixed, "protein");

  f.drug = pool_drug(f.drug_tokens);
  for (ProteinLevel b: kAllProteinLevels) {
    if (enabled[idx(b)])
      level_matrix(f.protein, b) =
          protein.pooling.pool_level(f.protein_tokens, static_cast<int>(b));
  }

  f.maps = compute_all(f.drug, f.protein, params.projections, enabled);
  if (log) {
    for (ProteinLevel b: kAllProteinLevels) {
      if (!enabled[idx(b)])
        continue;
      ++log->level_reads[idx(b)];
      ++log->map_reads[map_index(DrugLevel::kLocal, b)];
      ++log->map_reads[map_index(DrugLevel::kGlobal, b)];
    }
  }

  f.intensities = intensity_vectors(f.maps);
  f.present = f.intensities.present_mask();

  for (ProteinLevel b: kAllProteinLevels) {
    if (!f.present[idx(b)])
      continue;
    const Matrix &x = level_matrix(f.protein, b);
    if (log)
      ++log->level_reads[idx(b)];
    if (b == ProteinLevel::kQuaternary) {
      f.fused_levels[idx(b)] = fuse_quaternary(x, (*f.intensities.get(b))[0]);
    } else {
      IntraFusion intra = intra_fuse(x, *f.intensities.get(b));
      f.level_weights[idx(b)] = std::move(intra.weights);
      f.fused_levels[idx(b)] = std::move(intra.fused);
    }
  }
  f.local = intra_fuse(f.drug.local, f.intensities.local);
  f.global = f.drug.global.row(0).transpose();

  f.protein_side = inter_fuse_protein(f.intensities, f.fused_levels,
                                      f.present);
  f.drug_side = inter_fuse_drug(f.intensities, f.local.fused, f.global);

  const Eigen::Index d = f.drug_side.fused.size();
  f.joint.resize(2 * d);
  f.joint << f.drug_side.fused, f.protein_side.fused;

  f.logit = mlp_logit(f.joint, params.mlp, &f.mlp);
  f.prediction = probability_from_logit(f.logit);
  return f;
}

void backward(const ModelParams &params, const PreparedDrug &drug,
              const PreparedProtein &protein, const ForwardPass &f,
              double d_logit, ModelParams &grad) {
  const Eigen::Index d = f.drug_side.fused.size();
  const Vector d_joint = mlp_backward(params.mlp, f.mlp, d_logit, grad.mlp);
  const Vector d_r_drug = d_joint.head(d);
  const Vector d_r_protein = d_joint.tail(d);

  // Gradients w.r.t. intensities and level matrices, filled stage by stage.
  std::array<Vector, kProteinLevels> d_s;
  LevelEmbeddings d_prot;
  for (ProteinLevel b: kAllProteinLevels) {
    if (!f.present[idx(b)])
      continue;
    d_s[idx(b)] = Vector::Zero(f.intensities.get(b)->size());
    const Matrix &x = level_matrix(f.protein, b);
    level_matrix(d_prot, b) = Matrix::Zero(x.rows(), x.cols());
  }
  Vector d_s_local = Vector::Zero(f.intensities.local.size());
  double d_s_global = 0.0;
  DrugEmbeddings d_drug { Matrix::Zero(f.drug.local.rows(), d),
                          Matrix::Zero(1, d) };

  // Inter-level protein fusion.
  std::array<Vector, kProteinLevels> d_r;
  Vector d_w_t = Vector::Zero(kProteinLevels);
  for (ProteinLevel b: kAllProteinLevels) {
    if (!f.present[idx(b)])
      continue;
    d_r[idx(b)] = f.protein_side.weights[idx(b)] * d_r_protein;
    d_w_t[idx(b)] = f.fused_levels[idx(b)].dot(d_r_protein);
  }
  const Vector d_mean_t = softmax_backward(f.protein_side.weights, d_w_t);
  for (ProteinLevel b: kAllProteinLevels) {
    if (f.present[idx(b)])
      d_s[idx(b)].array() +=
          d_mean_t[idx(b)] / static_cast<double>(d_s[idx(b)].size());
  }

  // Inter-level drug fusion.
  const Vector d_r_local = f.drug_side.weights[0] * d_r_drug;
  const Vector d_r_global = f.drug_side.weights[1] * d_r_drug;
  Vector d_w_d(2);
  d_w_d << f.local.fused.dot(d_r_drug), f.global.dot(d_r_drug);
  const Vector d_mean_d = softmax_backward(f.drug_side.weights, d_w_d);
  d_s_local.array() += d_mean_d[0] / static_cast<double>(d_s_local.size());
  d_s_global += d_mean_d[1];

  // Intra-level fusion.
  d_drug.local.noalias() += f.local.weights * d_r_local.transpose();
  d_s_local += softmax_backward(f.local.weights, f.drug.local * d_r_local);
  d_drug.global.row(0) += d_r_global.transpose();

  for (ProteinLevel b: kAllProteinLevels) {
    if (!f.present[idx(b)])
      continue;
    const Matrix &x = level_matrix(f.protein, b);
    Matrix &dx = level_matrix(d_prot, b);
    if (b == ProteinLevel::kQuaternary) {
      const double s_q = (*f.intensities.get(b))[0];
      dx.row(0) += s_q * d_r[idx(b)].transpose();
      d_s[idx(b)][0] += x.row(0).dot(d_r[idx(b)]);
    } else {
      const Vector &w = f.level_weights[idx(b)];
      dx.noalias() += w * d_r[idx(b)].transpose();
      d_s[idx(b)] += softmax_backward(w, x * d_r[idx(b)]);
    }
  }

  // Intensities to maps, then maps to inputs and projections.
  const double n = static_cast<double>(f.drug.local.rows());
  for (ProteinLevel b: kAllProteinLevels) {
    if (!f.present[idx(b)])
      continue;
    const Eigen::Index nb = d_s[idx(b)].size();
    Matrix d_local = d_s[idx(b)].transpose().replicate(f.drug.local.rows(), 1)
                     / n;
    d_local.colwise() += d_s_local / static_cast<double>(nb);
    Matrix d_global = d_s[idx(b)].transpose();
    d_global.array() += d_s_global / static_cast<double>(nb);

    for (DrugLevel a: { DrugLevel::kLocal, DrugLevel::kGlobal }) {
      const std::size_t m = map_index(a, b);
      const InteractionMapGrad g = interaction_map_backward(
          level_matrix(f.drug, a), level_matrix(f.protein, b),
          params.projections[m], a == DrugLevel::kLocal ? d_local : d_global);
      level_matrix(d_drug, a) += g.d_x_a;
      level_matrix(d_prot, b) += g.d_x_b;
      grad.projections[m].drug_side += g.d_proj.drug_side;
      grad.projections[m].protein_side += g.d_proj.protein_side;
    }
  }

  // Level matrices to token embeddings, then to the tables.
  if (!drug.fixed) {
    Matrix d_tokens = d_drug.local;
    d_tokens.rowwise() += d_drug.global.row(0) / n;
    for (std::size_t i = 0; i < drug.ids.size(); ++i)
      grad.drug_table.row(drug.ids[i]) += d_tokens.row(i);
  }
  if (!protein.fixed) {
    Matrix d_tokens = Matrix::Zero(f.protein_tokens.rows(), d);
    for (ProteinLevel b: kAllProteinLevels)
      if (f.present[idx(b)])
        protein.pooling.backward_level(static_cast<int>(b),
                                       level_matrix(d_prot, b), d_tokens);
    for (std::size_t i = 0; i < protein.ids.size(); ++i)
      grad.protein_table.row(protein.ids[i]) += d_tokens.row(i);
  }
}

double loss_and_grad(const ModelParams &params, const PreparedDrug &drug,
                     const PreparedProtein &protein, int label,
                     const LevelMask &enabled, ModelParams *grad) {
  const ForwardPass f = forward(params, drug, protein, enabled);
  const double yhat = std::clamp(f.prediction, kProbabilityFloor / 2,
                                 1.0 - kProbabilityFloor / 2);
  const double loss = bce_loss(yhat, label);
  if (grad)
    backward(params, drug, protein, f, bce_logit_grad(f.prediction, label),
             *grad);
  return loss;
}

}  // namespace colddti
