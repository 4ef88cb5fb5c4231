//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/fusion.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "colddti/embedding.h"
#include "colddti/errors.h"

namespace colddti {

Vector softmax(const Vector &s) {
  return masked_softmax(s, std::vector<bool>(s.size(), true));
}

Vector masked_softmax(const Vector &s, const std::vector<bool> &mask) {
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (mask[i])
      hi = std::max(hi, s[i]);
  if (!std::isfinite(hi))
    throw NumericalError("softmax over no finite entries");

  Vector w = Vector::Zero(s.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (mask[i]) {
      w[i] = std::exp(s[i] - hi);
      total += w[i];
    }
  }
  return w / total;
}

Vector softmax_backward(const Vector &w, const Vector &d_w) {
  const double inner = w.dot(d_w);
  return w.cwiseProduct(d_w - Vector::Constant(w.size(), inner));
}

LevelMask IntensityVectors::present_mask() const {
  LevelMask mask {};
  for (ProteinLevel level: kAllProteinLevels)
    mask[static_cast<std::size_t>(level)] = present(level);
  return mask;
}

IntensityVectors intensity_vectors(const InteractionMaps &maps) {
  IntensityVectors s;
  Eigen::Index n = -1;
  for (ProteinLevel b: kAllProteinLevels)
    if (const auto &local = maps.get(DrugLevel::kLocal, b))
      n = local->rows();
  if (n < 0)
    throw NumericalError("no interaction maps to fuse");

  s.local = Vector::Zero(n);
  for (ProteinLevel b: kAllProteinLevels) {
    const auto &local = maps.get(DrugLevel::kLocal, b);
    const auto &global = maps.get(DrugLevel::kGlobal, b);
    if (!local || !global)
      continue;
    auto &out = s.protein[static_cast<std::size_t>(b)];
    out = global->row(0).transpose();
    if (local->cols() == 0)
      continue;
    *out += local->colwise().mean().transpose();
    s.local += local->rowwise().mean();
    s.global += global->mean();
  }
  return s;
}

IntraFusion intra_fuse(const Matrix &x, const Vector &s) {
  if (x.rows() == 0)
    throw NumericalError("intra-level fusion of an empty level");
  if (x.rows() != s.size()) {
    std::ostringstream oss;
    oss << "intensity length " << s.size() << " vs " << x.rows()
        << " structures";
    throw NumericalError(oss.str());
  }
  IntraFusion out;
  out.weights = softmax(s);
  out.fused = x.transpose() * out.weights;
  return out;
}

Vector fuse_quaternary(const Matrix &x_q, double s_q) {
  return s_q * x_q.row(0).transpose();
}

InterFusion inter_fuse_protein(
    const IntensityVectors &s,
    const std::array<Vector, kProteinLevels> &fused_levels,
    const LevelMask &present) {
  Vector means = Vector::Zero(kProteinLevels);
  std::vector<bool> mask(kProteinLevels, false);
  Eigen::Index width = -1;
  for (std::size_t x = 0; x < kProteinLevels; ++x) {
    if (!present[x])
      continue;
    const auto &sx = s.protein[x];
    if (!sx || sx->size() == 0)
      throw NumericalError("level marked present has no intensities");
    means[x] = sx->mean();
    mask[x] = true;
    width = fused_levels[x].size();
  }
  if (width < 0)
    throw NumericalError("inter-level fusion with every level absent");

  InterFusion out;
  out.weights = masked_softmax(means, mask);
  out.fused = Vector::Zero(width);
  for (std::size_t x = 0; x < kProteinLevels; ++x)
    if (mask[x])
      out.fused += out.weights[x] * fused_levels[x];
  return out;
}

InterFusion inter_fuse_drug(const IntensityVectors &s, const Vector &r_local,
                            const Vector &r_global) {
  Vector means(2);
  means << s.local.mean(), s.global;
  InterFusion out;
  out.weights = softmax(means);
  out.fused = out.weights[0] * r_local + out.weights[1] * r_global;
  return out;
}

MlpParams MlpParams::init(Eigen::Index input, const std::vector<int> &hidden,
                          SplitMix64 &rng) {
  MlpParams p;
  Eigen::Index in = input;
  auto add = [&](Eigen::Index out) {
    p.layers.push_back({ uniform_init(out, in, rng), Vector::Zero(out) });
    in = out;
  };
  for (int h: hidden)
    add(h);
  add(1);
  return p;
}

double mlp_logit(const Vector &z, const MlpParams &params, MlpTrace *trace) {
  if (params.layers.empty() || z.size() != params.input_width()) {
    std::ostringstream oss;
    oss << "classifier expects input width "
        << (params.layers.empty() ? 0 : params.input_width()) << ", got "
        << z.size();
    throw NumericalError(oss.str());
  }
  if (trace) {
    trace->input = z;
    trace->pre.clear();
  }

  Vector h = z;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const MlpLayer &layer = params.layers[i];
    if (layer.weight.cols() != h.size())
      throw NumericalError("classifier layer shapes do not compose");
    Vector a = layer.weight * h + layer.bias;
    if (trace)
      trace->pre.push_back(a);
    h = i + 1 < params.layers.size() ? Vector(a.cwiseMax(0.0)) : a;
  }
  if (h.size() != 1)
    throw NumericalError("classifier must end in a single logit");
  return h[0];
}

Vector mlp_backward(const MlpParams &params, const MlpTrace &trace,
                    double d_logit, MlpParams &grad) {
  Vector d = Vector::Constant(1, d_logit);
  for (std::size_t i = params.layers.size(); i-- > 0;) {
    const Vector in = i == 0 ? trace.input
                             : Vector(trace.pre[i - 1].cwiseMax(0.0));
    grad.layers[i].weight.noalias() += d * in.transpose();
    grad.layers[i].bias += d;
    Vector d_in = params.layers[i].weight.transpose() * d;
    if (i > 0) {
      const Vector &pre = trace.pre[i - 1];
      for (Eigen::Index j = 0; j < d_in.size(); ++j)
        if (pre[j] <= 0.0)
          d_in[j] = 0.0;
    }
    d = std::move(d_in);
  }
  return d;
}

double sigmoid(double x) {
  if (x >= 0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double probability_from_logit(double logit) {
  return std::clamp(sigmoid(logit), std::numeric_limits<double>::min(),
                    std::nextafter(1.0, 0.0));
}

double classify(const Vector &z, const MlpParams &params) {
  return probability_from_logit(mlp_logit(z, params));
}

double bce_loss(double yhat, int label) {
  if (!(yhat > 0.0 && yhat < 1.0))
    throw NumericalError("prediction outside (0, 1)");
  if (label != 0 && label != 1)
    throw NumericalError("label must be 0 or 1");
  const double p = std::clamp(yhat, kProbabilityFloor, 1.0 - kProbabilityFloor);
  return label == 1 ? -std::log(p) : -std::log1p(-p);
}

double bce_logit_grad(double yhat, int label) {
  if (yhat < kProbabilityFloor || yhat > 1.0 - kProbabilityFloor)
    return 0.0;
  return yhat - label;
}

}  // namespace colddti
