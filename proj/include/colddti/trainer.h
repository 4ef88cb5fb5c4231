//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_TRAINER_H_
#define COLDDTI_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "colddti/data_model.h"
#include "colddti/embedding.h"
#include "colddti/metrics.h"
#include "colddti/model.h"

namespace colddti {

struct TrainConfig {
  double learning_rate = 5e-5;
  double weight_decay = 1e-4;
  int batch_size = 64;
  int max_epochs = 20;
  double lr_decay_factor = 0.5;
  int lr_decay_every = 5;
  std::uint64_t seed = 0;
  int early_stop_patience = 5;
  std::vector<ProteinLevel> ablation;  // levels to drop

  bool operator==(const TrainConfig &) const = default;

  // Throws ConfigError on any broken invariant, including an ablation that
  // drops all four levels.
  void validate() const;
  LevelMask enabled_levels() const;
};

// "p,s,t,q" style list; empty string means no ablation.
std::vector<ProteinLevel> parse_ablation(std::string_view text);
std::string ablation_string(const std::vector<ProteinLevel> &ablation);

nlohmann::json config_to_json(const TrainConfig &cfg);
// Missing keys keep their defaults; unknown keys are rejected.
TrainConfig config_from_json(const nlohmann::json &j);
TrainConfig load_config(const std::filesystem::path &path);

double lr_at_epoch(const TrainConfig &cfg, int epoch);

struct OptimizerState {
  ModelParams m;
  ModelParams v;
  std::int64_t t = 0;

  static OptimizerState for_params(const ModelParams &params);
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// One bias-corrected Adam step with L2 decay folded into the gradient.
// Throws NumericalError naming the tensor on a non-finite gradient.
void adam_step(ModelParams &params, ModelParams &grads, OptimizerState &state,
               double lr, const TrainConfig &cfg);

// Prepared inputs for every entity a dataset references.
class PreparedSet {
public:
  PreparedSet() = default;
  // Embedding errors are rethrown with the offending sample attached.
  PreparedSet(const Dataset &ds, const EmbeddingProvider &provider);

  void add(const Dataset &ds, const EmbeddingProvider &provider);
  const PreparedDrug &drug(const std::string &id) const;
  const PreparedProtein &protein(const std::string &id) const;

private:
  std::map<std::string, PreparedDrug> drugs_;
  std::map<std::string, PreparedProtein> proteins_;
};

ModelShape shape_for(const EmbeddingProvider &provider);

std::vector<double> predict(const ModelParams &params, const Dataset &ds,
                            const PreparedSet &prepared,
                            const LevelMask &enabled = kAllLevels);

std::vector<ScoredSample> score(const ModelParams &params, const Dataset &ds,
                                const PreparedSet &prepared,
                                const LevelMask &enabled = kAllLevels);

struct EpochLog {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double val_auc = 0.0;
};

struct TrainResult {
  ModelParams params;  // best-validation parameters at checkpoint precision
  std::vector<EpochLog> log;
  int best_epoch = -1;
  double best_val_auc = 0.0;
};

struct TrainOptions {
  int threads = 1;  // 0 or 1: deterministic single worker
  std::ostream *progress = nullptr;
};

TrainResult train(const Dataset &train_set, const Dataset &val_set,
                  const EmbeddingProvider &provider, const TrainConfig &cfg,
                  const TrainOptions &opts = {});

nlohmann::json log_json(const TrainResult &result);

struct GroupAudit {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // activation pattern changed within +-h
  bool passed = true;
};

struct AuditReport {
  std::vector<GroupAudit> groups;
  double tolerance = 0.0;

  bool passed() const;
};

struct AuditFunctions {
  std::function<double(const ModelParams &)> loss;
  std::function<ModelParams(const ModelParams &)> grad;
  // Optional piecewise-linearity signature; elements whose signature
  // differs at theta +- h are skipped.
  std::function<std::vector<bool>(const ModelParams &)> pattern;
};

struct AuditOptions {
  double step = 1e-4;
  double tolerance = 1e-4;
  std::size_t per_group = 32;
  std::uint64_t seed = 0;
  // Rows eligible for sampling, per tensor name; absent means all rows.
  std::map<std::string, std::vector<Eigen::Index>> rows;
};

AuditReport finite_diff_audit(const ModelParams &params,
                              const AuditFunctions &fns,
                              const AuditOptions &opts);

struct AuditSample {
  const PreparedDrug *drug = nullptr;
  const PreparedProtein *protein = nullptr;
  int label = 0;
};

// Mean BCE over the batch; embedding rows limited to those the batch uses.
AuditFunctions batch_audit_functions(std::vector<AuditSample> batch,
                                     LevelMask enabled = kAllLevels);
AuditReport finite_diff_audit(const ModelParams &params,
                              const std::vector<AuditSample> &batch,
                              AuditOptions opts);

// A small random model with one drug (6 tokens) and one protein (10
// residues, one Helix span, one tertiary span), for the check-grad command.
struct AuditInstance {
  Dataset data;
  PreparedDrug drug;
  PreparedProtein protein;
  ModelParams params;
  int label = 1;
};

AuditInstance make_audit_instance(int dim, std::uint64_t seed);

std::string render_audit(const AuditReport &report);

}  // namespace colddti

#endif  // COLDDTI_TRAINER_H_
