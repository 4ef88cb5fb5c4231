//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/trainer.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "colddti/checksum.h"
#include "colddti/errors.h"

namespace colddti {

void TrainConfig::validate() const {
  if (!(learning_rate > 0) || !std::isfinite(learning_rate))
    throw ConfigError("learning_rate must be positive");
  if (!(weight_decay >= 0) || !std::isfinite(weight_decay))
    throw ConfigError("weight_decay must be non-negative");
  if (batch_size < 1)
    throw ConfigError("batch_size must be at least 1");
  if (max_epochs < 0)
    throw ConfigError("max_epochs must be non-negative");
  if (!(lr_decay_factor > 0 && lr_decay_factor <= 1))
    throw ConfigError("lr_decay_factor must lie in (0, 1]");
  if (lr_decay_every < 1)
    throw ConfigError("lr_decay_every must be at least 1");
  if (early_stop_patience < 1)
    throw ConfigError("early_stop_patience must be at least 1");
  const LevelMask mask = enabled_levels();
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }))
    throw ConfigError("ablation removes every protein level");
}

LevelMask TrainConfig::enabled_levels() const {
  LevelMask mask = kAllLevels;
  for (ProteinLevel level: ablation)
    mask[static_cast<std::size_t>(level)] = false;
  return mask;
}

std::vector<ProteinLevel> parse_ablation(std::string_view text) {
  std::vector<ProteinLevel> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos)
      comma = text.size();
    const std::string_view item = text.substr(pos, comma - pos);
    std::optional<ProteinLevel> level;
    if (item.size() == 1)
      level = parse_protein_level(item[0]);
    if (!level)
      throw ConfigError("unknown protein level '" + std::string(item)
                        + "' (expected p, s, t or q)");
    if (std::find(out.begin(), out.end(), *level) == out.end())
      out.push_back(*level);
    pos = comma + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string ablation_string(const std::vector<ProteinLevel> &ablation) {
  std::string out;
  for (ProteinLevel level: ablation) {
    if (!out.empty())
      out += ',';
    out += level_code(level);
  }
  return out;
}

nlohmann::json config_to_json(const TrainConfig &cfg) {
  nlohmann::json ablation = nlohmann::json::array();
  for (ProteinLevel level: cfg.ablation)
    ablation.push_back(std::string(1, level_code(level)));
  return {
    { "learning_rate", cfg.learning_rate },
    { "weight_decay", cfg.weight_decay },
    { "batch_size", cfg.batch_size },
    { "max_epochs", cfg.max_epochs },
    { "lr_decay_factor", cfg.lr_decay_factor },
    { "lr_decay_every", cfg.lr_decay_every },
    { "seed", cfg.seed },
    { "early_stop_patience", cfg.early_stop_patience },
    { "ablation", ablation },
  };
}

TrainConfig config_from_json(const nlohmann::json &j) {
  if (!j.is_object())
    throw ConfigError("training config must be a JSON object");
  TrainConfig cfg;
  try {
    for (const auto &[key, value]: j.items()) {
      if (key == "learning_rate")
        cfg.learning_rate = value.get<double>();
      else if (key == "weight_decay")
        cfg.weight_decay = value.get<double>();
      else if (key == "batch_size")
        cfg.batch_size = value.get<int>();
      else if (key == "max_epochs")
        cfg.max_epochs = value.get<int>();
      else if (key == "lr_decay_factor")
        cfg.lr_decay_factor = value.get<double>();
      else if (key == "lr_decay_every")
        cfg.lr_decay_every = value.get<int>();
      else if (key == "seed")
        cfg.seed = value.get<std::uint64_t>();
      else if (key == "early_stop_patience")
        cfg.early_stop_patience = value.get<int>();
      else if (key == "ablation") {
        std::string joined;
        if (value.is_string()) {
          joined = value.get<std::string>();
        } else {
          for (const auto &item: value) {
            if (!joined.empty())
              joined += ',';
            joined += item.get<std::string>();
          }
        }
        cfg.ablation = parse_ablation(joined);
      } else
        throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("bad training config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

TrainConfig load_config(const std::filesystem::path &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

double lr_at_epoch(const TrainConfig &cfg, int epoch) {
  if (epoch < 0)
    throw ConfigError("epoch must be non-negative");
  return cfg.learning_rate
         * std::pow(cfg.lr_decay_factor, epoch / cfg.lr_decay_every);
}

OptimizerState OptimizerState::for_params(const ModelParams &params) {
  OptimizerState s;
  s.m = params.zeros_like();
  s.v = params.zeros_like();
  return s;
}

void adam_step(ModelParams &params, ModelParams &grads, OptimizerState &state,
               double lr, const TrainConfig &cfg) {
  std::vector<TensorView> p = params.tensors();
  std::vector<TensorView> g = grads.tensors();
  std::vector<TensorView> m = state.m.tensors();
  std::vector<TensorView> v = state.v.tensors();
  if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size())
    throw NumericalError("optimizer state does not match the parameters");
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k].values.rows() != g[k].values.rows()
        || p[k].values.cols() != g[k].values.cols()
        || p[k].values.size() != m[k].values.size())
      throw NumericalError("gradient shape mismatch for " + p[k].name);
    if (!g[k].values.allFinite())
      throw NumericalError("non-finite gradient in " + p[k].name);
  }

  ++state.t;
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto theta = p[k].values.array();
    const Eigen::ArrayXXd grad =
        g[k].values.array() + cfg.weight_decay * theta;
    auto m1 = m[k].values.array();
    auto m2 = v[k].values.array();
    m1 = kAdamBeta1 * m1 + (1.0 - kAdamBeta1) * grad;
    m2 = kAdamBeta2 * m2 + (1.0 - kAdamBeta2) * grad.square();
    theta -= lr * (m1 / c1) / ((m2 / c2).sqrt() + kAdamEpsilon);
  }
}

PreparedSet::PreparedSet(const Dataset &ds,
                         const EmbeddingProvider &provider) {
  add(ds, provider);
}

void PreparedSet::add(const Dataset &ds, const EmbeddingProvider &provider) {
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const InteractionSample &s = ds.samples[i];
    auto context = [&] {
      return "sample " + std::to_string(i) + " (" + s.drug_id + ", "
             + s.protein_id + "): ";
    };
    try {
      if (!drugs_.contains(s.drug_id)) {
        auto it = ds.drugs.find(s.drug_id);
        if (it == ds.drugs.end())
          throw DataError("unknown drug id '" + s.drug_id + "'");
        drugs_.emplace(s.drug_id, provider.prepare(it->second));
      }
      if (!proteins_.contains(s.protein_id)) {
        auto it = ds.proteins.find(s.protein_id);
        if (it == ds.proteins.end())
          throw DataError("unknown protein id '" + s.protein_id + "'");
        proteins_.emplace(s.protein_id, provider.prepare(it->second));
      }
    } catch (const DataError &e) {
      throw DataError(context() + e.what());
    } catch (const NumericalError &e) {
      throw NumericalError(context() + e.what());
    }
  }
}

const PreparedDrug &PreparedSet::drug(const std::string &id) const {
  auto it = drugs_.find(id);
  if (it == drugs_.end())
    throw DataError("drug '" + id + "' was not prepared");
  return it->second;
}

const PreparedProtein &PreparedSet::protein(const std::string &id) const {
  auto it = proteins_.find(id);
  if (it == proteins_.end())
    throw DataError("protein '" + id + "' was not prepared");
  return it->second;
}

ModelShape shape_for(const EmbeddingProvider &provider) {
  ModelShape shape;
  shape.dim = provider.dim();
  shape.projection_width = provider.dim();
  if (provider.uses_tables()) {
    shape.drug_vocab = provider.vocab().drug.size();
    shape.protein_vocab = provider.vocab().protein.size();
  }
  return shape;
}

std::vector<double> predict(const ModelParams &params, const Dataset &ds,
                            const PreparedSet &prepared,
                            const LevelMask &enabled) {
  std::vector<double> out;
  out.reserve(ds.samples.size());
  for (const InteractionSample &s: ds.samples)
    out.push_back(forward(params, prepared.drug(s.drug_id),
                          prepared.protein(s.protein_id), enabled)
                      .prediction);
  return out;
}

std::vector<ScoredSample> score(const ModelParams &params, const Dataset &ds,
                                const PreparedSet &prepared,
                                const LevelMask &enabled) {
  const std::vector<double> yhat = predict(params, ds, prepared, enabled);
  std::vector<ScoredSample> out;
  out.reserve(yhat.size());
  for (std::size_t i = 0; i < yhat.size(); ++i)
    out.push_back({ yhat[i], ds.samples[i].label });
  return out;
}

namespace {

void add_into(ModelParams &into, ModelParams &from) {
  std::vector<TensorView> a = into.tensors();
  std::vector<TensorView> b = from.tensors();
  for (std::size_t k = 0; k < a.size(); ++k)
    a[k].values += b[k].values;
}

void scale(ModelParams &p, double factor) {
  for (TensorView &t: p.tensors())
    t.values *= factor;
}

void set_zero(ModelParams &p) {
  for (TensorView &t: p.tensors())
    t.values.setZero();
}

bool has_both_classes(const Dataset &ds) {
  bool pos = false, neg = false;
  for (const InteractionSample &s: ds.samples)
    (s.label == 1 ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

TrainResult train(const Dataset &train_set, const Dataset &val_set,
                  const EmbeddingProvider &provider, const TrainConfig &cfg,
                  const TrainOptions &opts) {
  cfg.validate();
  if (train_set.samples.empty())
    throw DataError("training set is empty");
  if (val_set.samples.empty())
    throw DataError("validation set is empty");

  SplitMix64 rng(cfg.seed);
  TrainResult result;
  result.params = ModelParams::init(shape_for(provider), rng);
  if (cfg.max_epochs == 0)
    return result;
  if (!has_both_classes(val_set))
    throw DataError("validation set needs both positive and negative labels");

  PreparedSet prepared(train_set, provider);
  prepared.add(val_set, provider);
  const LevelMask enabled = cfg.enabled_levels();

  ModelParams &params = result.params;
  ModelParams best = params;
  OptimizerState state = OptimizerState::for_params(params);
  const int workers = std::max(1, opts.threads);
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);

  // One scratch gradient per in-flight sample; reduced in sample order.
  const std::size_t slots = workers == 1 ? 1 : batch;
  std::vector<ModelParams> scratch(slots, params.zeros_like());
  std::vector<double> losses(batch);
  ModelParams grad = params.zeros_like();

  std::vector<std::size_t> order(train_set.samples.size());
  double best_auc = -std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double lr = lr_at_epoch(cfg, epoch);
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch) {
      const std::size_t count = std::min(batch, order.size() - begin);
      auto run_one = [&](std::size_t j, ModelParams &g) {
        const InteractionSample &s = train_set.samples[order[begin + j]];
        set_zero(g);
        losses[j] = loss_and_grad(params, prepared.drug(s.drug_id),
                                  prepared.protein(s.protein_id), s.label,
                                  enabled, &g);
      };

      set_zero(grad);
      if (workers == 1) {
        for (std::size_t j = 0; j < count; ++j) {
          run_one(j, scratch[0]);
          add_into(grad, scratch[0]);
        }
      } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              for (std::size_t j = w; j < count; j += workers)
                run_one(j, scratch[j]);
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
        for (std::thread &t: pool)
          t.join();
        for (const std::exception_ptr &e: errors)
          if (e)
            std::rethrow_exception(e);
        for (std::size_t j = 0; j < count; ++j)
          add_into(grad, scratch[j]);
      }
      for (std::size_t j = 0; j < count; ++j)
        loss_sum += losses[j];
      scale(grad, 1.0 / static_cast<double>(count));
      adam_step(params, grad, state, lr, cfg);
    }

    // Validation runs at checkpoint precision so a saved model reproduces
    // the logged AUC exactly.
    ModelParams rounded = params.rounded_to_float();
    const double auc = roc_auc(score(rounded, val_set, prepared, enabled));
    EpochLog entry { epoch, lr,
                     loss_sum / static_cast<double>(order.size()), auc };
    result.log.push_back(entry);
    if (opts.progress) {
      *opts.progress << "epoch " << epoch << "\tlr " << lr << "\tloss "
                     << std::setprecision(6) << entry.train_loss
                     << "\tval_auc " << auc << std::endl;
    }

    if (auc > best_auc) {
      best_auc = auc;
      best = std::move(rounded);
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= cfg.early_stop_patience) {
      break;
    }
  }

  result.params = std::move(best);
  result.best_val_auc = best_auc;
  return result;
}

nlohmann::json log_json(const TrainResult &result) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochLog &e: result.log) {
    epochs.push_back({ { "epoch", e.epoch },
                       { "learning_rate", e.learning_rate },
                       { "train_loss", e.train_loss },
                       { "val_auc", e.val_auc } });
  }
  nlohmann::json j = { { "best_epoch", result.best_epoch }, { "epochs", epochs } };
  if (result.best_epoch >= 0)
    j["best_val_auc"] = result.best_val_auc;
  else
    j["best_val_auc"] = nullptr;
  return j;
}

bool AuditReport::passed() const {
  return std::all_of(groups.begin(), groups.end(),
                     [](const GroupAudit &g) { return g.passed; });
}

AuditReport finite_diff_audit(const ModelParams &params,
                              const AuditFunctions &fns,
                              const AuditOptions &opts) {
  if (!(opts.step > 0))
    throw ConfigError("finite-difference step must be positive");
  if (params.parameter_count() == 0)
    throw ConfigError("model has no parameters to audit");

  ModelParams work = params;
  ModelParams analytic = fns.grad(params);
  const std::vector<bool> base =
      fns.pattern ? fns.pattern(params) : std::vector<bool> {};
  std::vector<TensorView> views = work.tensors();
  std::vector<TensorView> grads = analytic.tensors();
  SplitMix64 rng(opts.seed);

  AuditReport report;
  report.tolerance = opts.tolerance;
  for (std::size_t k = 0; k < views.size(); ++k) {
    auto &values = views[k].values;
    GroupAudit group;
    group.name = views[k].name;

    std::vector<Eigen::Index> rows;
    if (auto it = opts.rows.find(group.name); it != opts.rows.end()) {
      rows = it->second;
    } else {
      rows.resize(values.rows());
      std::iota(rows.begin(), rows.end(), Eigen::Index { 0 });
    }
    std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
    for (Eigen::Index r: rows)
      for (Eigen::Index c = 0; c < values.cols(); ++c)
        cells.emplace_back(r, c);
    if (cells.size() > opts.per_group) {
      rng.shuffle(cells);
      cells.resize(opts.per_group);
    }

    for (auto [r, c]: cells) {
      const double orig = values(r, c);
      values(r, c) = orig + opts.step;
      const double up = fns.loss(work);
      const bool kink_up = fns.pattern && fns.pattern(work) != base;
      values(r, c) = orig - opts.step;
      const double down = fns.loss(work);
      const bool kink_down = fns.pattern && fns.pattern(work) != base;
      values(r, c) = orig;
      if (kink_up || kink_down) {
        ++group.skipped;
        continue;
      }
      const double numeric = (up - down) / (2.0 * opts.step);
      const double a = grads[k].values(r, c);
      const double denom = std::max({ std::abs(a), std::abs(numeric), 1e-6 });
      group.max_rel_error =
          std::max(group.max_rel_error, std::abs(a - numeric) / denom);
      ++group.checked;
    }
    group.passed = group.max_rel_error <= opts.tolerance;
    report.groups.push_back(std::move(group));
  }
  return report;
}

AuditFunctions batch_audit_functions(std::vector<AuditSample> batch,
                                     LevelMask enabled) {
  if (batch.empty())
    throw ConfigError("audit batch is empty");
  AuditFunctions fns;
  const double inv = 1.0 / static_cast<double>(batch.size());
  fns.loss = [batch, enabled, inv](const ModelParams &p) {
    double sum = 0.0;
    for (const AuditSample &s: batch)
      sum += loss_and_grad(p, *s.drug, *s.protein, s.label, enabled, nullptr);
    return sum * inv;
  };
  fns.grad = [batch, enabled, inv](const ModelParams &p) {
    ModelParams g = p.zeros_like();
    for (const AuditSample &s: batch)
      loss_and_grad(p, *s.drug, *s.protein, s.label, enabled, &g);
    scale(g, inv);
    return g;
  };
  fns.pattern = [batch, enabled](const ModelParams &p) {
    std::vector<bool> bits;
    for (const AuditSample &s: batch) {
      const ForwardPass f = forward(p, *s.drug, *s.protein, enabled);
      for (std::size_t l = 0; l + 1 < f.mlp.pre.size(); ++l)
        for (Eigen::Index i = 0; i < f.mlp.pre[l].size(); ++i)
          bits.push_back(f.mlp.pre[l][i] > 0);
    }
    return bits;
  };
  return fns;
}

AuditReport finite_diff_audit(const ModelParams &params,
                              const std::vector<AuditSample> &batch,
                              AuditOptions opts) {
  std::set<Eigen::Index> drug_rows, protein_rows;
  for (const AuditSample &s: batch) {
    drug_rows.insert(s.drug->ids.begin(), s.drug->ids.end());
    protein_rows.insert(s.protein->ids.begin(), s.protein->ids.end());
  }
  opts.rows["embedding.drug"].assign(drug_rows.begin(), drug_rows.end());
  opts.rows["embedding.protein"].assign(protein_rows.begin(),
                                        protein_rows.end());
  return finite_diff_audit(params, batch_audit_functions(batch), opts);
}

AuditInstance make_audit_instance(int dim, std::uint64_t seed) {
  if (dim < 1)
    throw ConfigError("audit dimension must be positive");
  AuditInstance inst;
  inst.data.drugs.emplace("D1", DrugRecord { "D1", "CCOC=N" });
  ProteinRecord protein { "P1", "MKVLAHGTRE", {} };
  protein.spans.push_back(
      { 2, 5, SpanKind::kSecondary, SecondaryType::kHelix });
  protein.spans.push_back({ 1, 8, SpanKind::kTertiary, SecondaryType::kNone });
  inst.data.proteins.emplace("P1", protein);

  SplitMix64 rng(seed);
  inst.label = static_cast<int>(rng.below(2));
  inst.data.samples.push_back({ "D1", "P1", inst.label });

  EmbeddingProvider provider =
      EmbeddingProvider::toy(build_vocabulary(inst.data), dim);
  inst.drug = provider.prepare(inst.data.drugs.at("D1"));
  inst.protein = provider.prepare(inst.data.proteins.at("P1"));
  inst.params = ModelParams::init(shape_for(provider), rng);
  for (MlpLayer &layer: inst.params.mlp.layers)
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i)
      layer.bias[i] = rng.uniform(-0.1, 0.1);
  return inst;
}

std::string render_audit(const AuditReport &report) {
  std::ostringstream oss;
  oss << "group\tmax_rel_error\tchecked\tskipped\tstatus\n";
  for (const GroupAudit &g: report.groups) {
    oss << g.name << '\t' << std::scientific << std::setprecision(3)
        << g.max_rel_error << '\t' << g.checked << '\t' << g.skipped << '\t'
        << (g.passed ? "ok" : "FAIL") << '\n';
  }
  oss << "tolerance\t" << std::scientific << std::setprecision(1)
      << report.tolerance << '\n';
  return oss.str();
}

}  // namespace colddti
