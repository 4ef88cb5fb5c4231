//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/cli.h"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "colddti/attention_export.h"
#include "colddti/checkpoint.h"
#include "colddti/checksum.h"
#include "colddti/data_model.h"
#include "colddti/errors.h"
#include "colddti/metrics.h"
#include "colddti/splits.h"
#include "colddti/synthetic.h"
#include "colddti/trainer.h"

namespace colddti {

namespace {

using nlohmann::json;

struct Options {
  std::string data;
  std::string manifest;
  std::string config;
  std::string embeddings;
  std::string checkpoint;
  std::string out;
  std::string mode = "cold_drug";
  std::string drop;
  std::string split = "test";
  std::string drug;
  std::string protein;
  std::optional<std::uint64_t> seed;
  double threshold = kDefaultThreshold;
  int dim = 8;
  double step = 1e-4;
  double tolerance = 1e-4;
  SyntheticConfig synthetic;
};

// Echoed before any work so a run can be repeated exactly.
void echo(const std::string &command, const json &resolved) {
  std::cout << "command\t" << command << '\n'
            << "config\t" << resolved.dump() << std::endl;
}

json null_if_empty(const std::string &s) {
  return s.empty() ? json(nullptr) : json(s);
}

int worker_threads() {
  const char *env = std::getenv("COLDDTI_THREADS");
  if (!env || !*env)
    return 1;
  char *end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0)
    throw ConfigError("COLDDTI_THREADS must be a non-negative integer");
  return n <= 1 ? 1 : static_cast<int>(n);
}

Dataset load_data(const Options &o) {
  if (o.data.empty())
    throw ConfigError("--data is required");
  return load_dataset(DataPaths::in_directory(o.data));
}

EmbeddingProvider make_provider(const Options &o, const Dataset &ds,
                                int dim = kDefaultEmbeddingDim) {
  if (!o.embeddings.empty())
    return EmbeddingProvider::precomputed(o.embeddings);
  return EmbeddingProvider::toy(build_vocabulary(ds), dim);
}

TrainConfig resolve_config(const Options &o) {
  TrainConfig cfg = o.config.empty() ? TrainConfig {} : load_config(o.config);
  if (o.seed)
    cfg.seed = *o.seed;
  if (!o.drop.empty())
    cfg.ablation = parse_ablation(o.drop);
  cfg.validate();
  return cfg;
}

SplitManifest load_checked_manifest(const Options &o, const Dataset &ds) {
  if (o.manifest.empty())
    throw ConfigError("--manifest is required");
  SplitManifest m = load_manifest(o.manifest);
  if (!ds.interactions_sha256.empty()
      && m.source_checksum != ds.interactions_sha256)
    throw DataError("manifest was built from different interactions data");
  check_manifest(ds, m);
  return m;
}

void check_shape(const ModelParams &params, const EmbeddingProvider &provider) {
  const ModelShape shape = shape_for(provider);
  if (static_cast<std::size_t>(params.drug_table.rows()) != shape.drug_vocab
      || static_cast<std::size_t>(params.protein_table.rows())
             != shape.protein_vocab
      || params.dim() != shape.dim)
    throw DataError("checkpoint does not match the embedding configuration");
}

std::string dataset_name(const Options &o) {
  return std::filesystem::path(o.data).lexically_normal().filename().string();
}

json common_json(const Options &o) {
  return { { "data", null_if_empty(o.data) },
           { "manifest", null_if_empty(o.manifest) },
           { "embeddings", null_if_empty(o.embeddings) },
           { "encoder", o.embeddings.empty() ? "toy" : "precomputed" },
           { "threads", worker_threads() } };
}

int cmd_validate(const Options &o) {
  echo("validate-data", { { "data", o.data } });
  const Dataset ds = load_data(o);
  const ValidationReport r = validate(ds);
  std::cout << "drugs\t" << r.drugs << '\n'
            << "proteins\t" << r.proteins << '\n'
            << "samples\t" << ds.samples.size() << '\n'
            << "positives\t" << r.positives << '\n'
            << "negatives\t" << r.negatives << '\n'
            << "proteins_without_secondary\t" << r.proteins_without_secondary
            << '\n'
            << "proteins_without_tertiary\t" << r.proteins_without_tertiary
            << '\n'
            << "interactions_sha256\t" << ds.interactions_sha256 << '\n';
  return kExitOk;
}

int cmd_split(const Options &o) {
  const SplitMode mode = parse_split_mode(o.mode);
  const std::uint64_t seed = o.seed.value_or(0);
  if (o.out.empty())
    throw ConfigError("--out is required");
  echo("split", { { "data", o.data },
                  { "mode", to_string(mode) },
                  { "seed", seed },
                  { "ratios", { 0.8, 0.1, 0.1 } },
                  { "out", o.out } });
  const Dataset ds = load_data(o);
  const SplitManifest m = make_split(mode, ds, seed);
  check_manifest(ds, m);
  save_manifest(m, o.out);
  std::cout << "train\t" << m.train.size() << '\n'
            << "val\t" << m.val.size() << '\n'
            << "test\t" << m.test.size() << '\n'
            << "discarded\t" << m.discarded << '\n'
            << "self_check\tok\n";
  return kExitOk;
}

struct TrainedRun {
  Dataset ds;
  SplitManifest manifest;
  TrainConfig cfg;
  TrainResult result;
};

TrainedRun train_from(const Options &o, const std::string &command) {
  TrainConfig cfg = resolve_config(o);
  json resolved = common_json(o);
  resolved["train_config"] = config_to_json(cfg);
  resolved["out"] = null_if_empty(o.out);
  resolved["threshold"] = o.threshold;
  echo(command, resolved);

  TrainedRun run;
  run.ds = load_data(o);
  run.manifest = load_checked_manifest(o, run.ds);
  run.cfg = cfg;
  const EmbeddingProvider provider = make_provider(o, run.ds);
  TrainOptions opts;
  opts.threads = worker_threads();
  opts.progress = &std::cout;
  run.result = train(run.ds.subset(run.manifest.train),
                     run.ds.subset(run.manifest.val), provider, cfg, opts);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", run.result.best_val_auc);
  std::cout << "best_epoch\t" << run.result.best_epoch << '\n'
            << "best_val_auc\t" << buf << std::endl;
  return run;
}

int cmd_train(const Options &o) {
  if (o.out.empty())
    throw ConfigError("--out is required");
  TrainedRun run = train_from(o, "train");
  save_checkpoint(run.result.params, o.out);
  json log = log_json(run.result);
  log["config"] = config_to_json(run.cfg);
  write_file_atomic(o.out + ".log.json", log.dump(2) + "\n");
  std::cout << "checkpoint\t" << o.out << '\n';
  return kExitOk;
}

const std::vector<std::size_t> &pick_split(const SplitManifest &m,
                                           const std::string &name) {
  if (name == "train")
    return m.train;
  if (name == "val")
    return m.val;
  if (name == "test")
    return m.test;
  throw ConfigError("--split must be train, val or test");
}

MetricsReport report_on(const ModelParams &params, const Dataset &ds,
                        const std::vector<std::size_t> &indices,
                        const EmbeddingProvider &provider,
                        const LevelMask &enabled, double threshold) {
  const Dataset part = ds.subset(indices);
  const PreparedSet prepared(part, provider);
  return evaluate(score(params, part, prepared, enabled), threshold);
}

void emit_report(const Options &o, const MetricsReport &report,
                 const SplitManifest &m) {
  std::cout << render_report(report);
  if (!o.out.empty()) {
    const json j = report_json(report, dataset_name(o),
                               std::string(to_string(m.mode)), m.seed);
    write_file_atomic(o.out, j.dump(2) + "\n");
  }
}

int cmd_eval(const Options &o) {
  if (o.checkpoint.empty())
    throw ConfigError("--checkpoint is required");
  const TrainConfig cfg = resolve_config(o);
  json resolved = common_json(o);
  resolved["checkpoint"] = o.checkpoint;
  resolved["split"] = o.split;
  resolved["ablation"] = ablation_string(cfg.ablation);
  resolved["threshold"] = o.threshold;
  resolved["out"] = null_if_empty(o.out);
  echo("eval", resolved);

  const Dataset ds = load_data(o);
  const SplitManifest m = load_checked_manifest(o, ds);
  const ModelParams params = load_checkpoint(o.checkpoint);
  const EmbeddingProvider provider = make_provider(o, ds, params.dim());
  check_shape(params, provider);
  const MetricsReport report =
      report_on(params, ds, pick_split(m, o.split), provider,
                cfg.enabled_levels(), o.threshold);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", report.auc);
  std::cout << "split\t" << o.split << '\n' << "auc_exact\t" << buf << '\n';
  emit_report(o, report, m);
  return kExitOk;
}

int cmd_export(const Options &o) {
  if (o.checkpoint.empty() || o.drug.empty() || o.protein.empty()
      || o.out.empty())
    throw ConfigError("--checkpoint, --drug, --protein and --out are required");
  const TrainConfig cfg = resolve_config(o);
  json resolved = common_json(o);
  resolved["checkpoint"] = o.checkpoint;
  resolved["drug"] = o.drug;
  resolved["protein"] = o.protein;
  resolved["ablation"] = ablation_string(cfg.ablation);
  resolved["out"] = o.out;
  echo("export-attention", resolved);

  const Dataset ds = load_data(o);
  const ModelParams params = load_checkpoint(o.checkpoint);
  const EmbeddingProvider provider = make_provider(o, ds, params.dim());
  check_shape(params, provider);
  const AttentionDump dump = export_attention(
      params, o.drug, o.protein, ds, provider, cfg.enabled_levels());
  write_file_atomic(o.out, dump_json(dump).dump(2) + "\n");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", dump.prediction);
  std::cout << "prediction\t" << buf << '\n' << "dump\t" << o.out << '\n';
  return kExitOk;
}

int cmd_ablate(const Options &o) {
  if (o.drop.empty())
    throw ConfigError("--drop is required");
  TrainedRun run = train_from(o, "ablate");
  const EmbeddingProvider provider = make_provider(o, run.ds);
  const MetricsReport report =
      report_on(run.result.params, run.ds, run.manifest.test, provider,
                run.cfg.enabled_levels(), o.threshold);
  std::cout << "ablation\t" << ablation_string(run.cfg.ablation) << '\n';
  emit_report(o, report, run.manifest);
  return kExitOk;
}

int cmd_check_grad(const Options &o) {
  const std::uint64_t seed = o.seed.value_or(1);
  echo("check-grad", { { "dim", o.dim },
                       { "seed", seed },
                       { "step", o.step },
                       { "tolerance", o.tolerance } });
  AuditInstance inst = make_audit_instance(o.dim, seed);
  AuditOptions opts;
  opts.step = o.step;
  opts.tolerance = o.tolerance;
  opts.seed = seed;
  const AuditReport report = finite_diff_audit(
      inst.params, { { &inst.drug, &inst.protein, inst.label } }, opts);
  std::cout << render_audit(report);
  std::cout << "audit\t" << (report.passed() ? "pass" : "fail") << '\n';
  return report.passed() ? kExitOk : kExitAudit;
}

int cmd_gen_synthetic(const Options &o) {
  if (o.out.empty())
    throw ConfigError("--out is required");
  SyntheticConfig cfg = o.synthetic;
  if (o.seed)
    cfg.seed = *o.seed;
  echo("gen-synthetic", { { "out", o.out },
                          { "drugs", cfg.drugs },
                          { "proteins", cfg.proteins },
                          { "samples", cfg.samples },
                          { "seed", cfg.seed },
                          { "motif_rate", cfg.motif_rate } });
  const Dataset ds = generate_synthetic(cfg);
  std::filesystem::create_directories(o.out);
  write_dataset(ds, DataPaths::in_directory(o.out));
  const ValidationReport r = validate(ds);
  std::cout << "samples\t" << ds.samples.size() << '\n'
            << "positives\t" << r.positives << '\n'
            << "negatives\t" << r.negatives << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, char **argv) {
  CLI::App app { "Cold-start drug-target interaction prediction", "colddti" };
  app.require_subcommand(1);
  Options o;

  auto data = [&](CLI::App *c) {
    c->add_option("--data", o.data, "directory with the four TSV files");
  };
  auto embed = [&](CLI::App *c) {
    c->add_option("--embeddings", o.embeddings,
                  "precomputed embedding manifest (default: toy encoder)");
  };
  auto seed = [&](CLI::App *c) { c->add_option("--seed", o.seed, "seed"); };
  auto out = [&](CLI::App *c, const char *what) {
    c->add_option("--out", o.out, what);
  };
  auto training = [&](CLI::App *c) {
    data(c);
    embed(c);
    seed(c);
    c->add_option("--manifest", o.manifest, "split manifest");
    c->add_option("--config", o.config, "training config JSON");
    c->add_option("--threshold", o.threshold, "F1 threshold");
  };

  auto *validate_cmd = app.add_subcommand("validate-data",
                                          "load and check a corpus");
  data(validate_cmd);

  auto *split_cmd = app.add_subcommand("split", "write a cold-start split");
  data(split_cmd);
  seed(split_cmd);
  split_cmd->add_option("--mode", o.mode,
                        "cold-drug, cold-protein or cold-pair");
  out(split_cmd, "manifest path");

  auto *train_cmd = app.add_subcommand("train", "train and save a model");
  training(train_cmd);
  train_cmd->add_option("--drop", o.drop, "levels to ablate (p,s,t,q)");
  out(train_cmd, "checkpoint path");

  auto *eval_cmd = app.add_subcommand("eval", "score a saved model");
  training(eval_cmd);
  eval_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint path");
  eval_cmd->add_option("--drop", o.drop, "levels the model was trained without");
  eval_cmd->add_option("--split", o.split, "train, val or test");
  out(eval_cmd, "report JSON path");

  auto *export_cmd = app.add_subcommand("export-attention",
                                        "dump maps and weights for a pair");
  data(export_cmd);
  embed(export_cmd);
  export_cmd->add_option("--config", o.config, "training config JSON");
  export_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint path");
  export_cmd->add_option("--drug", o.drug, "drug id");
  export_cmd->add_option("--protein", o.protein, "protein id");
  export_cmd->add_option("--drop", o.drop, "levels the model was trained without");
  out(export_cmd, "dump JSON path");

  auto *ablate_cmd = app.add_subcommand("ablate",
                                        "train without some levels and report");
  training(ablate_cmd);
  ablate_cmd->add_option("--drop", o.drop, "levels to ablate (p,s,t,q)");
  out(ablate_cmd, "report JSON path");

  auto *grad_cmd = app.add_subcommand("check-grad",
                                      "finite-difference gradient audit");
  grad_cmd->add_option("--dim", o.dim, "embedding width");
  seed(grad_cmd);
  grad_cmd->add_option("--step", o.step, "difference step");
  grad_cmd->add_option("--tolerance", o.tolerance, "relative error bound");

  auto *gen_cmd = app.add_subcommand("gen-synthetic",
                                     "write the planted-rule corpus");
  out(gen_cmd, "output directory");
  seed(gen_cmd);
  gen_cmd->add_option("--drugs", o.synthetic.drugs, "drug count");
  gen_cmd->add_option("--proteins", o.synthetic.proteins, "protein count");
  gen_cmd->add_option("--samples", o.synthetic.samples, "sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed())
      return cmd_validate(o);
    if (split_cmd->parsed())
      return cmd_split(o);
    if (train_cmd->parsed())
      return cmd_train(o);
    if (eval_cmd->parsed())
      return cmd_eval(o);
    if (export_cmd->parsed())
      return cmd_export(o);
    if (ablate_cmd->parsed())
      return cmd_ablate(o);
    if (grad_cmd->parsed())
      return cmd_check_grad(o);
    if (gen_cmd->parsed())
      return cmd_gen_synthetic(o);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError &e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace colddti
