//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/embedding.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "colddti/errors.h"

namespace colddti {

Matrix uniform_init(Eigen::Index rows, Eigen::Index cols, SplitMix64 &rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = rng.uniform(-a, a);
  return m;
}

EmbeddingTable EmbeddingTable::init(std::size_t vocab_size, int dim,
                                    SplitMix64 &rng) {
  return { uniform_init(static_cast<Eigen::Index>(vocab_size), dim, rng) };
}

Matrix toy_encode(std::span<const int> ids, const Matrix &table) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (std::size_t i = 0; i < ids.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = table.row(ids[i]);
  return out;
}

Matrix toy_encode(std::span<const std::string> tokens,
                  const Vocabulary &vocab, const Matrix &table) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string &t: tokens)
    ids.push_back(vocab.index_of(t));
  return toy_encode(ids, table);
}

ProteinPooling::ProteinPooling(const TaggedProtein &layout,
                               const std::vector<StructureSpan> &spans)
    : token_count_(layout.tokens.size()),
      residues_(layout.residue_positions) {
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const SpanAnchors &a = layout.anchors[k];
    std::vector<std::size_t> members;
    members.push_back(a.start_tag);
    if (a.type_token)
      members.push_back(*a.type_token);
    for (int r = spans[k].start; r <= spans[k].end; ++r)
      members.push_back(layout.residue_positions[r - 1]);
    members.push_back(a.end_tag);

    if (spans[k].kind == SpanKind::kSecondary)
      secondary_.push_back(std::move(members));
    else
      tertiary_.push_back(std::move(members));
  }
}

namespace {

Matrix mean_rows(const Matrix &emb,
                 const std::vector<std::vector<std::size_t>> &groups) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(groups.size()),
                            emb.cols());
  for (std::size_t j = 0; j < groups.size(); ++j) {
    for (std::size_t t: groups[j])
      out.row(j) += emb.row(t);
    out.row(j) /= static_cast<double>(groups[j].size());
  }
  return out;
}

void mean_rows_backward(const Matrix &grad,
                        const std::vector<std::vector<std::size_t>> &groups,
                        Matrix &d_emb) {
  for (std::size_t j = 0; j < groups.size(); ++j) {
    const double inv = 1.0 / static_cast<double>(groups[j].size());
    for (std::size_t t: groups[j])
      d_emb.row(t) += inv * grad.row(j);
  }
}

}  // namespace

Matrix ProteinPooling::pool_level(const Matrix &emb, int level) const {
  if (static_cast<std::size_t>(emb.rows()) != token_count_) {
    std::ostringstream oss;
    oss << "protein embedding has " << emb.rows() << " rows for "
        << token_count_ << " tokens";
    throw NumericalError(oss.str());
  }
  switch (level) {
  case 0: {
    Matrix out(static_cast<Eigen::Index>(residues_.size()), emb.cols());
    for (std::size_t i = 0; i < residues_.size(); ++i)
      out.row(i) = emb.row(residues_[i]);
    return out;
  }
  case 1:
    return mean_rows(emb, secondary_);
  case 2:
    return mean_rows(emb, tertiary_);
  default:
    return emb.colwise().mean();
  }
}

LevelEmbeddings ProteinPooling::pool(const Matrix &emb) const {
  return { pool_level(emb, 0), pool_level(emb, 1), pool_level(emb, 2),
           pool_level(emb, 3) };
}

void ProteinPooling::backward_level(int level, const Matrix &grad,
                                    Matrix &d_emb) const {
  if (grad.size() == 0)
    return;
  switch (level) {
  case 0:
    for (std::size_t i = 0; i < residues_.size(); ++i)
      d_emb.row(residues_[i]) += grad.row(i);
    break;
  case 1:
    mean_rows_backward(grad, secondary_, d_emb);
    break;
  case 2:
    mean_rows_backward(grad, tertiary_, d_emb);
    break;
  default:
    d_emb.rowwise() += grad.row(0) / static_cast<double>(token_count_);
  }
}

void ProteinPooling::backward(const LevelEmbeddings &grad,
                              Matrix &d_emb) const {
  backward_level(0, grad.primary, d_emb);
  backward_level(1, grad.secondary, d_emb);
  backward_level(2, grad.tertiary, d_emb);
  backward_level(3, grad.quaternary, d_emb);
}

LevelEmbeddings pool_protein_levels(const std::vector<ProteinToken> &tokens,
                                    const Matrix &emb,
                                    const std::vector<StructureSpan> &spans) {
  ProteinRecord record;
  for (const ProteinToken &t: tokens) {
    if (t.kind == ProteinTokenKind::kResidue)
      record.residues += t.text;
  }
  record.spans = spans;
  TaggedProtein layout = layout_protein_tags(record);
  if (layout.tokens != tokens)
    throw DataError("protein tokens do not match the tag layout of spans");
  return ProteinPooling(layout, spans).pool(emb);
}

DrugEmbeddings pool_drug(const Matrix &emb) {
  if (emb.rows() == 0)
    throw NumericalError("drug has no tokens to pool");
  return { emb, emb.colwise().mean() };
}

EmbeddingProvider EmbeddingProvider::toy(Vocabularies vocab, int dim) {
  if (dim < 1)
    throw ConfigError("embedding width must be positive");
  EmbeddingProvider p;
  p.vocab_ = std::move(vocab);
  p.dim_ = dim;
  return p;
}

EmbeddingProvider
EmbeddingProvider::precomputed(const std::filesystem::path &manifest) {
  EmbeddingProvider p;
  p.manifest_ = read_manifest(manifest);
  p.manifest_dir_ = manifest.parent_path();
  p.dim_ = p.manifest_->dim;
  if (p.dim_ < 1)
    throw DataError(manifest.string() + ": embedding dim must be positive");
  return p;
}

PreparedDrug EmbeddingProvider::prepare(const DrugRecord &drug) const {
  PreparedDrug out;
  out.id = drug.id;
  out.tokens = tokenize_smiles(drug.smiles);
  if (manifest_) {
    out.fixed = load_precomputed(*manifest_, manifest_dir_, drug.id,
                                 EntitySide::kDrug, out.tokens.size());
  } else {
    out.ids.reserve(out.tokens.size());
    for (const DrugToken &t: out.tokens)
      out.ids.push_back(vocab_.drug.index_of(t.text));
  }
  return out;
}

PreparedProtein EmbeddingProvider::prepare(const ProteinRecord &protein) const {
  PreparedProtein out;
  out.id = protein.id;
  out.spans = protein.spans;
  out.layout = layout_protein_tags(protein);
  out.pooling = ProteinPooling(out.layout, out.spans);
  if (manifest_) {
    out.fixed =
        load_precomputed(*manifest_, manifest_dir_, protein.id,
                         EntitySide::kProtein, out.layout.tokens.size());
  } else {
    out.ids.reserve(out.layout.tokens.size());
    for (const ProteinToken &t: out.layout.tokens)
      out.ids.push_back(vocab_.protein.index_of(t.text));
  }
  return out;
}

}  // namespace colddti
