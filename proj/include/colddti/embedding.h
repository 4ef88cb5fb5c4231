//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_EMBEDDING_H_
#define COLDDTI_EMBEDDING_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colddti/data_model.h"
#include "colddti/interchange.h"
#include "colddti/matrix.h"
#include "colddti/rng.h"
#include "colddti/tokenizer.h"

namespace colddti {

inline constexpr int kDefaultEmbeddingDim = 64;

// Fan-scaled uniform init: U(-a, a), a = sqrt(6 / (rows + cols)).
Matrix uniform_init(Eigen::Index rows, Eigen::Index cols, SplitMix64 &rng);

// Trainable lookup table, one row per vocabulary index.
struct EmbeddingTable {
  Matrix weights;

  static EmbeddingTable init(std::size_t vocab_size, int dim,
                             SplitMix64 &rng);
};

// Row i is the table row of token i (the [UNK] row for unknown tokens).
Matrix toy_encode(std::span<const int> ids, const Matrix &table);
Matrix toy_encode(std::span<const std::string> tokens,
                  const Vocabulary &vocab, const Matrix &table);

struct LevelEmbeddings {
  Matrix primary;     // m x d, one row per residue
  Matrix secondary;   // n_s x d, one row per secondary span
  Matrix tertiary;    // n_t x d
  Matrix quaternary;  // 1 x d, whole tagged sequence
};

struct DrugEmbeddings {
  Matrix local;   // n x d, one row per token
  Matrix global;  // 1 x d, token mean
};

// The linear map from tagged-token rows to the four protein levels. Span
// rows average the span's own tags plus its residues; nested spans' tags
// are not part of the enclosing span.
class ProteinPooling {
public:
  ProteinPooling() = default;
  ProteinPooling(const TaggedProtein &layout,
                 const std::vector<StructureSpan> &spans);

  std::size_t token_count() const { return token_count_; }
  std::size_t secondary_count() const { return secondary_.size(); }
  std::size_t tertiary_count() const { return tertiary_.size(); }
  // Token rows averaged into the j-th secondary / tertiary row.
  const std::vector<std::size_t> &secondary_members(std::size_t j) const {
    return secondary_[j];
  }
  const std::vector<std::size_t> &tertiary_members(std::size_t j) const {
    return tertiary_[j];
  }

  LevelEmbeddings pool(const Matrix &emb) const;

  // One level only: 0 primary, 1 secondary, 2 tertiary, 3 quaternary.
  Matrix pool_level(const Matrix &emb, int level) const;
  void backward_level(int level, const Matrix &grad, Matrix &d_emb) const;

  // Adds the pullback of level gradients onto d_emb (token_count x d). Any
  // grad member may be empty (0 x 0) to mean "no gradient".
  void backward(const LevelEmbeddings &grad, Matrix &d_emb) const;

private:
  std::size_t token_count_ = 0;
  std::vector<std::size_t> residues_;
  std::vector<std::vector<std::size_t>> secondary_;
  std::vector<std::vector<std::size_t>> tertiary_;
};

// Throws DataError if the tokens are not the tag layout of the residues
// they contain under the given spans, or on a row-count mismatch.
LevelEmbeddings pool_protein_levels(const std::vector<ProteinToken> &tokens,
                                    const Matrix &emb,
                                    const std::vector<StructureSpan> &spans);

DrugEmbeddings pool_drug(const Matrix &emb);

// An entity tokenized and ready for the model. Exactly one of `ids`
// (toy table path) or `fixed` (precomputed path) is populated.
struct PreparedDrug {
  std::string id;
  std::vector<DrugToken> tokens;
  std::vector<int> ids;
  std::optional<Matrix> fixed;

  std::size_t token_count() const { return tokens.size(); }
};

struct PreparedProtein {
  std::string id;
  std::vector<StructureSpan> spans;
  TaggedProtein layout;
  ProteinPooling pooling;
  std::vector<int> ids;
  std::optional<Matrix> fixed;

  std::size_t token_count() const { return layout.tokens.size(); }
};

// Supplies per-token embeddings: either the built-in trainable tables or
// frozen matrices read through an embedding manifest.
class EmbeddingProvider {
public:
  static EmbeddingProvider toy(Vocabularies vocab,
                               int dim = kDefaultEmbeddingDim);
  static EmbeddingProvider precomputed(const std::filesystem::path &manifest);

  bool uses_tables() const { return !manifest_.has_value(); }
  int dim() const { return dim_; }
  const Vocabularies &vocab() const { return vocab_; }

  PreparedDrug prepare(const DrugRecord &drug) const;
  PreparedProtein prepare(const ProteinRecord &protein) const;

private:
  EmbeddingProvider() = default;

  Vocabularies vocab_;
  int dim_ = kDefaultEmbeddingDim;
  std::optional<EmbeddingManifest> manifest_;
  std::filesystem::path manifest_dir_;
};

}  // namespace colddti

#endif  // COLDDTI_EMBEDDING_H_
