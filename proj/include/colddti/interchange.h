//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_INTERCHANGE_H_
#define COLDDTI_INTERCHANGE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace colddti {

// Per-entity token embedding file:
//   "CDTI" | u16 version=1 | u32 token_count | u32 dim | f32[token_count*dim]
// all little-endian, rows contiguous.
inline constexpr std::uint16_t kInterchangeVersion = 1;

std::string encode_interchange(const Eigen::MatrixXf &matrix);
Eigen::MatrixXf decode_interchange(std::string_view bytes);

enum class EntitySide { kDrug, kProtein };

struct ManifestEntry {
  std::string id;
  EntitySide side = EntitySide::kDrug;
  std::string file;  // relative to the manifest's directory
  std::uint32_t token_count = 0;
  std::string sha256;
};

struct EmbeddingManifest {
  int version = 1;
  int dim = 0;
  std::vector<ManifestEntry> entities;

  const ManifestEntry *find(std::string_view id, EntitySide side) const;
  const ManifestEntry *find(std::string_view id) const;
};

EmbeddingManifest read_manifest(const std::filesystem::path &manifest_path);
void write_manifest(const EmbeddingManifest &manifest,
                    const std::filesystem::path &manifest_path);

// Loads one entity's matrix, verifying checksum, header and, when given,
// the expected token count. Throws DataError naming the failing check.
Eigen::MatrixXd
load_precomputed(const std::filesystem::path &manifest_path,
                 std::string_view entity_id,
                 std::optional<std::size_t> expected_token_count = {});

// Same as above against an already parsed manifest.
Eigen::MatrixXd
load_precomputed(const EmbeddingManifest &manifest,
                 const std::filesystem::path &manifest_dir,
                 std::string_view entity_id, std::optional<EntitySide> side,
                 std::optional<std::size_t> expected_token_count);

}  // namespace colddti

#endif  // COLDDTI_INTERCHANGE_H_
