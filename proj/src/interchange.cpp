//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/interchange.h"

#include <bit>
#include <cstring>
#include <sstream>

#include "json.hpp"

#include "colddti/checksum.h"
#include "colddti/errors.h"

namespace colddti {

static_assert(std::endian::native == std::endian::little,
              "interchange I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::string &out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::string_view bytes, std::size_t &pos) {
  if (pos + sizeof(T) > bytes.size())
    throw DataError("interchange file truncated");
  T value;
  std::memcpy(&value, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

}  // namespace

std::string encode_interchange(const Eigen::MatrixXf &matrix) {
  std::string out = "CDTI";
  put<std::uint16_t>(out, kInterchangeVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.cols()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
      put<float>(out, matrix(i, j));
  return out;
}

Eigen::MatrixXf decode_interchange(std::string_view bytes) {
  if (bytes.substr(0, 4) != "CDTI")
    throw DataError("interchange file: bad magic");
  std::size_t pos = 4;
  const auto version = get<std::uint16_t>(bytes, pos);
  if (version != kInterchangeVersion)
    throw DataError("interchange file: unsupported version "
                    + std::to_string(version));
  const auto rows = get<std::uint32_t>(bytes, pos);
  const auto cols = get<std::uint32_t>(bytes, pos);
  const std::size_t expected =
      pos + static_cast<std::size_t>(rows) * cols * sizeof(float);
  if (bytes.size() != expected) {
    std::ostringstream oss;
    oss << "interchange file: expected " << expected << " bytes, got "
        << bytes.size();
    throw DataError(oss.str());
  }
  Eigen::MatrixXf m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j)
      m(i, j) = get<float>(bytes, pos);
  return m;
}

const ManifestEntry *EmbeddingManifest::find(std::string_view id,
                                             EntitySide side) const {
  for (const ManifestEntry &e: entities)
    if (e.id == id && e.side == side)
      return &e;
  return nullptr;
}

const ManifestEntry *EmbeddingManifest::find(std::string_view id) const {
  for (const ManifestEntry &e: entities)
    if (e.id == id)
      return &e;
  return nullptr;
}

EmbeddingManifest read_manifest(const std::filesystem::path &manifest_path) {
  EmbeddingManifest m;
  try {
    auto j = nlohmann::json::parse(read_file(manifest_path));
    m.version = j.at("version").get<int>();
    if (m.version != 1)
      throw DataError("unsupported manifest version "
                      + std::to_string(m.version));
    m.dim = j.at("dim").get<int>();
    for (const auto &e: j.at("entities")) {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      const auto side = e.at("side").get<std::string>();
      if (side == "drug")
        entry.side = EntitySide::kDrug;
      else if (side == "protein")
        entry.side = EntitySide::kProtein;
      else
        throw DataError("entity '" + entry.id + "': bad side '" + side + "'");
      entry.file = e.at("file").get<std::string>();
      entry.token_count = e.at("token_count").get<std::uint32_t>();
      entry.sha256 = e.at("sha256").get<std::string>();
      m.entities.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  return m;
}

void write_manifest(const EmbeddingManifest &manifest,
                    const std::filesystem::path &manifest_path) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["dim"] = manifest.dim;
  j["entities"] = nlohmann::json::array();
  for (const ManifestEntry &e: manifest.entities) {
    j["entities"].push_back({
        { "id", e.id },
        { "side", e.side == EntitySide::kDrug ? "drug" : "protein" },
        { "file", e.file },
        { "token_count", e.token_count },
        { "sha256", e.sha256 },
    });
  }
  write_file_atomic(manifest_path, j.dump(2) + "\n");
}

Eigen::MatrixXd
load_precomputed(const EmbeddingManifest &manifest,
                 const std::filesystem::path &manifest_dir,
                 std::string_view entity_id, std::optional<EntitySide> side,
                 std::optional<std::size_t> expected_token_count) {
  const ManifestEntry *entry =
      side ? manifest.find(entity_id, *side) : manifest.find(entity_id);
  if (entry == nullptr)
    throw DataError("missing entity '" + std::string(entity_id)
                    + "' in embedding manifest");

  const std::string bytes = read_file(manifest_dir / entry->file);
  if (sha256_hex(bytes) != entry->sha256)
    throw DataError("checksum mismatch for entity '" + entry->id + "'");

  Eigen::MatrixXf m = decode_interchange(bytes);
  if (static_cast<std::uint32_t>(m.rows()) != entry->token_count) {
    throw DataError("entity '" + entry->id
                    + "': file token count disagrees with manifest");
  }
  if (manifest.dim != 0 && m.cols() != manifest.dim) {
    throw DataError("entity '" + entry->id
                    + "': file width disagrees with manifest dim");
  }
  if (expected_token_count
      && static_cast<std::size_t>(m.rows()) != *expected_token_count) {
    std::ostringstream oss;
    oss << "token-count mismatch for entity '" << entry->id << "': stored "
        << m.rows() << ", tokenizer produced " << *expected_token_count;
    throw DataError(oss.str());
  }
  if (!m.allFinite())
    throw DataError("entity '" + entry->id + "' has non-finite embeddings");
  return m.cast<double>();
}

Eigen::MatrixXd
load_precomputed(const std::filesystem::path &manifest_path,
                 std::string_view entity_id,
                 std::optional<std::size_t> expected_token_count) {
  return load_precomputed(read_manifest(manifest_path),
                          manifest_path.parent_path(), entity_id,
                          std::nullopt, expected_token_count);
}

}  // namespace colddti
