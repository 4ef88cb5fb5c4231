//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_SPLITS_H_
#define COLDDTI_SPLITS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "colddti/data_model.h"

namespace colddti {

enum class SplitMode { kColdDrug, kColdProtein, kColdPair };

std::string_view to_string(SplitMode mode);  // "cold_drug", ...
// Accepts underscores or hyphens; throws ConfigError otherwise.
SplitMode parse_split_mode(std::string_view text);

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  bool operator==(const SplitRatios &) const = default;
};

// Apportions n entities by largest remainder, so every bucket is within
// one entity of its exact share. Remainder ties go train, val, test.
std::array<std::size_t, 3> bucket_sizes(std::size_t n,
                                        const SplitRatios &ratios);

struct SplitManifest {
  SplitMode mode = SplitMode::kColdDrug;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::vector<std::size_t> train;  // indices into Dataset::samples
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  std::size_t discarded = 0;  // cold_pair only
  std::string source_checksum;

  bool operator==(const SplitManifest &) const = default;
};

// Entities are the distinct ids referenced by samples, sorted, then
// shuffled with SplitMix64(seed). Throws DataError with fewer than three
// entities (and, for cold_pair, when any bucket ends up with no samples).
SplitManifest split_cold_drug(const Dataset &ds, std::uint64_t seed,
                              const SplitRatios &ratios = {});
SplitManifest split_cold_protein(const Dataset &ds, std::uint64_t seed,
                                 const SplitRatios &ratios = {});
SplitManifest split_cold_pair(const Dataset &ds, std::uint64_t seed,
                              const SplitRatios &ratios = {});
SplitManifest make_split(SplitMode mode, const Dataset &ds,
                         std::uint64_t seed, const SplitRatios &ratios = {});

// Throws DataError if indices overlap or leave samples unaccounted for, or
// if entity ids leak across buckets for the manifest's mode.
void check_manifest(const Dataset &ds, const SplitManifest &manifest);

nlohmann::json manifest_to_json(const SplitManifest &manifest);
SplitManifest manifest_from_json(const nlohmann::json &j);
std::string encode_manifest(const SplitManifest &manifest);

void save_manifest(const SplitManifest &manifest,
                   const std::filesystem::path &path);
SplitManifest load_manifest(const std::filesystem::path &path);

}  // namespace colddti

#endif  // COLDDTI_SPLITS_H_
