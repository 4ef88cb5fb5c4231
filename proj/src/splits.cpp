//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/splits.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "colddti/checksum.h"
#include "colddti/errors.h"
#include "colddti/rng.h"

namespace colddti {

std::string_view to_string(SplitMode mode) {
  switch (mode) {
  case SplitMode::kColdDrug:
    return "cold_drug";
  case SplitMode::kColdProtein:
    return "cold_protein";
  case SplitMode::kColdPair:
    break;
  }
  return "cold_pair";
}

SplitMode parse_split_mode(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '-', '_');
  for (SplitMode m: { SplitMode::kColdDrug, SplitMode::kColdProtein,
                      SplitMode::kColdPair })
    if (s == to_string(m))
      return m;
  throw ConfigError("unknown split mode '" + std::string(text)
                    + "' (expected cold-drug, cold-protein or cold-pair)");
}

namespace {

void check_ratios(const SplitRatios &r) {
  if (r.train < 0 || r.val < 0 || r.test < 0
      || std::abs(r.train + r.val + r.test - 1.0) > 1e-9)
    throw ConfigError("split ratios must be non-negative and sum to 1");
}

}  // namespace

std::array<std::size_t, 3> bucket_sizes(std::size_t n,
                                        const SplitRatios &ratios) {
  check_ratios(ratios);
  const std::array<double, 3> share = { ratios.train, ratios.val,
                                        ratios.test };
  std::array<std::size_t, 3> sizes {};
  std::array<double, 3> frac {};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = share[i] * static_cast<double>(n);
    const double base = std::floor(exact + 1e-9);
    sizes[i] = static_cast<std::size_t>(base);
    frac[i] = exact - base;
    assigned += sizes[i];
  }
  // The epsilon above can over-assign by one when shares round up.
  while (assigned > n) {
    int i = static_cast<int>(std::min_element(frac.begin(), frac.end())
                             - frac.begin());
    --sizes[i];
    frac[i] += 1.0;
    --assigned;
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (frac[i] > frac[best])
        best = i;
    ++sizes[best];
    frac[best] -= 1.0;
    ++assigned;
  }
  return sizes;
}

namespace {

enum class Side { kDrug, kProtein };

const std::string &entity_of(const InteractionSample &s, Side side) {
  return side == Side::kDrug ? s.drug_id : s.protein_id;
}

// Entity id -> bucket (0 train, 1 val, 2 test).
std::map<std::string, int> assign_buckets(const Dataset &ds, Side side,
                                          SplitMix64 &rng,
                                          const SplitRatios &ratios) {
  std::set<std::string> unique;
  for (const InteractionSample &s: ds.samples)
    unique.insert(entity_of(s, side));
  if (unique.size() < 3) {
    throw DataError(std::string("cold split needs at least 3 distinct ")
                    + (side == Side::kDrug ? "drugs" : "proteins") + ", got "
                    + std::to_string(unique.size()));
  }

  std::vector<std::string> ids(unique.begin(), unique.end());
  rng.shuffle(ids);
  const auto sizes = bucket_sizes(ids.size(), ratios);

  std::map<std::string, int> bucket;
  std::size_t k = 0;
  for (int b = 0; b < 3; ++b)
    for (std::size_t i = 0; i < sizes[b]; ++i)
      bucket.emplace(ids[k++], b);
  return bucket;
}

SplitManifest single_side(const Dataset &ds, std::uint64_t seed,
                          const SplitRatios &ratios, Side side,
                          SplitMode mode) {
  SplitMix64 rng(seed);
  const auto bucket = assign_buckets(ds, side, rng, ratios);

  SplitManifest m;
  m.mode = mode;
  m.seed = seed;
  m.ratios = ratios;
  m.source_checksum = ds.interactions_sha256;
  std::array<std::vector<std::size_t> *, 3> out = { &m.train, &m.val,
                                                    &m.test };
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    out[bucket.at(entity_of(ds.samples[i], side))]->push_back(i);
  return m;
}

}  // namespace

SplitManifest split_cold_drug(const Dataset &ds, std::uint64_t seed,
                              const SplitRatios &ratios) {
  return single_side(ds, seed, ratios, Side::kDrug, SplitMode::kColdDrug);
}

SplitManifest split_cold_protein(const Dataset &ds, std::uint64_t seed,
                                 const SplitRatios &ratios) {
  return single_side(ds, seed, ratios, Side::kProtein,
                     SplitMode::kColdProtein);
}

SplitManifest split_cold_pair(const Dataset &ds, std::uint64_t seed,
                              const SplitRatios &ratios) {
  SplitMix64 rng(seed);
  const auto drug_bucket = assign_buckets(ds, Side::kDrug, rng, ratios);
  const auto protein_bucket = assign_buckets(ds, Side::kProtein, rng, ratios);

  SplitManifest m;
  m.mode = SplitMode::kColdPair;
  m.seed = seed;
  m.ratios = ratios;
  m.source_checksum = ds.interactions_sha256;
  std::array<std::vector<std::size_t> *, 3> out = { &m.train, &m.val,
                                                    &m.test };
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const int b = drug_bucket.at(ds.samples[i].drug_id);
    if (b == protein_bucket.at(ds.samples[i].protein_id))
      out[b]->push_back(i);
    else
      ++m.discarded;
  }

  static constexpr const char *kNames[] = { "train", "val", "test" };
  for (int b = 0; b < 3; ++b) {
    if (out[b]->empty())
      throw DataError(std::string("cold-pair split left the ") + kNames[b]
                      + " bucket without samples");
  }
  return m;
}

SplitManifest make_split(SplitMode mode, const Dataset &ds,
                         std::uint64_t seed, const SplitRatios &ratios) {
  switch (mode) {
  case SplitMode::kColdDrug:
    return split_cold_drug(ds, seed, ratios);
  case SplitMode::kColdProtein:
    return split_cold_protein(ds, seed, ratios);
  case SplitMode::kColdPair:
    break;
  }
  return split_cold_pair(ds, seed, ratios);
}

void check_manifest(const Dataset &ds, const SplitManifest &m) {
  std::vector<int> owner(ds.samples.size(), -1);
  const std::array<const std::vector<std::size_t> *, 3> buckets = {
    &m.train, &m.val, &m.test
  };
  std::array<std::set<std::string>, 3> drugs, proteins;
  std::size_t placed = 0;
  for (int b = 0; b < 3; ++b) {
    for (std::size_t i: *buckets[b]) {
      if (i >= ds.samples.size())
        throw DataError("manifest index " + std::to_string(i)
                        + " out of range");
      if (owner[i] != -1)
        throw DataError("sample " + std::to_string(i)
                        + " appears in two buckets");
      owner[i] = b;
      ++placed;
      drugs[b].insert(ds.samples[i].drug_id);
      proteins[b].insert(ds.samples[i].protein_id);
    }
  }
  if (placed + m.discarded != ds.samples.size())
    throw DataError("manifest does not account for every sample");
  if (m.mode != SplitMode::kColdPair && m.discarded != 0)
    throw DataError("only cold-pair manifests may discard samples");

  auto disjoint = [](const std::array<std::set<std::string>, 3> &sets,
                     const char *what) {
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        for (const std::string &id: sets[a])
          if (sets[b].contains(id))
            throw DataError(std::string(what) + " '" + id
                            + "' appears in two buckets");
  };
  if (m.mode != SplitMode::kColdProtein)
    disjoint(drugs, "drug");
  if (m.mode != SplitMode::kColdDrug)
    disjoint(proteins, "protein");
}

nlohmann::json manifest_to_json(const SplitManifest &m) {
  return {
    { "mode", to_string(m.mode) },
    { "seed", m.seed },
    { "ratios", { m.ratios.train, m.ratios.val, m.ratios.test } },
    { "train", m.train },
    { "val", m.val },
    { "test", m.test },
    { "discarded_count", m.discarded },
    { "source_checksum", m.source_checksum },
  };
}

SplitManifest manifest_from_json(const nlohmann::json &j) {
  try {
    SplitManifest m;
    m.mode = parse_split_mode(j.at("mode").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto r = j.at("ratios").get<std::vector<double>>();
    if (r.size() != 3)
      throw DataError("manifest ratios must have three entries");
    m.ratios = { r[0], r[1], r[2] };
    m.train = j.at("train").get<std::vector<std::size_t>>();
    m.val = j.at("val").get<std::vector<std::size_t>>();
    m.test = j.at("test").get<std::vector<std::size_t>>();
    m.discarded = j.at("discarded_count").get<std::size_t>();
    m.source_checksum = j.at("source_checksum").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed split manifest: ") + e.what());
  }
}

std::string encode_manifest(const SplitManifest &m) {
  return manifest_to_json(m).dump(2) + "\n";
}

void save_manifest(const SplitManifest &m,
                   const std::filesystem::path &path) {
  write_file_atomic(path, encode_manifest(m));
}

SplitManifest load_manifest(const std::filesystem::path &path) {
  try {
    return manifest_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace colddti
