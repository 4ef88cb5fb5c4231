//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_METRICS_H_
#define COLDDTI_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "json.hpp"

namespace colddti {

struct ScoredSample {
  double score = 0.0;
  int label = 0;
};

// Probability that a random positive outranks a random negative, ties
// counting one half. Mid-rank formulation, O(n log n). Throws
// std::invalid_argument unless both classes are present.
double roc_auc(std::span<const ScoredSample> set);

// Average precision: mean over positives of the precision at each
// positive's rank in descending-score order. Tied scores keep input order
// (no tie-group averaging). Throws std::invalid_argument without positives.
double aupr(std::span<const ScoredSample> set);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  bool operator==(const Confusion &) const = default;
};

struct F1Result {
  double f1 = 0.0;
  Confusion counts;
};

inline constexpr double kDefaultThreshold = 0.5;

// Predicts positive when score >= threshold; F1 is 0 when P + R = 0.
F1Result f1_score(std::span<const ScoredSample> set,
                  double threshold = kDefaultThreshold);

struct MetricsReport {
  double auc = 0.0;
  double aupr = 0.0;
  double f1 = 0.0;
  double threshold = kDefaultThreshold;
  Confusion counts;
  std::size_t n_samples = 0;
};

MetricsReport evaluate(std::span<const ScoredSample> set,
                       double threshold = kDefaultThreshold);

// {dataset, split_mode, seed, auc, aupr, f1, threshold, tp, fp, tn, fn,
//  n_samples}
nlohmann::json report_json(const MetricsReport &report,
                           const std::string &dataset,
                           const std::string &split_mode,
                           std::uint64_t seed);

// Tab-separated two-column table, one metric per line.
std::string render_report(const MetricsReport &report);

}  // namespace colddti

#endif  // COLDDTI_METRICS_H_
