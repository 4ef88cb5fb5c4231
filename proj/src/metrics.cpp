//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace colddti {

namespace {

void check_scores(std::span<const ScoredSample> set) {
  for (const ScoredSample &s: set) {
    if (std::isnan(s.score))
      throw std::invalid_argument("NaN score");
    if (s.label != 0 && s.label != 1)
      throw std::invalid_argument("labels must be 0 or 1");
  }
}

}  // namespace

double roc_auc(std::span<const ScoredSample> set) {
  check_scores(set);
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set[a].score < set[b].score;
  });

  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t group_positives = 0;
    while (j < order.size() && set[order[j]].score == set[order[i]].score) {
      group_positives += static_cast<std::size_t>(set[order[j]].label);
      ++j;
    }
    // 1-based ranks i+1..j share their average.
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += mid_rank * static_cast<double>(group_positives);
    positives += group_positives;
    i = j;
  }

  const std::size_t negatives = set.size() - positives;
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("AUC needs both positive and negative samples");
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1) / 2;
  return u / (p * static_cast<double>(negatives));
}

double aupr(std::span<const ScoredSample> set) {
  check_scores(set);
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return set[a].score > set[b].score;
                   });

  // Extended precision keeps small rational results (5/6 and the like)
  // correctly rounded.
  long double precision_sum = 0.0L;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (set[order[k]].label == 1) {
      ++hits;
      precision_sum += static_cast<long double>(hits)
                       / static_cast<long double>(k + 1);
    }
  }
  if (hits == 0)
    throw std::invalid_argument("AUPR needs at least one positive sample");
  return static_cast<double>(precision_sum
                             / static_cast<long double>(hits));
}

F1Result f1_score(std::span<const ScoredSample> set, double threshold) {
  check_scores(set);
  F1Result r;
  for (const ScoredSample &s: set) {
    const bool predicted = s.score >= threshold;
    if (predicted && s.label == 1)
      ++r.counts.tp;
    else if (predicted)
      ++r.counts.fp;
    else if (s.label == 1)
      ++r.counts.fn;
    else
      ++r.counts.tn;
  }
  const double tp = static_cast<double>(r.counts.tp);
  const double precision =
      r.counts.tp + r.counts.fp > 0 ? tp / (tp + r.counts.fp) : 0.0;
  const double recall =
      r.counts.tp + r.counts.fn > 0 ? tp / (tp + r.counts.fn) : 0.0;
  r.f1 = precision + recall > 0
             ? 2 * precision * recall / (precision + recall)
             : 0.0;
  return r;
}

MetricsReport evaluate(std::span<const ScoredSample> set, double threshold) {
  MetricsReport rep;
  rep.auc = roc_auc(set);
  rep.aupr = aupr(set);
  const F1Result f = f1_score(set, threshold);
  rep.f1 = f.f1;
  rep.counts = f.counts;
  rep.threshold = threshold;
  rep.n_samples = set.size();
  return rep;
}

nlohmann::json report_json(const MetricsReport &report,
                           const std::string &dataset,
                           const std::string &split_mode,
                           std::uint64_t seed) {
  return {
    { "dataset", dataset },
    { "split_mode", split_mode },
    { "seed", seed },
    { "auc", report.auc },
    { "aupr", report.aupr },
    { "f1", report.f1 },
    { "threshold", report.threshold },
    { "tp", report.counts.tp },
    { "fp", report.counts.fp },
    { "tn", report.counts.tn },
    { "fn", report.counts.fn },
    { "n_samples", report.n_samples },
  };
}

std::string render_report(const MetricsReport &report) {
  std::ostringstream oss;
  oss.setf(std::ios::fixed);
  oss.precision(6);
  oss << "metric\tvalue\n"
      << "auc\t" << report.auc << '\n'
      << "aupr\t" << report.aupr << '\n'
      << "f1\t" << report.f1 << '\n'
      << "threshold\t" << report.threshold << '\n';
  oss << "tp\t" << report.counts.tp << '\n'
      << "fp\t" << report.counts.fp << '\n'
      << "tn\t" << report.counts.tn << '\n'
      << "fn\t" << report.counts.fn << '\n'
      << "n_samples\t" << report.n_samples << '\n';
  return oss.str();
}

}  // namespace colddti
