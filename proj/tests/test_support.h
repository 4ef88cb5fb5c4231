//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Reference implementations for tests. Everything here works on nested
// std::vector with plain loops so it shares no code path with the library.

#ifndef COLDDTI_TEST_SUPPORT_H_
#define COLDDTI_TEST_SUPPORT_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "colddti/data_model.h"
#include "colddti/matrix.h"
#include "colddti/metrics.h"
#include "colddti/rng.h"

namespace colddti {
namespace test {

using Rows = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline Rows to_rows(const Matrix &m) {
  Rows out(m.rows(), Vec(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[i][j] = m(i, j);
  return out;
}

inline Vec to_vec(const Vector &v) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = v[i];
  return out;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols,
                            SplitMix64 &rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = rng.uniform(-scale, scale);
  return m;
}

// sum over u, v, c of a[i][u] * wa[c][u] * wb[c][v] * b[j][v]
inline Rows oracle_map(const Rows &a, const Rows &b, const Rows &wa,
                       const Rows &wb) {
  Rows out(a.size(), Vec(b.size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      double sum = 0.0;
      for (std::size_t u = 0; u < a[i].size(); ++u)
        for (std::size_t v = 0; v < b[j].size(); ++v)
          for (std::size_t c = 0; c < wa.size(); ++c)
            sum += a[i][u] * wa[c][u] * wb[c][v] * b[j][v];
      out[i][j] = sum;
    }
  return out;
}

inline Vec oracle_softmax(const Vec &s) {
  double hi = -INFINITY;
  for (double x: s)
    hi = x > hi ? x : hi;
  Vec e(s.size());
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    e[i] = std::exp(s[i] - hi);
    total += e[i];
  }
  for (double &x: e)
    x /= total;
  return e;
}

inline Vec weighted_rows(const Rows &x, const Vec &w) {
  Vec out(x.empty() ? 0 : x[0].size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t c = 0; c < out.size(); ++c)
      out[c] += w[i] * x[i][c];
  return out;
}

inline double mean(const Vec &v) {
  double s = 0.0;
  for (double x: v)
    s += x;
  return s / static_cast<double>(v.size());
}

struct FusionOracle {
  std::array<bool, 4> present {};
  std::array<Vec, 4> s;  // S_p, S_s, S_t, S_q
  Vec s_local;
  double s_global = 0.0;
  std::array<Vec, 4> w;  // w_p, w_s, w_t; w_q unused
  std::array<Vec, 4> r;  // r_p, r_s, r_t, r_q
  Vec w_local, r_local, r_global;
  Vec w_protein, r_protein;  // w_T has four entries, zero when absent
  Vec w_drug, r_drug;
};

// x_prot[b] may have zero rows; enabled[b] false drops that level.
// w_a[m], w_b[m] are the projections of map m = a * 4 + b.
inline FusionOracle oracle_fusion(const Rows &x_local, const Rows &x_global,
                                  const std::array<Rows, 4> &x_prot,
                                  const std::array<Rows, 8> &w_a,
                                  const std::array<Rows, 8> &w_b,
                                  const std::array<bool, 4> &enabled) {
  FusionOracle o;
  const std::size_t n = x_local.size();
  const std::size_t d = x_local[0].size();
  o.s_local.assign(n, 0.0);
  for (int b = 0; b < 4; ++b) {
    if (!enabled[b])
      continue;
    const Rows il = oracle_map(x_local, x_prot[b], w_a[b], w_b[b]);
    const Rows ig = oracle_map(x_global, x_prot[b], w_a[4 + b], w_b[4 + b]);
    const std::size_t nb = x_prot[b].size();
    o.s[b].assign(nb, 0.0);
    for (std::size_t j = 0; j < nb; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        col += il[i][j];
      o.s[b][j] = ig[0][j] + col / static_cast<double>(n);
    }
    if (nb == 0)
      continue;
    o.present[b] = true;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < nb; ++j)
        row += il[i][j];
      o.s_local[i] += row / static_cast<double>(nb);
    }
    double g = 0.0;
    for (std::size_t j = 0; j < nb; ++j)
      g += ig[0][j];
    o.s_global += g / static_cast<double>(nb);
  }

  for (int b = 0; b < 4; ++b) {
    if (!o.present[b])
      continue;
    if (b == 3) {
      o.r[b].assign(d, 0.0);
      for (std::size_t c = 0; c < d; ++c)
        o.r[b][c] = o.s[b][0] * x_prot[b][0][c];
    } else {
      o.w[b] = oracle_softmax(o.s[b]);
      o.r[b] = weighted_rows(x_prot[b], o.w[b]);
    }
  }
  o.w_local = oracle_softmax(o.s_local);
  o.r_local = weighted_rows(x_local, o.w_local);
  o.r_global = x_global[0];

  Vec means;
  std::vector<int> which;
  for (int b = 0; b < 4; ++b) {
    if (o.present[b]) {
      means.push_back(mean(o.s[b]));
      which.push_back(b);
    }
  }
  const Vec wt = oracle_softmax(means);
  o.w_protein.assign(4, 0.0);
  o.r_protein.assign(d, 0.0);
  for (std::size_t k = 0; k < which.size(); ++k) {
    o.w_protein[which[k]] = wt[k];
    for (std::size_t c = 0; c < d; ++c)
      o.r_protein[c] += wt[k] * o.r[which[k]][c];
  }

  o.w_drug = oracle_softmax({ mean(o.s_local), o.s_global });
  o.r_drug.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c)
    o.r_drug[c] = o.w_drug[0] * o.r_local[c] + o.w_drug[1] * o.r_global[c];
  return o;
}

// Fraction of (positive, negative) pairs ordered correctly, ties half.
inline double oracle_auc(const std::vector<ScoredSample> &set) {
  double good = 0.0, pairs = 0.0;
  for (const ScoredSample &p: set) {
    if (p.label != 1)
      continue;
    for (const ScoredSample &q: set) {
      if (q.label != 0)
        continue;
      pairs += 1.0;
      if (p.score > q.score)
        good += 1.0;
      else if (p.score == q.score)
        good += 0.5;
    }
  }
  return good / pairs;
}

// Step integration of the precision-recall curve over the stable
// descending order, recounting every cutoff from scratch.
inline double oracle_aupr(const std::vector<ScoredSample> &set) {
  std::vector<ScoredSample> sorted;
  for (const ScoredSample &s: set) {  // stable insertion sort, descending
    std::size_t pos = sorted.size();
    while (pos > 0 && sorted[pos - 1].score < s.score)
      --pos;
    sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(pos), s);
  }
  double positives = 0.0;
  for (const ScoredSample &s: set)
    positives += s.label;

  double area = 0.0, prev_recall = 0.0;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    double tp = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      tp += sorted[i].label;
    const double recall = tp / positives;
    area += (recall - prev_recall) * (tp / static_cast<double>(k));
    prev_recall = recall;
  }
  return area;
}

inline std::string random_smiles(SplitMix64 &rng, std::size_t max_atoms) {
  static const char *kAtoms[] = { "C", "N", "O", "S", "Cl", "Br", "c",
                                  "[NH4+]", "F" };
  const std::size_t n = 1 + rng.below(max_atoms);
  std::string out;
  for (std::size_t i = 0; i < n; ++i)
    out += kAtoms[rng.below(std::size(kAtoms))];
  return out;
}

inline ProteinRecord random_protein(SplitMix64 &rng, std::string id,
                                    int max_len, int max_secondary,
                                    int max_tertiary) {
  static constexpr std::string_view kResidues = "ACDEFGHIKLMNPQRSTVWY";
  static constexpr SecondaryType kTypes[] = {
    SecondaryType::kHelix, SecondaryType::kSheet, SecondaryType::kTurn,
    SecondaryType::kBend
  };
  ProteinRecord p;
  p.id = std::move(id);
  const int len = 1 + static_cast<int>(rng.below(max_len));
  for (int i = 0; i < len; ++i)
    p.residues += kResidues[rng.below(kResidues.size())];
  auto random_span = [&](SpanKind kind) {
    int a = 1 + static_cast<int>(rng.below(len));
    int b = 1 + static_cast<int>(rng.below(len));
    if (a > b)
      std::swap(a, b);
    return StructureSpan { a, b, kind,
                           kind == SpanKind::kSecondary ? kTypes[rng.below(4)]
                                                        : SecondaryType::kNone };
  };
  const int ns = static_cast<int>(rng.below(max_secondary + 1));
  const int nt = static_cast<int>(rng.below(max_tertiary + 1));
  for (int k = 0; k < ns; ++k)
    p.spans.push_back(random_span(SpanKind::kSecondary));
  for (int k = 0; k < nt; ++k)
    p.spans.push_back(random_span(SpanKind::kTertiary));
  return p;
}

// Random corpus for split tests: entity counts and density vary by seed.
inline Dataset random_corpus(SplitMix64 &rng) {
  Dataset ds;
  const std::size_t nd = 3 + rng.below(40);
  const std::size_t np = 3 + rng.below(30);
  for (std::size_t i = 0; i < nd; ++i) {
    const std::string id = "d" + std::to_string(i);
    ds.drugs.emplace(id, DrugRecord { id, "CC" });
  }
  for (std::size_t i = 0; i < np; ++i) {
    const std::string id = "p" + std::to_string(i);
    ds.proteins.emplace(id, ProteinRecord { id, "MK", {} });
  }
  const double density = rng.uniform(0.3, 1.0);
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < np; ++j)
      if (rng.uniform() < density)
        ds.samples.push_back({ "d" + std::to_string(i),
                               "p" + std::to_string(j),
                               static_cast<int>(rng.below(2)) });
  // Every entity referenced at least once.
  for (std::size_t i = 0; i < std::max(nd, np); ++i) {
    const std::string d = "d" + std::to_string(i % nd);
    const std::string p = "p" + std::to_string(i % np);
    bool seen = false;
    for (const InteractionSample &s: ds.samples)
      seen = seen || (s.drug_id == d && s.protein_id == p);
    if (!seen)
      ds.samples.push_back({ d, p, 1 });
  }
  ds.interactions_sha256 = "synthetic";
  return ds;
}

inline std::filesystem::path fresh_dir(const std::string &name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("colddti_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test
}  // namespace colddti

#endif  // COLDDTI_TEST_SUPPORT_H_
