//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "colddti/fusion.h"

#include <cmath>

#include <gtest/gtest.h>

#include "test_support.h"

namespace colddti {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x: v)
    out[i++] = x;
  return out;
}

TEST(SoftmaxTest, Basics) {
  EXPECT_TRUE(softmax(vec({ 0, 0 })).isApprox(vec({ 0.5, 0.5 })));
  EXPECT_TRUE(softmax(vec({ std::log(2.0), 0 }))
                  .isApprox(vec({ 2.0 / 3, 1.0 / 3 }), 1e-15));
  EXPECT_EQ(softmax(vec({ 7 })), vec({ 1 }));
  // Large inputs stay finite.
  Vector big = softmax(vec({ 1000, 999 }));
  EXPECT_TRUE(big.allFinite());
  EXPECT_NEAR(big.sum(), 1.0, 1e-15);

  Vector masked = masked_softmax(vec({ std::log(3.0), 0, 50, -2 }),
                                 { true, true, false, false });
  EXPECT_NEAR(masked[0], 0.75, 1e-15);
  EXPECT_NEAR(masked[1], 0.25, 1e-15);
  EXPECT_EQ(masked[2], 0.0);
  EXPECT_EQ(masked[3], 0.0);
  EXPECT_THROW(masked_softmax(vec({ 1 }), { false }), NumericalError);
}

TEST(SoftmaxTest, ShiftInvariance) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    Vector s = test::random_matrix(1 + rng.below(8), 1, rng, 5).col(0);
    const double c = rng.uniform(-100, 100);
    Vector w = softmax(s);
    EXPECT_NEAR(w.sum(), 1.0, 1e-12);
    EXPECT_GE(w.minCoeff(), 0.0);
    EXPECT_TRUE(softmax(s.array() + c).matrix().isApprox(w, 1e-10));
  }
}

TEST(SoftmaxTest, BackwardMatchesFiniteDifferences) {
  SplitMix64 rng(2);
  Vector s = test::random_matrix(5, 1, rng).col(0);
  Vector g = test::random_matrix(5, 1, rng).col(0);
  Vector analytic = softmax_backward(softmax(s), g);
  for (Eigen::Index i = 0; i < 5; ++i) {
    Vector up = s, down = s;
    up[i] += 1e-5;
    down[i] -= 1e-5;
    const double num = (softmax(up).dot(g) - softmax(down).dot(g)) / 2e-5;
    EXPECT_NEAR(analytic[i], num, 1e-9);
  }
}

InteractionMaps maps_with(std::initializer_list<std::pair<std::size_t, Matrix>>
                              entries) {
  InteractionMaps maps;
  for (const auto &[i, m]: entries)
    maps.maps[i] = m;
  return maps;
}

TEST(IntensityTest, Example) {
  Matrix ils(2, 2);
  ils << 2, 0, 0, 2;
  Matrix igs = Matrix::Zero(1, 2);
  Matrix ilp = Matrix::Zero(2, 1), igp = Matrix::Zero(1, 1);
  InteractionMaps maps = maps_with({ { 0, ilp }, { 1, ils }, { 4, igp },
                                     { 5, igs } });
  IntensityVectors s = intensity_vectors(maps);
  EXPECT_EQ(*s.get(ProteinLevel::kSecondary), vec({ 1, 1 }));
  EXPECT_FALSE(s.get(ProteinLevel::kTertiary));
  EXPECT_TRUE(s.local.isApprox(vec({ 1, 1 })));
  EXPECT_EQ(s.global, 0.0);
}

TEST(IntensityTest, EmptyLevelContributesNothing) {
  SplitMix64 rng(3);
  Matrix ilp = test::random_matrix(2, 3, rng), igp = test::random_matrix(1, 3, rng);
  InteractionMaps with_empty = maps_with(
      { { 0, ilp }, { 4, igp }, { 2, Matrix(2, 0) }, { 6, Matrix(1, 0) } });
  InteractionMaps without = maps_with({ { 0, ilp }, { 4, igp } });
  IntensityVectors a = intensity_vectors(with_empty);
  IntensityVectors b = intensity_vectors(without);
  EXPECT_EQ(a.get(ProteinLevel::kTertiary)->size(), 0);
  EXPECT_FALSE(a.present(ProteinLevel::kTertiary));
  EXPECT_EQ(a.local, b.local);
  EXPECT_EQ(a.global, b.global);
}

TEST(IntraFuseTest, Examples) {
  Matrix x(2, 2);
  x << 2, 0, 0, 2;
  IntraFusion f = intra_fuse(x, vec({ 0, 0 }));
  EXPECT_EQ(f.weights, vec({ 0.5, 0.5 }));
  EXPECT_EQ(f.fused, vec({ 1, 1 }));

  Matrix one(1, 2);
  one << 3, -1;
  IntraFusion single = intra_fuse(one, vec({ 42 }));
  EXPECT_EQ(single.weights, vec({ 1 }));
  EXPECT_EQ(single.fused, vec({ 3, -1 }));

  EXPECT_THROW(intra_fuse(Matrix(0, 2), Vector(0)), NumericalError);
  EXPECT_THROW(intra_fuse(x, vec({ 1 })), NumericalError);
}

TEST(FuseQuaternaryTest, Examples) {
  Matrix x(1, 2);
  x << 3, 4;
  EXPECT_EQ(fuse_quaternary(x, 0), vec({ 0, 0 }));
  EXPECT_EQ(fuse_quaternary(x, 1), vec({ 3, 4 }));
  x << 1, -1;
  EXPECT_EQ(fuse_quaternary(x, 2), vec({ 2, -2 }));
}

IntensityVectors intensities(std::array<std::optional<Vector>, 4> protein,
                             Vector local, double global) {
  IntensityVectors s;
  s.protein = std::move(protein);
  s.local = std::move(local);
  s.global = global;
  return s;
}

TEST(InterFuseTest, ProteinExamples) {
  const std::array<Vector, 4> r = { vec({ 1, 0 }), vec({ 0, 1 }),
                                    vec({ 2, 2 }), vec({ 3, 3 }) };
  IntensityVectors equal = intensities(
      { vec({ 1, 3 }), vec({ 2 }), vec({ 0, 4 }), vec({ 2 }) }, vec({ 0 }), 0);
  InterFusion f = inter_fuse_protein(equal, r, equal.present_mask());
  EXPECT_TRUE(f.weights.isApprox(vec({ 0.25, 0.25, 0.25, 0.25 }), 1e-15));

  IntensityVectors two = intensities(
      { vec({ std::log(3.0) }), vec({ 0 }), std::nullopt, Vector(0) },
      vec({ 0 }), 0);
  InterFusion g = inter_fuse_protein(two, r, two.present_mask());
  EXPECT_NEAR(g.weights[0], 0.75, 1e-15);
  EXPECT_NEAR(g.weights[1], 0.25, 1e-15);
  EXPECT_EQ(g.weights[2], 0.0);
  EXPECT_EQ(g.weights[3], 0.0);

  const std::array<Vector, 4> same = { vec({ 5, -1 }), vec({ 5, -1 }),
                                       vec({ 5, -1 }), vec({ 5, -1 }) };
  EXPECT_TRUE(inter_fuse_protein(equal, same, equal.present_mask())
                  .fused.isApprox(vec({ 5, -1 }), 1e-15));

  IntensityVectors none = intensities({}, vec({ 0 }), 0);
  EXPECT_THROW(inter_fuse_protein(none, r, none.present_mask()),
               NumericalError);
}

TEST(InterFuseTest, DrugExamples) {
  IntensityVectors eq = intensities({}, vec({ 1, 3 }), 2);
  EXPECT_TRUE(inter_fuse_drug(eq, vec({ 1 }), vec({ 3 }))
                  .weights.isApprox(vec({ 0.5, 0.5 })));
  IntensityVectors four = intensities({}, vec({ std::log(4.0) }), 0);
  EXPECT_TRUE(inter_fuse_drug(four, vec({ 1 }), vec({ 3 }))
                  .weights.isApprox(vec({ 0.8, 0.2 }), 1e-15));
  EXPECT_TRUE(inter_fuse_drug(four, vec({ 7, 8 }), vec({ 7, 8 }))
                  .fused.isApprox(vec({ 7, 8 }), 1e-15));
}

TEST(InterFuseTest, ArgmaxStableUnderPositiveScaling) {
  SplitMix64 rng(4);
  const std::array<Vector, 4> r = { vec({ 0 }), vec({ 0 }), vec({ 0 }),
                                    vec({ 0 }) };
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::optional<Vector>, 4> s;
    for (auto &x: s)
      x = test::random_matrix(1, 1, rng, 3).col(0);
    IntensityVectors a = intensities(s, vec({ 0 }), 0);
    const double c = rng.uniform(0.01, 10);
    for (auto &x: s)
      *x *= c;
    IntensityVectors b = intensities(s, vec({ 0 }), 0);
    Eigen::Index ia, ib;
    inter_fuse_protein(a, r, a.present_mask()).weights.maxCoeff(&ia);
    inter_fuse_protein(b, r, b.present_mask()).weights.maxCoeff(&ib);
    EXPECT_EQ(ia, ib);
  }
}

TEST(FusionOracleTest, RandomInstances) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(5));
    Matrix xl = test::random_matrix(1 + rng.below(8), d, rng);
    DrugEmbeddings drug = pool_drug(xl);
    LevelEmbeddings prot { test::random_matrix(1 + rng.below(12), d, rng),
                           test::random_matrix(rng.below(4), d, rng),
                           test::random_matrix(rng.below(3), d, rng),
                           test::random_matrix(1, d, rng) };
    Projections proj;
    std::array<test::Rows, 8> wa, wb;
    for (std::size_t i = 0; i < kMapCount; ++i) {
      proj[i] = BilinearProjection::init(d, d, d, rng);
      wa[i] = test::to_rows(proj[i].drug_side);
      wb[i] = test::to_rows(proj[i].protein_side);
    }

    IntensityVectors s = intensity_vectors(compute_all(drug, prot, proj));
    std::array<Vector, 4> fused;
    std::array<Vector, 4> weights;
    for (ProteinLevel b: kAllProteinLevels) {
      const std::size_t i = static_cast<std::size_t>(b);
      if (!s.present(b))
        continue;
      if (b == ProteinLevel::kQuaternary) {
        fused[i] = fuse_quaternary(prot.quaternary, (*s.get(b))[0]);
      } else {
        IntraFusion f = intra_fuse(level_matrix(prot, b), *s.get(b));
        weights[i] = f.weights;
        fused[i] = f.fused;
      }
    }
    IntraFusion local = intra_fuse(drug.local, s.local);
    InterFusion pt = inter_fuse_protein(s, fused, s.present_mask());
    InterFusion dr = inter_fuse_drug(s, local.fused, drug.global.row(0).transpose());

    test::FusionOracle o = test::oracle_fusion(
        test::to_rows(drug.local), test::to_rows(drug.global),
        { test::to_rows(prot.primary), test::to_rows(prot.secondary),
          test::to_rows(prot.tertiary), test::to_rows(prot.quaternary) },
        wa, wb, { true, true, true, true });

    auto near = [](const Vector &got, const test::Vec &want) {
      ASSERT_EQ(static_cast<std::size_t>(got.size()), want.size());
      for (std::size_t i = 0; i < want.size(); ++i)
        EXPECT_NEAR(got[i], want[i], 1e-10);
    };
    for (std::size_t b = 0; b < 4; ++b) {
      EXPECT_EQ(s.present_mask()[b], o.present[b]);
      if (!o.present[b])
        continue;
      near(*s.protein[b], o.s[b]);
      near(fused[b], o.r[b]);
      if (b < 3)
        near(weights[b], o.w[b]);
    }
    near(s.local, o.s_local);
    EXPECT_NEAR(s.global, o.s_global, 1e-10);
    near(local.weights, o.w_local);
    near(local.fused, o.r_local);
    near(pt.weights, o.w_protein);
    near(pt.fused, o.r_protein);
    near(dr.weights, o.w_drug);
    near(dr.fused, o.r_drug);
  }
}

TEST(ClassifierTest, Examples) {
  SplitMix64 rng(6);
  MlpParams zero = MlpParams::init(4, { 3 }, rng);
  for (MlpLayer &l: zero.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  EXPECT_EQ(classify(vec({ 1, 2, 3, 4 }), zero), 0.5);

  MlpParams linear;
  linear.layers.push_back({ Matrix::Zero(1, 2), vec({ std::log(3.0) }) });
  EXPECT_NEAR(classify(vec({ 9, 9 }), linear), 0.75, 1e-15);

  linear.layers[0].bias[0] = 1e6;
  const double hi = classify(vec({ 0, 0 }), linear);
  EXPECT_LT(hi, 1.0);
  EXPECT_GT(hi, 0.0);
  linear.layers[0].bias[0] = -1e6;
  const double lo = classify(vec({ 0, 0 }), linear);
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(lo, 1.0);

  EXPECT_THROW(mlp_logit(vec({ 1, 2, 3 }), zero), NumericalError);
}

TEST(ClassifierTest, InitShapes) {
  SplitMix64 rng(7);
  MlpParams p = MlpParams::init(16, kDefaultHidden, rng);
  ASSERT_EQ(p.layers.size(), 3);
  EXPECT_EQ(p.layers[0].weight.rows(), 256);
  EXPECT_EQ(p.layers[0].weight.cols(), 16);
  EXPECT_EQ(p.layers[1].weight.rows(), 256);
  EXPECT_EQ(p.layers[2].weight.rows(), 1);
  EXPECT_TRUE(p.layers[0].bias.isZero(0.0));
  EXPECT_EQ(p.input_width(), 16);
}

TEST(ClassifierTest, BackwardMatchesFiniteDifferences) {
  SplitMix64 rng(8);
  MlpParams p = MlpParams::init(4, { 5, 3 }, rng);
  for (MlpLayer &l: p.layers)
    l.bias = test::random_matrix(l.bias.size(), 1, rng, 0.1).col(0);
  Vector z = test::random_matrix(4, 1, rng).col(0);
  MlpTrace trace;
  mlp_logit(z, p, &trace);
  MlpParams grad = p;
  for (MlpLayer &l: grad.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  Vector dz = mlp_backward(p, trace, 1.0, grad);
  for (Eigen::Index i = 0; i < 4; ++i) {
    Vector up = z, down = z;
    up[i] += 1e-6;
    down[i] -= 1e-6;
    EXPECT_NEAR(dz[i], (mlp_logit(up, p) - mlp_logit(down, p)) / 2e-6, 1e-7);
  }
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < p.layers[l].weight.rows(); ++i) {
      MlpParams up = p, down = p;
      up.layers[l].bias[i] += 1e-6;
      down.layers[l].bias[i] -= 1e-6;
      EXPECT_NEAR(grad.layers[l].bias[i],
                  (mlp_logit(z, up) - mlp_logit(z, down)) / 2e-6, 1e-7);
    }
  }
}

TEST(LossTest, Examples) {
  EXPECT_NEAR(bce_loss(0.5, 1), 0.693147, 1e-6);
  EXPECT_NEAR(bce_loss(0.75, 1), 0.287682, 1e-6);
  EXPECT_NEAR(bce_loss(0.75, 0), 1.386294, 1e-6);
  EXPECT_THROW(bce_loss(0.0, 1), NumericalError);
  EXPECT_THROW(bce_loss(1.0, 0), NumericalError);
  EXPECT_THROW(bce_loss(0.5, 2), NumericalError);
  // Floor keeps the loss finite near the boundary.
  EXPECT_NEAR(bce_loss(1e-12, 1), -std::log(1e-7), 1e-9);

  EXPECT_DOUBLE_EQ(bce_logit_grad(0.75, 1), -0.25);
  EXPECT_DOUBLE_EQ(bce_logit_grad(0.75, 0), 0.75);
  EXPECT_EQ(bce_logit_grad(1e-12, 1), 0.0);
}

}  // namespace
}  // namespace colddti
