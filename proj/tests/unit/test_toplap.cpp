//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gnc/toplap/fingerprint.hpp"

#include "oracles.hpp"

using namespace gnc;

namespace {

const ElementSet kAll { "all", {} };

LabeledPointCloud cloud_of(std::vector<LabeledPoint> pts) { return { std::move(pts) }; }

// Regular hexagon with the given side length in the xy plane.
LabeledPointCloud hexagon(double side) {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < 6; ++i) {
    const double a = i * std::numbers::pi / 3;
    pts.push_back({ side * std::cos(a), side * std::sin(a), 0.0, Element::kC });
  }
  return cloud_of(pts);
}

LabeledPointCloud triangle(double side) {
  return cloud_of({ { 0, 0, 0, Element::kC },
                    { side, 0, 0, Element::kC },
                    { side / 2, side * std::sqrt(3.0) / 2, 0, Element::kC } });
}

std::vector<LabeledPoint> random_points(std::mt19937_64 &rng, int n, double box) {
  std::uniform_real_distribution<double> u(0, box);
  std::vector<LabeledPoint> pts(n);
  for (auto &p: pts)
    p = { u(rng), u(rng), u(rng), Element::kC };
  return pts;
}

void expect_spectrum(const std::vector<double> &got, const std::vector<double> &want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    EXPECT_NEAR(got[i], want[i], 1e-10) << i;
}

}  // namespace

TEST(Filtration, EdgeThreshold) {
  auto two = cloud_of({ { 0, 0, 0, Element::kC }, { 3, 0, 0, Element::kC } });
  auto k = build_filtration(two, kAll, 10);
  EXPECT_TRUE(k.alive_edges(1.0).empty());
  EXPECT_EQ(k.alive_edges(1.6).size(), 1u);
  EXPECT_DOUBLE_EQ(k.edges[0].birth, 1.5);
}

TEST(Filtration, TriangleBirth) {
  auto c = cloud_of({ { 0, 0, 0, Element::kC },
                      { 1, 0, 0, Element::kC },
                      { 0, 2, 0, Element::kC } });
  auto k = build_filtration(c, kAll, 10);
  ASSERT_EQ(k.triangles.size(), 1u);
  EXPECT_DOUBLE_EQ(k.triangles[0].birth, std::sqrt(5.0) / 2);
}

TEST(Filtration, BenzeneRing) {
  auto k = build_filtration(hexagon(1.39), kAll, 10);
  EXPECT_EQ(k.alive_edges(0.75).size(), 6u);
  EXPECT_TRUE(k.alive_triangles(0.75).empty());
}

TEST(Filtration, ElementSelection) {
  auto c = cloud_of({ { 0, 0, 0, Element::kC },
                      { 1, 0, 0, Element::kN },
                      { 2, 0, 0, Element::kH } });
  EXPECT_EQ(build_filtration(c, { "N", { Element::kN } }, 5).vertex_count(), 1);
  EXPECT_EQ(build_filtration(c, { "heavy", {} }, 5).vertex_count(), 2);
  try {
    build_filtration(c, { "O", { Element::kO } }, 5);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySelection);
  }
}

TEST(Boundary, SingleEdgeAndTree) {
  auto two = cloud_of({ { 0, 0, 0, Element::kC }, { 1, 0, 0, Element::kC } });
  auto b = boundary_matrix(build_filtration(two, kAll, 5), 1, 5);
  EXPECT_EQ(b(0, 0), -1);
  EXPECT_EQ(b(1, 0), 1);

  // A path of 7 points spaced 1 apart is a tree at r = 0.5.
  std::vector<LabeledPoint> path;
  for (int i = 0; i < 7; ++i)
    path.push_back({ double(i), 0, 0, Element::kC });
  auto k = build_filtration(cloud_of(path), kAll, 0.5);
  auto m = boundary_matrix(k, 1, 0.5);
  std::vector<std::vector<std::int64_t>> rows(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      rows[i][j] = m(i, j);
  EXPECT_EQ(oracle::rank_mod_p(rows), 6);
}

TEST(Boundary, ChainComplexIdentity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> r(0.3, 3.0);
  for (int rep = 0; rep < 1000; ++rep) {
    auto k = build_filtration(cloud_of(random_points(rng, 4 + rep % 9, 4.0)), kAll, 4.0);
    const double radius = r(rng);
    Eigen::MatrixXi prod = boundary_matrix(k, 1, radius) * boundary_matrix(k, 2, radius);
    ASSERT_TRUE(prod.size() == 0 || prod.cwiseAbs().maxCoeff() == 0);
  }
  auto k = build_filtration(triangle(1.0), kAll, 1);
  try {
    boundary_matrix(k, 3, 1.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kOrderUnsupported);
  }
}

TEST(Laplacian, TriangleGraph) {
  auto k = build_filtration(triangle(1.0), kAll, 5);
  auto l = persistent_laplacian(k, 0, 1.0, 0.0);
  expect_spectrum(spectrum(l), { 0, 3, 3 });
  EXPECT_EQ(betti(spectrum(l)), 1);
}

TEST(Laplacian, SixCycle) {
  auto k = build_filtration(hexagon(1.0), kAll, 5);
  std::vector<double> want;
  for (int j = 0; j < 6; ++j)
    want.push_back(2 - 2 * std::cos(2 * std::numbers::pi * j / 6));
  std::sort(want.begin(), want.end());
  expect_spectrum(spectrum(persistent_laplacian(k, 0, 0.6, 0.0)), want);
  expect_spectrum(want, { 0, 1, 1, 3, 3, 4 });
  EXPECT_EQ(betti(spectrum(persistent_laplacian(k, 1, 0.6, 0.0))), 1);
  // Long diagonals fill the cycle once r >= 1.
  EXPECT_EQ(betti(spectrum(persistent_laplacian(k, 1, 0.6, 0.5))), 0);
  EXPECT_EQ(betti(spectrum(persistent_laplacian(k, 1, 1.0, 0.0))), 0);
}

TEST(Laplacian, IsolatedPoints) {
  auto c = cloud_of({ { 0, 0, 0, Element::kC },
                      { 5, 0, 0, Element::kC },
                      { 0, 5, 0, Element::kC } });
  auto k = build_filtration(c, kAll, 10);
  EXPECT_EQ(betti(spectrum(persistent_laplacian(k, 0, 1.0, 0.0))), 3);
}

TEST(Laplacian, Errors) {
  auto k = build_filtration(triangle(1.0), kAll, 5);
  try {
    persistent_laplacian(k, 3, 1, 0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kOrderUnsupported);
  }
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 0, 1;
  try {
    spectrum(m);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonSymmetric);
  }
}

TEST(Laplacian, PZeroIsCombinatorial) {
  std::mt19937_64 rng(4);
  auto k = build_filtration(cloud_of(random_points(rng, 10, 3.0)), kAll, 3.0);
  for (double t: { 0.5, 1.0, 1.5 }) {
    Eigen::MatrixXd b1 = boundary_matrix(k, 1, t).cast<double>();
    Eigen::MatrixXd b2 = boundary_matrix(k, 2, t).cast<double>();
    Eigen::MatrixXd want = b1.transpose() * b1 + b2 * b2.transpose();
    EXPECT_LT((persistent_laplacian(k, 1, t, 0.0) - want).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((persistent_laplacian(k, 0, t, 0.0) - b1 * b1.transpose()).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Laplacian, ZeroBettiMatchesUnionFind) {
  std::mt19937_64 rng(100);
  for (int rep = 0; rep < 100; ++rep) {
    auto pts = random_points(rng, 50, 10.0);
    auto k = build_filtration(cloud_of(pts), kAll, 10.0, 1);
    int prev = 50;
    for (int t = 1; t <= 10; ++t) {
      const double r = t / 2.0;
      auto ev = spectrum(persistent_laplacian(k, 0, r / 2, r / 2));
      const int b0 = betti(ev);
      EXPECT_EQ(b0, oracle::rips_components(pts, r));
      EXPECT_LE(b0, prev);
      EXPECT_GE(ev.front(), -1e-9);
      prev = b0;
    }
  }
}

TEST(Laplacian, PersistentBettiMatchesHomology) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> tt(0.2, 1.6), pp(0.0, 0.8);
  int nontrivial = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto pts = random_points(rng, 5 + rep % 8, 3.0);
    if (rep % 2) {
      // Noisy planar ring, so that 1-cycles actually persist.
      std::normal_distribution<double> jitter(0.0, 0.08);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double a = 2 * std::numbers::pi * i / pts.size();
        pts[i] = { 1.5 * std::cos(a) + jitter(rng), 1.5 * std::sin(a) + jitter(rng),
                   jitter(rng), Element::kC };
      }
    }
    auto plain = oracle::plain_rips(pts);
    auto k = build_filtration(cloud_of(pts), kAll, 10.0);
    const double t = tt(rng), p = pp(rng);
    for (int q: { 0, 1 }) {
      auto ev = spectrum(persistent_laplacian(k, q, t, p));
      if (!ev.empty())
        EXPECT_GE(ev.front(), -1e-9);
      const int want = oracle::persistent_betti(plain, q, t, p);
      EXPECT_EQ(betti(ev), want) << "rep " << rep << " q " << q;
      nontrivial += q == 1 && want > 0;
    }
  }
  EXPECT_GT(nontrivial, 20);
}

TEST(Fingerprint, LengthAndLayout) {
  TLFingerprintConfig config;
  EXPECT_EQ(config.length(), 7u * 19u * 2u * 9u);
  auto fp = tl_fingerprint(triangle(1.4), config);
  EXPECT_EQ(fp.features.size(), config.length());
  EXPECT_EQ(fp.empty_blocks.size(), config.length() / kStatsPerBlock);
  EXPECT_EQ(fp.layout_hash, config.layout_hash());
  // Sets without N or O atoms are flagged and zero.
  EXPECT_EQ(fp.empty_blocks[0], 0);
  EXPECT_EQ(fp.empty_blocks[38], 1);
  for (std::size_t i = 38 * 9; i < 76 * 9; ++i)
    EXPECT_EQ(fp.features[i], 0.0);
  TLFingerprintConfig other;
  other.p_grid = { 0.0 };
  EXPECT_NE(other.layout_hash(), config.layout_hash());
}

TEST(Fingerprint, SingleAtom) {
  auto fp = tl_fingerprint(cloud_of({ { 1, 2, 3, Element::kC } }));
  for (std::size_t b = 0; b < 38; ++b) {
    EXPECT_EQ(fp.features[b * 9], 1.0);
    for (int s = 1; s < 9; ++s)
      EXPECT_EQ(fp.features[b * 9 + s], 0.0);
  }
}

TEST(Fingerprint, TriangleBlock) {
  auto fp = tl_fingerprint(triangle(1.4));
  const std::vector<double> want { 1, 6, 3, 3, 3, 3, 0, 0, 18 };
  for (int s = 0; s < 9; ++s)
    EXPECT_NEAR(fp.features[s], want[s], 1e-10);
}

TEST(Fingerprint, RigidMotionInvariant) {
  std::mt19937_64 rng(8);
  auto pts = random_points(rng, 20, 6.0);
  std::uniform_int_distribution<int> el(0, 2);
  const Element kinds[] = { Element::kC, Element::kN, Element::kO };
  for (auto &p: pts)
    p.element = kinds[el(rng)];
  const double a = 0.7, b = -1.1;
  auto moved = pts;
  for (auto &p: moved) {
    const double x = std::cos(a) * p.x - std::sin(a) * p.y;
    const double y = std::sin(a) * p.x + std::cos(a) * p.y;
    const double y2 = std::cos(b) * y - std::sin(b) * p.z;
    const double z2 = std::sin(b) * y + std::cos(b) * p.z;
    p = { x + 3.0, y2 - 1.0, z2 + 0.5, p.element };
  }
  auto f = tl_fingerprint(cloud_of(pts)), g = tl_fingerprint(cloud_of(moved));
  ASSERT_EQ(f.features.size(), g.features.size());
  for (std::size_t i = 0; i < f.features.size(); ++i)
    EXPECT_NEAR(f.features[i], g.features[i], 1e-6 * std::max(1.0, std::abs(f.features[i])));
  EXPECT_EQ(tl_fingerprint(cloud_of(pts)).features, f.features);
}
