//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "gnc/embedding/index.hpp"
#include "gnc/molgraph/substitute.hpp"

using namespace gnc;

namespace {

std::vector<std::string> corpus_smiles() {
  std::ifstream in(std::string(GNC_TEST_DATA_DIR) + "/corpus.tsv");
  std::string line;
  std::getline(in, line);
  std::vector<std::string> out;
  while (std::getline(in, line))
    out.push_back(line.substr(0, line.find('\t')));
  return out;
}

std::shared_ptr<const Encoder> default_encoder() {
  static auto enc = std::make_shared<DescriptorEncoder>();
  return enc;
}

// Multiplies another encoder's output by a constant.
class ScaledEncoder final: public Encoder {
public:
  ScaledEncoder(std::shared_ptr<const Encoder> base, double c)
      : base_(std::move(base)), c_(c) { }
  int dimension() const noexcept override { return base_->dimension(); }
  std::uint64_t config_hash() const noexcept override {
    return hash_combine(base_->config_hash(), fnv1a("scaled"));
  }
  LatentVector encode(const Molecule &m) const override {
    auto v = base_->encode(m);
    for (auto &x: v)
      x *= c_;
    return v;
  }

private:
  std::shared_ptr<const Encoder> base_;
  double c_;
};

// Exhaustive ranking with an independently written similarity.
std::vector<std::pair<double, std::string>>
linear_scan(const LibraryIndex &index, const std::vector<double> &q) {
  std::vector<std::pair<double, std::string>> all;
  for (std::size_t i = 0; i < index.size(); ++i) {
    auto v = index.vector(i);
    long double ab = 0, aa = 0, bb = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      ab += q[j] * v[j];
      aa += q[j] * q[j];
      bb += v[j] * v[j];
    }
    all.emplace_back(static_cast<double>(ab / (aa + bb - ab)),
                     index.entry(i).smiles);
  }
  std::sort(all.begin(), all.end(), [](const auto &x, const auto &y) {
    if (x.first != y.first)
      return x.first > y.first;
    return x.second < y.second;
  });
  return all;
}

}  // namespace

TEST(Tanimoto, ClosedForms) {
  std::vector<double> a { 1, 0 }, b { 0, 1 }, c { 1, 1 };
  EXPECT_DOUBLE_EQ(tanimoto_latent(a, a), 1.0);
  EXPECT_DOUBLE_EQ(tanimoto_latent(a, b), 0.0);
  EXPECT_DOUBLE_EQ(tanimoto_latent(c, a), 0.5);
  std::vector<double> neg { -1, 0 };
  EXPECT_DOUBLE_EQ(tanimoto_latent(a, neg), -1.0 / 3.0);
}

TEST(Tanimoto, Errors) {
  std::vector<double> z { 0, 0 }, a { 1, 0 }, d3 { 1, 0, 0 };
  try {
    tanimoto_latent(z, z);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kBothZero);
  }
  try {
    tanimoto_latent(a, d3);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Tanimoto, SymmetricAndBounded) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> a(16), b(16);
    for (auto &x: a)
      x = n(rng);
    for (auto &x: b)
      x = n(rng);
    const double s = tanimoto_latent(a, b);
    EXPECT_EQ(s, tanimoto_latent(b, a));
    EXPECT_GE(s, -1.0 / 3.0 - 1e-12);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(tanimoto_latent(a, a), 1.0, 1e-15);
  }
}

TEST(Encoder, Deterministic) {
  auto m = parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
  DescriptorEncoder enc;
  EXPECT_EQ(enc.encode(m), enc.encode(m));
  EXPECT_EQ(enc.encode(m).size(), 512u);
}

TEST(Encoder, BenzeneToluene) {
  DescriptorEncoder enc;
  const double s = tanimoto_latent(enc.encode(parse_smiles("c1ccccc1")),
                                   enc.encode(parse_smiles("Cc1ccccc1")));
  EXPECT_GT(s, 0.0);
  EXPECT_LT(s, 1.0);
}

TEST(Encoder, CorpusFiniteScaledInjective) {
  DescriptorEncoder enc;
  std::set<std::vector<double>> seen;
  std::set<std::string> canon;
  for (const auto &s: corpus_smiles()) {
    auto m = parse_smiles(s);
    canon.insert(write_canonical_smiles(m));
    auto v = enc.encode(m);
    ASSERT_TRUE(all_finite(v));
    const double r = rms(v);
    EXPECT_GE(r, 0.5);
    EXPECT_LE(r, 2.0);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), canon.size());
}

TEST(Encoder, PermutationInvariant) {
  DescriptorEncoder enc;
  auto a = parse_smiles("OC(=O)c1ccccc1O");
  auto b = parse_smiles("c1cc(O)c(C(O)=O)cc1");
  EXPECT_EQ(enc.encode(a), enc.encode(b));
}

TEST(Index, ExactMatchAndReconstruction) {
  LibraryIndex index(default_encoder());
  auto issues = index.add(std::vector<std::string> { "CCO", "c1ccccc1", "CCN",
                                                     "OCC", "C1CC" });
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].input, 4u);
  EXPECT_EQ(index.size(), 3u);
  auto m = parse_smiles("c1ccccc1");
  auto hits = index.decode(default_encoder()->encode(m), 1);
  EXPECT_EQ(hits[0].smiles, write_canonical_smiles(m));
  EXPECT_DOUBLE_EQ(hits[0].score, 1.0);
  EXPECT_TRUE(reconstruction_check(index, parse_smiles("OCC")));
  EXPECT_FALSE(reconstruction_check(index, parse_smiles("CCCCCl")));
  EXPECT_EQ(index.decode(default_encoder()->encode(m), 10).size(), 3u);
  auto mols = decode(index, default_encoder()->encode(m), 2);
  EXPECT_EQ(mols.size(), 2u);
}

TEST(Index, Empty) {
  LibraryIndex index(default_encoder());
  try {
    index.decode(std::vector<double>(512, 1.0), 1);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyIndex);
  }
}

TEST(Index, MatchesLinearScan) {
  LibraryIndex index(default_encoder());
  auto smiles = corpus_smiles();
  // Grow to ten thousand entries with (repeated) hydroxyl variants.
  std::vector<std::string> more = smiles;
  std::set<std::string> unique(smiles.begin(), smiles.end());
  for (std::size_t i = 0; i < more.size() && unique.size() < 10'200; ++i) {
    try {
      for (const auto &v: hydroxyl_variants(parse_smiles(more[i])))
        if (unique.insert(v.smiles).second)
          more.push_back(v.smiles);
    } catch (const Error &) {
    }
  }
  index.add(more);
  ASSERT_GE(index.size(), 10'000u);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 1);
  for (int q = 0; q < 100; ++q) {
    std::vector<double> v(512);
    if (q % 2) {
      for (auto &x: v)
        x = n(rng);
    } else {
      auto base = index.vector(rng() % index.size());
      for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = base[j] + 0.5 * n(rng);
    }
    auto got = index.decode(v, 5);
    auto want = linear_scan(index, v);
    for (std::size_t r = 0; r < got.size(); ++r) {
      EXPECT_EQ(got[r].smiles, want[r].second);
      EXPECT_NEAR(got[r].score, want[r].first, 1e-12);
    }
  }
}

TEST(Index, RescalingKeepsRanking) {
  auto smiles = corpus_smiles();
  smiles.resize(200);
  LibraryIndex plain(default_encoder());
  plain.add(smiles);
  const double c = 3.7;
  LibraryIndex scaled(std::make_shared<ScaledEncoder>(default_encoder(), c));
  scaled.add(smiles);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  for (int q = 0; q < 20; ++q) {
    std::vector<double> v(512), w(512);
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] = n(rng);
      w[j] = c * v[j];
    }
    auto a = plain.decode(v, 3), b = scaled.decode(w, 3);
    for (std::size_t r = 0; r < 3; ++r) {
      EXPECT_EQ(a[r].smiles, b[r].smiles);
      EXPECT_NEAR(a[r].score, b[r].score, 1e-12);
    }
  }
  auto m = parse_smiles(smiles[17]);
  EXPECT_EQ(scaled.decode(scaled.encoder().encode(m), 1)[0].smiles,
            write_canonical_smiles(m));
}

TEST(Index, SaveLoadRoundTrip) {
  auto smiles = corpus_smiles();
  smiles.resize(300);
  smiles.push_back(smiles[0]);
  LibraryIndex index(default_encoder());
  index.add(smiles);
  EXPECT_EQ(index.size(), 300u);
  const auto path = (std::filesystem::temp_directory_path() / "gnc_index_test.idx").string();
  index.save(path);
  auto back = LibraryIndex::load(path, default_encoder());
  ASSERT_EQ(back.size(), index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    EXPECT_EQ(back.entry(i).smiles, index.entry(i).smiles);
    auto a = index.vector(i), b = back.vector(i);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
  std::vector<double> q(512, 0.25);
  q[3] = -2;
  auto x = index.decode(q, 10), y = back.decode(q, 10);
  for (std::size_t r = 0; r < x.size(); ++r) {
    EXPECT_EQ(x[r].smiles, y[r].smiles);
    EXPECT_EQ(x[r].score, y[r].score);
  }

  DescriptorEncoderConfig other;
  other.dimension = 256;
  try {
    LibraryIndex::load(path, std::make_shared<DescriptorEncoder>(other));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexVersionMismatch);
  }
  std::filesystem::remove(path);
}
