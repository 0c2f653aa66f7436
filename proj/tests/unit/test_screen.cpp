//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "gnc/predict/cv.hpp"
#include "gnc/screen/campaign.hpp"

using namespace gnc;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kSyntax;
}

PropertyMap mid_range() {
  return { { admet::kFdamdd, 0.1 }, { admet::kF20, 0.1 }, { admet::kHalfLife, 0.1 },
           { admet::kLogP, 1.5 },   { admet::kLogS, -2.0 }, { admet::kCaco2, -4.5 },
           { admet::kSas, 3.0 } };
}

std::vector<std::string> corpus_smiles(std::size_t limit) {
  std::ifstream in(std::string(GNC_TEST_DATA_DIR) + "/corpus.tsv");
  std::string line;
  std::getline(in, line);
  std::vector<std::string> out;
  while (out.size() < limit && std::getline(in, line))
    out.push_back(line.substr(0, line.find('\t')));
  return out;
}

// Canned server: answers for every molecule except those in `drop`.
struct FakeServer {
  int calls = 0;
  int fail_first = 0;  // leading calls that time out
  std::set<std::string> drop;
  std::string override_body;

  std::string operator()(const std::string &body) {
    ++calls;
    if (calls <= fail_first)
      throw Error(ErrorCode::kTimeout, "simulated timeout");
    if (!override_body.empty())
      return override_body;
    auto req = nlohmann::json::parse(body);
    nlohmann::json results = nlohmann::json::array();
    for (const auto &s: req.at("smiles")) {
      if (drop.count(s.get<std::string>()))
        continue;
      results.push_back({ { "smiles", s },
                          { "properties", { { "LogS", -1.0 }, { "Caco-2", -4.9 } } } });
    }
    return nlohmann::json { { "results", results } }.dump();
  }
};

}  // namespace

TEST(BaGate, TruthTable) {
  ScreeningPolicy policy;
  const double good[] = { -10.0, -10.0, -10.0, -7.0 };
  const double bad[] = { -9.0, -9.54, -8.0, -9.0 };
  const char *names[] = { "MOR", "KOR", "DOR", "hERG" };
  for (int mask = 0; mask < 16; ++mask) {
    PropertyMap p;
    int failing = 0;
    for (int t = 0; t < 4; ++t) {
      const bool fail = mask & (1 << t);
      p[names[t]] = fail ? bad[t] : good[t];
      failing += fail;
    }
    auto v = ba_gate(p, policy);
    EXPECT_EQ(v.pass, mask == 0) << mask;
    EXPECT_EQ(static_cast<int>(v.reasons.size()), failing) << mask;
  }
  auto mor = ba_gate({ { "MOR", -9.0 }, { "KOR", -10 }, { "DOR", -10 }, { "hERG", -7 } }, policy);
  ASSERT_EQ(mor.reasons.size(), 1u);
  EXPECT_EQ(mor.reasons[0].rfind("MOR", 0), 0u);
  auto herg = ba_gate({ { "MOR", -10 }, { "KOR", -10 }, { "DOR", -10 }, { "hERG", -9 } }, policy);
  EXPECT_EQ(herg.reasons[0].rfind("hERG", 0), 0u);
  // Both thresholds are strict.
  EXPECT_FALSE(ba_gate({ { "MOR", -9.54 }, { "KOR", -10 }, { "DOR", -10 }, { "hERG", -7 } }, policy).pass);
  EXPECT_FALSE(ba_gate({ { "MOR", -10 }, { "KOR", -10 }, { "DOR", -10 }, { "hERG", -8.18 } }, policy).pass);
  EXPECT_EQ(code_of([&] { ba_gate({ { "MOR", -10 } }, policy); }), ErrorCode::kMissingTarget);
}

TEST(AdmetGate, TruthTable) {
  struct Case {
    const char *index;
    double value;
    bool relaxed, medium, pass;
  };
  const Case cases[] = {
    { admet::kLogP, 4.28, false, false, false },
    { admet::kLogP, 4.28, true, false, true },
    { admet::kLogP, 3.0, false, false, true },
    { admet::kLogP, -0.01, true, false, false },
    { admet::kCaco2, -5.16, false, false, false },
    { admet::kCaco2, -5.15, false, false, false },
    { admet::kCaco2, -5.14, false, false, true },
    { admet::kSas, 6.0, false, false, false },
    { admet::kSas, 5.99, false, false, true },
    { admet::kLogS, 0.5, false, false, true },
    { admet::kFdamdd, 0.5, false, false, false },
    { admet::kFdamdd, 0.5, false, true, true },
  };
  for (const auto &c: cases) {
    ScreeningPolicy policy;
    policy.relaxed_logp = c.relaxed;
    policy.accept_medium = c.medium;
    auto p = mid_range();
    p[c.index] = c.value;
    auto v = admet_gate(p, policy);
    EXPECT_EQ(v.pass, c.pass) << c.index << " " << c.value;
    EXPECT_EQ(v.reasons.size(), c.pass ? 0u : 1u);
  }
  EXPECT_TRUE(admet_gate(mid_range(), ScreeningPolicy {}).pass);
  auto partial = mid_range();
  partial.erase(admet::kF20);
  partial.erase(admet::kCaco2);
  try {
    admet_gate(partial, ScreeningPolicy {});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingProperty);
    EXPECT_NE(std::string(e.what()).find("F20%"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("Caco-2"), std::string::npos);
  }
}

TEST(AdmetGate, RelaxedIsSuperset) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> prob(0, 1), logp(-2, 7), logs(-6, 2),
      caco(-6, -4), sas(1, 9);
  ScreeningPolicy strict, relaxed;
  relaxed.relaxed_logp = true;
  int strict_pass = 0, relaxed_pass = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    PropertyMap p { { admet::kFdamdd, prob(rng) * 0.5 }, { admet::kF20, prob(rng) * 0.5 },
                    { admet::kHalfLife, prob(rng) * 0.5 }, { admet::kLogP, logp(rng) },
                    { admet::kLogS, logs(rng) }, { admet::kCaco2, caco(rng) },
                    { admet::kSas, sas(rng) } };
    const bool s = admet_gate(p, strict).pass, r = admet_gate(p, relaxed).pass;
    EXPECT_TRUE(!s || r);
    strict_pass += s;
    relaxed_pass += r;
  }
  EXPECT_GT(strict_pass, 0);
  EXPECT_GT(relaxed_pass, strict_pass);
}

TEST(Policy, JsonRoundTripAndValidation) {
  ScreeningPolicy p;
  p.relaxed_logp = true;
  p.novelty_min = 0.1;
  p.novelty_max = 0.9;
  auto back = ScreeningPolicy::from_json(p.to_json());
  EXPECT_EQ(back.to_json(), p.to_json());
  auto j = p.to_json();
  j["novelty_band"] = { 0.9, 0.1 };
  EXPECT_EQ(code_of([&] { ScreeningPolicy::from_json(j); }), ErrorCode::kInvalidConfig);
  j = p.to_json();
  j["admet_indexes"] = { "pKa" };
  EXPECT_EQ(code_of([&] { ScreeningPolicy::from_json(j); }), ErrorCode::kInvalidConfig);
}

TEST(AdmetClient, CacheAndPartialBatch) {
  auto server = std::make_shared<FakeServer>();
  server->drop = { "CCN", "c1ccccc1" };
  AdmetClientConfig cfg;
  cfg.batch_size = 2;
  AdmetClient client(cfg, [server](const std::string &b) { return (*server)(b); });
  auto r = client.fetch({ "OCC", "CCN", "c1ccccc1", "CC(=O)O", "CCCC" });
  EXPECT_EQ(r.properties.size(), 3u);
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_EQ(server->calls, 3);
  EXPECT_EQ(client.network_calls(), 3u);
  EXPECT_DOUBLE_EQ(r.properties.at("CCO").at("LogS"), -1.0);

  auto again = client.fetch({ "CCO", "CCCC" });
  EXPECT_EQ(server->calls, 3);
  EXPECT_EQ(client.cache_hits(), 2u);
  EXPECT_EQ(again.properties.size(), 2u);

  auto bad = client.fetch({ "C1CC" });
  ASSERT_EQ(bad.failures.size(), 1u);
  EXPECT_EQ(server->calls, 3);
}

TEST(AdmetClient, RetriesAndErrors) {
  AdmetClientConfig cfg;
  cfg.retries = 2;
  cfg.backoff_ms = 1;
  auto flaky = std::make_shared<FakeServer>();
  flaky->fail_first = 2;
  AdmetClient ok(cfg, [flaky](const std::string &b) { return (*flaky)(b); });
  EXPECT_EQ(ok.fetch({ "CCO" }).properties.size(), 1u);
  EXPECT_EQ(flaky->calls, 3);

  auto dead = std::make_shared<FakeServer>();
  dead->fail_first = 100;
  AdmetClient gone(cfg, [dead](const std::string &b) { return (*dead)(b); });
  EXPECT_EQ(code_of([&] { gone.fetch({ "CCO" }); }), ErrorCode::kTimeout);
  EXPECT_EQ(dead->calls, 3);

  auto garbled = std::make_shared<FakeServer>();
  garbled->override_body = "{\"results\": [{\"smiles\": 4}]}";
  AdmetClient mal(cfg, [garbled](const std::string &b) { return (*garbled)(b); });
  EXPECT_EQ(code_of([&] { mal.fetch({ "CCO" }); }), ErrorCode::kMalformedResponse);
  garbled->override_body = "not json";
  EXPECT_EQ(code_of([&] { mal.fetch({ "CCO" }); }), ErrorCode::kMalformedResponse);
}

TEST(AdmetProvider, Precedence) {
  AdmetProvider offline;
  EXPECT_EQ(offline.mode(), "offline");
  auto p = offline.properties({ "CCO" }).at("CCO");
  EXPECT_EQ(p.size(), 2u);
  EXPECT_TRUE(p.count(admet::kLogP) && p.count(admet::kSas));
  EXPECT_EQ(code_of([&] { admet_gate(p, ScreeningPolicy {}); }), ErrorCode::kMissingProperty);

  AdmetProvider table;
  table.set_table(PropertyTable::parse("smiles,LogS,LogP\nOCC,-0.5,9.0\n"));
  EXPECT_EQ(table.mode(), "table");
  auto t = table.properties({ "CCO", "CCN" });
  EXPECT_DOUBLE_EQ(t.at("CCO").at("LogP"), 9.0);
  EXPECT_DOUBLE_EQ(t.at("CCO").at("LogS"), -0.5);
  EXPECT_FALSE(t.at("CCN").count("LogS"));

  auto server = std::make_shared<FakeServer>();
  server->drop = { "CCN" };
  table.set_client(std::make_shared<AdmetClient>(
      AdmetClientConfig {}, [server](const std::string &b) { return (*server)(b); }));
  std::vector<std::pair<std::string, std::string>> errors;
  auto r = table.properties({ "CCO", "CCN" }, &errors);
  EXPECT_EQ(table.mode(), "remote");
  EXPECT_DOUBLE_EQ(r.at("CCO").at("LogS"), -1.0);
  EXPECT_DOUBLE_EQ(r.at("CCO").at("LogP"), 9.0);
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].first, "CCN");
}

TEST(Novelty, Scores) {
  auto enc = std::make_shared<DescriptorEncoder>();
  auto index = std::make_shared<LibraryIndex>(enc);
  auto smiles = corpus_smiles(200);
  index->add(smiles);
  auto a = enc->encode(parse_smiles(smiles[3]));
  std::vector<double> e0(512, 0.0), e1(512, 0.0);
  e0[0] = 1;
  e1[1] = 1;
  auto s = novelty_scores(a, { { "self", a }, { "axis", e0 } }, { { "lib", index } });
  EXPECT_DOUBLE_EQ(s.reference.at("self"), 1.0);
  EXPECT_NEAR(s.training.at("lib"), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(novelty_scores(e1, { { "axis", e0 } }, {}).reference.at("axis"), 0.0);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0, 1);
  for (int q = 0; q < 20; ++q) {
    std::vector<double> v(512);
    for (auto &x: v)
      x = n(rng);
    double best = -1;
    for (std::size_t i = 0; i < index->size(); ++i) {
      auto w = index->vector(i);
      double ab = 0, aa = 0, bb = 0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        ab += v[j] * w[j];
        aa += v[j] * v[j];
        bb += w[j] * w[j];
      }
      best = std::max(best, ab / (aa + bb - ab));
    }
    EXPECT_NEAR(novelty_scores(v, {}, { { "lib", index } }).training.at("lib"), best, 1e-12);
  }
  LibraryIndex empty(enc);
  EXPECT_EQ(code_of([&] { empty.max_similarity(a); }), ErrorCode::kEmptyIndex);
}

namespace {

// Small campaign: 60 corpus molecules, synthetic labels tied to LogP and
// size, and a reduced topological fingerprint to keep fitting quick.
struct CampaignFixture {
  std::shared_ptr<DescriptorEncoder> encoder = std::make_shared<DescriptorEncoder>();
  std::shared_ptr<LibraryIndex> library = std::make_shared<LibraryIndex>(encoder);
  std::shared_ptr<FeatureBuilder> features;
  CampaignModels models;
  CampaignSpec spec;
  AdmetProvider admet;

  CampaignFixture() {
    auto smiles = corpus_smiles(60);
    library->add(smiles);
    TLFingerprintConfig tl;
    tl.element_sets = { { "heavy", {} }, { "CN", { Element::kC, Element::kN } } };
    tl.t_grid = { 1.0, 2.0, 3.0, 4.0 };
    features = std::make_shared<FeatureBuilder>(encoder, tl);

    std::vector<std::string> canon;
    for (std::size_t i = 0; i < library->size(); ++i)
      canon.push_back(library->entry(i).smiles);
    auto fs = features->build(canon, 1);
    const auto n = static_cast<Eigen::Index>(canon.size());
    const std::map<std::string, std::pair<double, double>> coef {
      { "MOR", { -0.5, -0.10 } }, { "KOR", { -0.4, -0.12 } },
      { "DOR", { -0.3, -0.08 } }, { "hERG", { 0.2, -0.05 } },
    };
    GbdtParams gp;
    gp.trees = 40;
    gp.depth = 3;
    for (const auto &[target, c]: coef) {
      Eigen::VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        auto m = parse_smiles(canon[i]);
        y(i) = -7.0 + c.first * logp_estimate(m) + c.second * m.atom_count();
      }
      auto first = fit_gbdt(fs.at(features->ae_tag()), y, gp);
      first->set_fingerprint(features->ae_tag());
      models.first_layer[target] = std::move(first);
      ConsensusPredictor cons;
      for (const auto &tag: { features->ae_tag(), features->tl_tag() }) {
        auto m = fit_gbdt(fs.at(tag), y, gp);
        m->set_fingerprint(tag);
        cons.add(std::move(m));
      }
      models.consensus[target] = std::move(cons);
    }
    models.library = library;
    models.features = features;
    models.training_sets = { { "library", library } };
    models.admet = &admet;

    spec.seed_smiles = canon[0];
    spec.reference_names = { "a", "b", "c" };
    spec.reference_smiles = { canon[5], canon[9], canon[17] };
    spec.weights = { 0.35, 0.35, 0.3 };
    spec.times = { 1, 2, 4, 8, 16 };
    spec.trajectories = 40;
    spec.rng_seed = 77;
    spec.policy.ba = { { "MOR", true, -8.5 }, { "KOR", true, -8.5 },
                       { "DOR", true, -8.0 }, { "hERG", false, -9.5 } };
    spec.policy.admet_indexes = { admet::kLogP, admet::kSas };
    spec.config_hash = "test";
  }

  CampaignResult run(unsigned threads = 1) {
    spec.threads = threads;
    return run_campaign(spec, models, generate_batch(spec, *encoder));
  }
};

std::string dump_all(const CampaignResult &r) {
  std::string s;
  for (const auto &j: r.records)
    s += j.dump() + "\n";
  return s;
}

}  // namespace

TEST(Campaign, DeterministicMonotoneAuditable) {
  CampaignFixture fx;
  auto a = fx.run(1);
  auto b = fx.run(1);
  auto c = fx.run(3);
  EXPECT_EQ(dump_all(a), dump_all(b));
  EXPECT_EQ(dump_all(a), dump_all(c));
  EXPECT_EQ(a.summary.dump(), c.summary.dump());
  ASSERT_EQ(a.records.size(), 200u);

  const auto &counts = a.summary.at("counts");
  std::size_t prev = a.records.size();
  for (const auto &st: campaign_stages()) {
    const auto k = counts.at(st).get<std::size_t>();
    EXPECT_LE(k, prev) << st;
    prev = k;
  }
  EXPECT_EQ(counts.at("generated").get<std::size_t>(), 200u);
  EXPECT_GT(counts.at("decoded").get<std::size_t>(), 0u);

  for (const auto &r: a.records) {
    EXPECT_EQ(r.at("provenance").at("weights"), nlohmann::json({ 0.35, 0.35, 0.3 }));
    EXPECT_EQ(r.at("schema"), kRecordSchema);
    EXPECT_TRUE(audit_record(r, fx.spec.policy));
  }
  // Any change to a stored value that flips a verdict is caught.
  bool tampered = false;
  for (auto r: a.records) {
    if (!r.contains("consensus"))
      continue;
    const bool was = r.at("consensus_verdict").at("pass").get<bool>();
    r["consensus"]["MOR"] = was ? -1.0 : -20.0;
    r["consensus"]["KOR"] = -20.0;
    r["consensus"]["DOR"] = -20.0;
    r["consensus"]["hERG"] = -1.0;
    EXPECT_FALSE(audit_record(r, fx.spec.policy));
    tampered = true;
    break;
  }
  EXPECT_TRUE(tampered);
}

TEST(Campaign, NoiseFreePathApproachesReference) {
  CampaignFixture fx;
  fx.spec.sigma = 0.0;
  fx.spec.reference_names = { "r" };
  fx.spec.reference_smiles = { fx.spec.reference_smiles[0] };
  fx.spec.weights = { 1.0 };
  fx.spec.trajectories = 1;
  fx.spec.times = { 0.5, 1, 2, 4, 8, 16, 32, 64, 128 };
  auto res = fx.run();
  double prev = -2;
  for (const auto &r: res.records) {
    const double s = r.at("similarity").at("references").at("r").get<double>();
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_GT(prev, 0.999);
  const auto &last = res.records.back();
  if (last.contains("decoded"))
    EXPECT_EQ(last.at("decoded"), fx.spec.reference_smiles[0]);
}

TEST(Campaign, StageFailuresDoNotAbort) {
  CampaignFixture fx;
  // A consensus member for a target that the first layer never sees.
  fx.models.consensus.erase("hERG");
  fx.spec.policy.ba.back().value = -100.0;
  auto res = fx.run();
  EXPECT_EQ(res.records.size(), 200u);
  bool saw_error = false;
  for (const auto &r: res.records)
    if (r.contains("consensus_verdict")) {
      const auto &v = r.at("consensus_verdict");
      EXPECT_FALSE(v.at("pass").get<bool>());
      saw_error = saw_error
                  || v.at("reasons").at(0).get<std::string>().find("hERG") != std::string::npos;
      EXPECT_TRUE(audit_record(r, fx.spec.policy));
    }
  EXPECT_TRUE(saw_error);
  EXPECT_EQ(res.summary.at("counts").at("consensus").get<int>(), 0);
}

TEST(Optimize, HydroxylScan) {
  CampaignFixture fx;
  const std::string parent = "CCc1ccc(C)cc1";
  auto out = logp_optimize(parent, fx.spec, fx.models);
  auto parent_mol = parse_smiles(parent);
  const double parent_logp = logp_estimate(parent_mol);
  ASSERT_FALSE(out.variants.empty());
  std::size_t improved = 0;
  for (const auto &v: out.variants) {
    EXPECT_EQ(v.at("oxygen_delta").get<int>(), 1);
    EXPECT_EQ(v.at("schema"), kOptimizedSchema);
    // Every variant was added to the augmented index, so it reconstructs.
    EXPECT_TRUE(v.at("reconstructed").get<bool>());
    EXPECT_LT(v.at("logp").get<double>(), parent_logp);
    improved += v.at("improved").get<bool>();
    EXPECT_EQ(v.at("improved").get<bool>(),
              v.at("consensus_verdict").at("pass").get<bool>()
                  && v.at("admet_verdict").at("pass").get<bool>());
  }
  EXPECT_EQ(out.improved, improved);
  // The campaign library itself is untouched.
  EXPECT_EQ(fx.library->size(), 60u);
  EXPECT_EQ(code_of([&] { logp_optimize("[C]", fx.spec, fx.models); }),
            ErrorCode::kNoSubstitutablePosition);
}
