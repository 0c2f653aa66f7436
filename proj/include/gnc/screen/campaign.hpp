//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "gnc/core/parallel.hpp"
#include "gnc/embedding/index.hpp"
#include "gnc/generator/generate.hpp"
#include "gnc/molgraph/logp.hpp"
#include "gnc/molgraph/substitute.hpp"
#include "gnc/predict/regressor.hpp"
#include "gnc/screen/admet.hpp"
#include "gnc/screen/features.hpp"
#include "gnc/screen/novelty.hpp"
#include "gnc/screen/policy.hpp"

namespace gnc {

inline constexpr const char *kRecordSchema = "gnc-record/v1";
inline constexpr const char *kOptimizedSchema = "gnc-optimized/v1";

/// Pipeline stages in order; a record's stage is the last one it passed.
inline const std::vector<std::string> &campaign_stages() {
  static const std::vector<std::string> s { "generated", "first_layer",
                                            "decoded", "reconstructed",
                                            "consensus", "admet" };
  return s;
}

struct CampaignSpec {
  std::string seed_smiles;
  std::vector<std::string> reference_names;
  std::vector<std::string> reference_smiles;
  std::vector<double> weights;
  double alpha = 0.15;
  double sigma = 1.0;
  std::vector<double> times { 1, 2, 4, 8, 16, 32 };
  int trajectories = 1;
  std::uint64_t rng_seed = 0;
  Integrator integrator = Integrator::kExact;
  double euler_dt = 0.1;
  ScreeningPolicy policy;
  unsigned threads = 1;
  std::string config_hash;
};

/// Everything the campaign reads but never modifies.
struct CampaignModels {
  std::shared_ptr<const LibraryIndex> library;
  std::shared_ptr<const FeatureBuilder> features;
  // Per target: the latent-space model used before decoding.
  std::map<std::string, std::shared_ptr<const Regressor>> first_layer;
  // Per target: members averaged after decoding.
  std::map<std::string, ConsensusPredictor> consensus;
  std::vector<NamedIndex> training_sets;
  AdmetProvider *admet = nullptr;
};

struct Histogram {
  double lo, hi, width;
  std::vector<std::size_t> counts;
  std::size_t below = 0, above = 0;

  Histogram(double lo_, double hi_, double width_)
      : lo(lo_), hi(hi_), width(width_),
        counts(static_cast<std::size_t>(std::ceil((hi_ - lo_) / width_ - 1e-9))) { }

  void add(double x) {
    if (x < lo) {
      ++below;
    } else if (x >= hi) {
      ++above;
    } else {
      auto b = static_cast<std::size_t>((x - lo) / width);
      ++counts[std::min(b, counts.size() - 1)];
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json bins = nlohmann::json::array();
    for (std::size_t i = 0; i < counts.size(); ++i)
      bins.push_back({ { "lo", lo + width * static_cast<double>(i) },
                       { "hi", lo + width * static_cast<double>(i + 1) },
                       { "count", counts[i] } });
    return { { "bins", bins }, { "below", below }, { "above", above } };
  }
};

struct CampaignResult {
  std::vector<nlohmann::json> records;
  nlohmann::json summary;
};

namespace internal {

inline nlohmann::json to_json(const PropertyMap &m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[k, v]: m)
    j[k] = v;
  return j;
}

inline Verdict guarded(const std::function<Verdict()> &gate) {
  try {
    return gate();
  } catch (const Error &e) {
    return { false, { e.what() } };
  }
}

// Per-molecule evaluation after decoding, shared by campaigns and
// optimization.
struct MoleculeEvaluation {
  PropertyMap consensus;
  Verdict ba;
  bool evaluated = false;
  std::string error;
};

inline std::vector<MoleculeEvaluation>
evaluate_consensus(const CampaignModels &models,
                   const std::vector<std::string> &canonical,
                   const ScreeningPolicy &policy, unsigned threads) {
  std::vector<MoleculeEvaluation> out(canonical.size());
  if (canonical.empty())
    return out;
  FeatureSet fs = models.features->build(canonical, threads);
  for (auto &e: out)
    e.evaluated = true;
  for (const auto &[target, predictor]: models.consensus) {
    Eigen::VectorXd p;
    try {
      p = predictor.predict(fs);
    } catch (const Error &e) {
      for (auto &ev: out)
        ev.error = e.what();
      continue;
    }
    for (std::size_t i = 0; i < canonical.size(); ++i)
      out[i].consensus[target] = p(static_cast<Eigen::Index>(i));
  }
  for (auto &e: out)
    e.ba = guarded([&] { return ba_gate(e.consensus, policy); });
  return out;
}

}  // namespace internal

inline DriftSpec make_drift(const CampaignSpec &spec, const Encoder &encoder) {
  DriftSpec d;
  for (const auto &s: spec.reference_smiles)
    d.references.push_back(encoder.encode(parse_smiles(s)));
  d.weights = spec.weights;
  d.alpha = spec.alpha;
  d.sigma = spec.sigma;
  d.validate();
  return d;
}

inline GenerationSchedule make_schedule(const CampaignSpec &spec,
                                        const Encoder &encoder) {
  GenerationSchedule s;
  s.seed = encoder.encode(parse_smiles(spec.seed_smiles));
  s.times = spec.times;
  s.trajectories = spec.trajectories;
  s.rng_seed = spec.rng_seed;
  s.integrator = spec.integrator;
  s.euler_dt = spec.euler_dt;
  s.validate();
  return s;
}

inline std::uint64_t generation_hash(const CampaignSpec &spec,
                                     const Encoder &encoder) {
  return hash_combine(make_drift(spec, encoder).hash(),
                      make_schedule(spec, encoder).hash());
}

inline LatentBatch generate_batch(const CampaignSpec &spec,
                                  const Encoder &encoder) {
  LatentBatch b;
  b.dimension = static_cast<std::uint32_t>(encoder.dimension());
  b.rng_seed = spec.rng_seed;
  b.spec_hash = generation_hash(spec, encoder);
  b.samples = generate(make_drift(spec, encoder), make_schedule(spec, encoder),
                       spec.threads);
  return b;
}

/// Screens a batch of generated latents through the gate sequence. Stage
/// failures are recorded on the candidate; nothing here aborts the run.
inline CampaignResult run_campaign(const CampaignSpec &spec,
                                   const CampaignModels &models,
                                   const LatentBatch &batch) {
  spec.policy.validate();
  const auto &library = *models.library;
  const Encoder &encoder = library.encoder();
  const std::size_t n = batch.samples.size();
  const unsigned threads = spec.threads;

  std::vector<NamedLatent> refs;
  for (std::size_t k = 0; k < spec.reference_smiles.size(); ++k)
    refs.push_back({ k < spec.reference_names.size()
                         ? spec.reference_names[k]
                         : "ref" + std::to_string(k + 1),
                     encoder.encode(parse_smiles(spec.reference_smiles[k])) });

  // Stage 1: latent-space predictions and novelty on every sample.
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), encoder.dimension());
  for (std::size_t i = 0; i < n; ++i)
    x.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(
        batch.samples[i].x.data(), encoder.dimension());
  std::vector<PropertyMap> first(n);
  std::vector<std::string> first_error(n);
  for (const auto &[target, model]: models.first_layer) {
    try {
      Eigen::VectorXd p = model->predict(x);
      for (std::size_t i = 0; i < n; ++i)
        first[i][target] = p(static_cast<Eigen::Index>(i));
    } catch (const Error &e) {
      for (auto &err: first_error)
        err = e.what();
    }
  }
  std::vector<NoveltyScores> novelty(n);
  std::vector<Verdict> first_verdict(n);
  parallel_for(n, threads, [&](std::size_t i) {
    novelty[i] = novelty_scores(batch.samples[i].x, refs, models.training_sets);
    first_verdict[i] = internal::guarded(
        [&] { return ba_gate(first[i], spec.policy); });
  });

  // Stage 2: decode the survivors.
  std::vector<std::optional<DecodeHit>> decoded(n);
  parallel_for(n, threads, [&](std::size_t i) {
    if (first_verdict[i].pass)
      decoded[i] = library.decode(batch.samples[i].x, 1).front();
  });

  // Stage 3+: evaluate each distinct decoded molecule once.
  std::vector<std::string> unique;
  {
    std::set<std::string> seen;
    for (const auto &d: decoded)
      if (d && seen.insert(d->smiles).second)
        unique.push_back(d->smiles);
  }
  std::vector<char> reconstructed(unique.size());
  parallel_for(unique.size(), threads, [&](std::size_t i) {
    reconstructed[i] = reconstruction_check(library, parse_smiles(unique[i]));
  });
  std::vector<std::string> to_score;
  for (std::size_t i = 0; i < unique.size(); ++i)
    if (reconstructed[i])
      to_score.push_back(unique[i]);
  auto evals = internal::evaluate_consensus(models, to_score, spec.policy,
                                            threads);
  std::map<std::string, std::size_t> eval_of;
  std::vector<std::string> admet_needed;
  for (std::size_t i = 0; i < to_score.size(); ++i) {
    eval_of[to_score[i]] = i;
    if (evals[i].ba.pass)
      admet_needed.push_back(to_score[i]);
  }
  std::vector<std::pair<std::string, std::string>> admet_errors;
  AdmetProvider offline;
  AdmetProvider &provider = models.admet ? *models.admet : offline;
  auto props = provider.properties(admet_needed, &admet_errors);
  std::map<std::string, Verdict> admet_verdict;
  for (const auto &s: admet_needed)
    admet_verdict[s] = internal::guarded(
        [&] { return admet_gate(props.at(s), spec.policy); });

  // Records, in sample order.
  CampaignResult result;
  std::map<std::string, std::size_t> stage_count;
  std::map<std::string, std::set<std::string>> stage_unique;
  std::map<std::string, Histogram> first_hist, consensus_hist, ref_hist,
      train_hist;
  auto ba_hist = [] { return Histogram(-16.0, -4.0, 0.5); };
  auto sim_hist = [] { return Histogram(-0.35, 1.0, 0.05); };
  std::size_t novelty_pass = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const auto &s = batch.samples[i];
    nlohmann::json r;
    r["schema"] = kRecordSchema;
    r["config_hash"] = spec.config_hash;
    r["id"] = std::to_string(s.trajectory) + "-" + std::to_string(s.time_index);
    r["provenance"] = {
      { "seed", spec.seed_smiles },
      { "references", spec.reference_smiles },
      { "reference_names", spec.reference_names },
      { "weights", spec.weights },
      { "alpha", spec.alpha },
      { "sigma", spec.sigma },
      { "t", s.t },
      { "trajectory", s.trajectory },
      { "rng_seed", spec.rng_seed },
      { "integrator", spec.integrator == Integrator::kExact ? "exact" : "euler" },
    };
    r["latent_hash"] = hex64(latent_hash(s.x));
    r["first_layer"] = internal::to_json(first[i]);
    r["first_layer_verdict"] = first_verdict[i].to_json();
    r["similarity"] = { { "references", novelty[i].reference },
                        { "training", novelty[i].training } };
    const double max_train = novelty[i].max_training();
    const bool novel = max_train >= spec.policy.novelty_min
                       && max_train <= spec.policy.novelty_max;
    r["novelty_pass"] = novel;
    novelty_pass += novel;
    for (const auto &[t, v]: first[i])
      first_hist.try_emplace(t, ba_hist()).first->second.add(v);
    for (const auto &[k, v]: novelty[i].reference)
      ref_hist.try_emplace(k, sim_hist()).first->second.add(v);
    for (const auto &[k, v]: novelty[i].training)
      train_hist.try_emplace(k, sim_hist()).first->second.add(v);
    std::vector<std::string> errors;
    if (!first_error[i].empty())
      errors.push_back(first_error[i]);

    std::string stage = "generated";
    if (first_verdict[i].pass) {
      stage = "first_layer";
      const auto &d = *decoded[i];
      r["decoded"] = d.smiles;
      r["decode_score"] = d.score;
      stage = "decoded";
      const auto u = static_cast<std::size_t>(
          std::find(unique.begin(), unique.end(), d.smiles) - unique.begin());
      r["reconstructed"] = static_cast<bool>(reconstructed[u]);
      if (reconstructed[u]) {
        stage = "reconstructed";
        const auto &ev = evals[eval_of.at(d.smiles)];
        r["consensus"] = internal::to_json(ev.consensus);
        r["consensus_verdict"] = ev.ba.to_json();
        if (!ev.error.empty())
          errors.push_back(ev.error);
        for (const auto &[t, v]: ev.consensus)
          consensus_hist.try_emplace(t, ba_hist()).first->second.add(v);
        if (ev.ba.pass) {
          stage = "consensus";
          r["admet"] = internal::to_json(props.at(d.smiles));
          r["admet_mode"] = provider.mode();
          const auto &av = admet_verdict.at(d.smiles);
          r["admet_verdict"] = av.to_json();
          for (const auto &[smi, why]: admet_errors)
            if (smi == d.smiles)
              errors.push_back("ADMET: " + why);
          if (av.pass)
            stage = "admet";
        }
      }
    }
    r["stage"] = stage;
    r["errors"] = errors;

    const auto &stages = campaign_stages();
    const auto reached = std::find(stages.begin(), stages.end(), stage)
                         - stages.begin();
    for (long k = 0; k <= reached; ++k) {
      ++stage_count[stages[static_cast<std::size_t>(k)]];
      if (k >= 2)
        stage_unique[stages[static_cast<std::size_t>(k)]].insert(
            r["decoded"].get<std::string>());
    }
    result.records.push_back(std::move(r));
  }

  nlohmann::json counts = nlohmann::json::object();
  nlohmann::json unique_counts = nlohmann::json::object();
  for (const auto &st: campaign_stages()) {
    counts[st] = stage_count[st];
    unique_counts[st] = stage_unique[st].size();
  }
  unique_counts.erase("generated");
  unique_counts.erase("first_layer");
  auto hist_json = [](const std::map<std::string, Histogram> &h) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[k, v]: h)
      j[k] = v.to_json();
    return j;
  };
  const double decoded_n = static_cast<double>(stage_count["decoded"]);
  result.summary = {
    { "schema", "gnc-summary/v1" },
    { "config_hash", spec.config_hash },
    { "counts", counts },
    { "unique_molecules", unique_counts },
    { "novelty_pass", novelty_pass },
    { "reconstruction_rate",
      decoded_n > 0 ? stage_count["reconstructed"] / decoded_n : 0.0 },
    { "admet_mode", provider.mode() },
    { "histograms",
      { { "first_layer_ba", hist_json(first_hist) },
        { "consensus_ba", hist_json(consensus_hist) },
        { "similarity_reference", hist_json(ref_hist) },
        { "similarity_training", hist_json(train_hist) } } },
  };
  return result;
}

/// Re-evaluates a recorded verdict from the values stored in the record.
inline bool audit_record(const nlohmann::json &r, const ScreeningPolicy &policy) {
  auto props = [](const nlohmann::json &j) {
    PropertyMap m;
    for (const auto &[k, v]: j.items())
      m[k] = v.get<double>();
    return m;
  };
  auto same = [&](const char *values, const char *verdict, auto gate) {
    if (!r.contains(verdict))
      return true;
    Verdict v = internal::guarded([&] { return gate(props(r.at(values)), policy); });
    return v.to_json() == r.at(verdict);
  };
  return same("first_layer", "first_layer_verdict", ba_gate)
         && same("consensus", "consensus_verdict", ba_gate)
         && same("admet", "admet_verdict", admet_gate);
}

struct OptimizationResult {
  std::vector<nlohmann::json> variants;
  std::size_t improved = 0;
};

/// Hydroxyl scan of one molecule: every variant is added to a copy of the
/// library, must survive the reconstruction check there, and is re-scored
/// by the consensus predictors, the local LogP estimate and the ADMET gate.
/// A variant is improved when it passes every gate and lowers LogP.
inline OptimizationResult logp_optimize(const std::string &parent_smiles,
                                        const CampaignSpec &spec,
                                        const CampaignModels &models) {
  const Molecule parent = parse_smiles(parent_smiles);
  const std::string parent_canon = write_canonical_smiles(parent);
  const double parent_logp = logp_estimate(parent);
  auto variants = hydroxyl_variants(parent);

  LibraryIndex augmented = *models.library;
  for (const auto &v: variants)
    augmented.add(v.molecule, "hydroxyl-variant");

  std::vector<std::string> canon;
  for (const auto &v: variants)
    canon.push_back(v.smiles);
  auto evals = internal::evaluate_consensus(models, canon, spec.policy,
                                            spec.threads);
  std::vector<std::pair<std::string, std::string>> admet_errors;
  AdmetProvider offline;
  AdmetProvider &provider = models.admet ? *models.admet : offline;
  auto props = provider.properties(canon, &admet_errors);

  OptimizationResult out;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto &v = variants[i];
    const bool rec = reconstruction_check(augmented, v.molecule);
    const double logp = logp_estimate(v.molecule);
    auto av = internal::guarded(
        [&] { return admet_gate(props.at(v.smiles), spec.policy); });
    const bool improved = rec && evals[i].ba.pass && av.pass
                          && logp < parent_logp;
    out.improved += improved;
    std::vector<std::string> errors;
    if (!evals[i].error.empty())
      errors.push_back(evals[i].error);
    for (const auto &[smi, why]: admet_errors)
      if (smi == v.smiles)
        errors.push_back("ADMET: " + why);
    out.variants.push_back({
        { "schema", kOptimizedSchema },
        { "config_hash", spec.config_hash },
        { "parent", parent_canon },
        { "parent_logp", parent_logp },
        { "smiles", v.smiles },
        { "position", v.position },
        { "oxygen_delta",
          v.molecule.count_element(Element::kO)
              - parent.count_element(Element::kO) },
        { "logp", logp },
        { "reconstructed", rec },
        { "consensus", internal::to_json(evals[i].consensus) },
        { "consensus_verdict", evals[i].ba.to_json() },
        { "admet", internal::to_json(props.at(v.smiles)) },
        { "admet_mode", provider.mode() },
        { "admet_verdict", av.to_json() },
        { "improved", improved },
        { "errors", errors },
    });
  }
  return out;
}

}  // namespace gnc
