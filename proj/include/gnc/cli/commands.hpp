//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gnc/cli/config.hpp"
#include "gnc/embedding/index.hpp"
#include "gnc/predict/cv.hpp"
#include "gnc/predict/labels.hpp"
#include "gnc/screen/campaign.hpp"

namespace gnc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitPrerequisite = 3,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::kPrerequisiteMissing: return kExitPrerequisite;
  case ErrorCode::kInvalidConfig:
  case ErrorCode::kWeightSumViolation:
  case ErrorCode::kInvalidSchedule:
  case ErrorCode::kStepTooLarge: return kExitUsage;
  default: return kExitData;
  }
}

/// Output locations inside the work directory.
struct Layout {
  fs::path root;

  fs::path datasets() const { return root / "datasets"; }
  fs::path dataset(const std::string &t) const { return datasets() / (t + ".csv"); }
  fs::path rejects() const { return root / "ingest_rejects.csv"; }
  fs::path ingest_summary() const { return root / "ingest_summary.json"; }
  fs::path index() const { return root / "library.idx"; }
  fs::path models() const { return root / "models"; }
  fs::path model(const std::string &t, const std::string &m) const {
    return models() / (t + "." + m + ".json");
  }
  fs::path cv(const std::string &t, const std::string &m) const {
    return models() / ("cv_" + t + "_" + m + ".csv");
  }
  fs::path latents() const { return root / "latents.bin"; }
  fs::path records() const { return root / "records.jsonl"; }
  fs::path summary() const { return root / "summary.json"; }
  fs::path optimized() const { return root / "optimized.jsonl"; }
  fs::path report() const { return root / "report"; }
};

namespace internal {

inline void write_text(const fs::path &p, const std::string &text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::kIo, "cannot write " + p.string());
  out << text;
}

inline std::string read_text(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kPrerequisiteMissing,
                p.string() + " not found (run the earlier command first)");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void require(const fs::path &p, const std::string &producer) {
  if (!fs::exists(p))
    throw Error(ErrorCode::kPrerequisiteMissing,
                p.string() + " is missing; run `gnc " + producer + "` first");
}

inline std::vector<std::string> member_names(const Config &c) {
  std::vector<std::string> names;
  const auto &m = c.data.at("models");
  names.push_back(m.at("first_layer").get<std::string>());
  for (const auto &x: m.at("consensus"))
    if (std::find(names.begin(), names.end(), x.get<std::string>())
        == names.end())
      names.push_back(x.get<std::string>());
  return names;
}

// "ae-mlp" -> ("ae", "mlp")
inline std::pair<std::string, std::string> split_member(const std::string &m) {
  const auto dash = m.find('-');
  if (dash == std::string::npos)
    throw Error(ErrorCode::kInvalidConfig, "member '" + m
                                               + "' is not <fingerprint>-<model>");
  auto fp = m.substr(0, dash), kind = m.substr(dash + 1);
  if ((fp != "ae" && fp != "tl") || (kind != "mlp" && kind != "gbdt"))
    throw Error(ErrorCode::kInvalidConfig, "unknown member '" + m + "'");
  return { fp, kind };
}

inline std::shared_ptr<const Encoder> make_encoder(const Config &c) {
  return std::make_shared<DescriptorEncoder>(c.encoder_config());
}

inline std::shared_ptr<FeatureBuilder> make_features(const Config &c,
                                                     std::shared_ptr<const Encoder> enc,
                                                     const LabeledDataset *rows) {
  auto fb = std::make_shared<FeatureBuilder>(std::move(enc),
                                             c.fingerprint_config());
  const auto geometry = c.data.at("fingerprint").at("geometry").get<std::string>();
  if (geometry != "graph" && geometry != "structures")
    throw Error(ErrorCode::kInvalidConfig,
                "fingerprint.geometry must be 'graph' or 'structures'");
  if (geometry == "structures" && rows) {
    const auto dir = c.path("structures");
    for (const auto &r: rows->rows) {
      auto file = dir / (r.compound_id + ".sdf");
      if (fs::exists(file))
        fb->set_geometry(r.smiles, load_structure(read_text(file),
                                                  StructureFormat::kSdf));
    }
  }
  return fb;
}

inline std::string stamp(const Config &c) { return "# config_hash " + c.hash() + "\n"; }

inline Histogram ba_histogram() { return Histogram(-16.0, -4.0, 0.5); }

inline void print_hash(const Config &c, std::ostream &log) {
  log << "config_hash=" << c.hash() << "\n";
}

}  // namespace internal

/// Validates the dataset CSV, writes one BA-annotated file per target,
/// lists rejected rows, and builds the library index of all molecules.
inline int cmd_ingest(const Config &c, std::ostream &log) {
  internal::print_hash(c, log);
  Layout out { c.out_dir };
  const auto source = c.path("dataset");
  if (source.empty() || !fs::exists(source))
    throw Error(ErrorCode::kPrerequisiteMissing,
                "dataset '" + source.string() + "' not found (paths.dataset)");
  auto data = read_dataset_csv(source.string());
  fs::create_directories(out.datasets());

  json per_target = json::object();
  for (const auto &t: data.targets()) {
    auto d = data.for_target(t);
    internal::write_text(out.dataset(t),
                        internal::stamp(c) + format_dataset_csv(d));
    Histogram h = internal::ba_histogram();
    std::size_t ki = 0, ic50 = 0;
    for (const auto &r: d.rows) {
      h.add(r.ba);
      (r.label_type == LabelType::kKi ? ki : ic50) += 1;
    }
    per_target[t] = { { "rows", d.rows.size() },
                      { "ki_rows", ki },
                      { "ic50_rows", ic50 },
                      { "ba_histogram", h.to_json() } };
  }
  std::ostringstream rej;
  rej << "line,reason\n";
  for (const auto &r: data.rejected) {
    std::string why = r.reason;
    std::replace(why.begin(), why.end(), ',', ';');
    rej << r.line << "," << why << "\n";
  }
  internal::write_text(out.rejects(), rej.str());

  auto enc = internal::make_encoder(c);
  LibraryIndex index(enc);
  std::set<std::string> seen;
  for (const auto &r: data.rows)
    if (seen.insert(r.smiles).second)
      index.add(parse_smiles(r.smiles), r.compound_id);
  index.save(out.index().string());

  json summary = { { "config_hash", c.hash() },
                   { "rows", data.rows.size() },
                   { "rejected", data.rejected.size() },
                   { "molecules", index.size() },
                   { "targets", per_target } };
  internal::write_text(out.ingest_summary(), summary.dump(2) + "\n");
  log << "ingested " << data.rows.size() << " rows (" << data.rejected.size()
      << " rejected), " << index.size() << " molecules\n";
  for (const auto &r: data.rejected)
    log << "  rejected line " << r.line << ": " << r.reason << "\n";
  return kExitOk;
}

/// Trains every configured member per target and writes k-fold CV tables
/// for each member and for their consensus.
inline int cmd_train(const Config &c, std::ostream &log) {
  internal::print_hash(c, log);
  Layout out { c.out_dir };
  auto enc = internal::make_encoder(c);
  const int k = c.data.at("models").at("cv_folds").get<int>();
  const auto members = internal::member_names(c);
  const auto consensus = c.data.at("models").at("consensus")
                             .get<std::vector<std::string>>();
  fs::create_directories(out.models());

  bool any = false;
  for (const auto &target: known_targets()) {
    if (!fs::exists(out.dataset(target)))
      continue;
    any = true;
    auto d = read_dataset_csv(out.dataset(target).string());
    // Average repeated measurements of one molecule.
    std::map<std::string, std::pair<double, int>> acc;
    std::vector<std::string> smiles;
    for (const auto &r: d.rows) {
      auto [it, fresh] = acc.try_emplace(r.smiles, 0.0, 0);
      if (fresh)
        smiles.push_back(r.smiles);
      it->second.first += r.ba;
      it->second.second += 1;
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(smiles.size()));
    for (std::size_t i = 0; i < smiles.size(); ++i)
      y(static_cast<Eigen::Index>(i)) =
          acc[smiles[i]].first / acc[smiles[i]].second;
    auto fb = internal::make_features(c, enc, &d);
    FeatureSet fs_all = fb->build(smiles, c.threads);

    std::map<std::string, Eigen::VectorXd> oof;
    std::vector<int> folds;
    for (const auto &m: members) {
      auto [fp, kind] = internal::split_member(m);
      const auto tag = fp == "ae" ? fb->ae_tag() : fb->tl_tag();
      const auto &x = fs_all.at(tag);
      auto spec = c.model_spec(kind);
      auto rep = kfold_cv(x, y, k, spec, c.seed());
      oof[m] = rep.out_of_fold;
      internal::write_text(out.cv(target, m), internal::stamp(c) + rep.to_csv());
      auto model = spec.fit(x, y);
      model->set_fingerprint(tag);
      json j = model->to_json();
      j["config_hash"] = c.hash();
      j["target"] = target;
      internal::write_text(out.model(target, m), j.dump() + "\n");
      log << target << " " << m << ": CV mean R " << rep.mean_r << ", RMSE "
          << rep.mean_rmse << "\n";
    }

    // Consensus over the same folds, from the members' held-out predictions.
    folds = fold_assignment(smiles.size(), k, c.seed());
    std::vector<Eigen::VectorXd> preds;
    for (const auto &m: consensus)
      preds.push_back(oof.at(m));
    Eigen::VectorXd mean = ConsensusPredictor::mean_of(preds);
    CvReport rep;
    for (int f = 0; f < k; ++f) {
      std::vector<Eigen::Index> idx;
      for (std::size_t i = 0; i < folds.size(); ++i)
        if (folds[i] == f)
          idx.push_back(static_cast<Eigen::Index>(i));
      Eigen::VectorXd p = mean(idx), t = y(idx);
      FoldResult fr { f + 1, idx.size(), idx.size() >= 2 ? pearson_r(p, t) : 0.0,
                      rmse(p, t) };
      rep.folds.push_back(fr);
      rep.mean_r += fr.r / k;
      rep.mean_rmse += fr.rmse / k;
    }
    internal::write_text(out.cv(target, "consensus"),
                         internal::stamp(c) + rep.to_csv());
    log << target << " consensus: CV mean R " << rep.mean_r << ", RMSE "
        << rep.mean_rmse << "\n";
  }
  if (!any)
    throw Error(ErrorCode::kPrerequisiteMissing,
                "no ingested datasets in " + out.datasets().string()
                    + "; run `gnc ingest` first");
  return kExitOk;
}

/// Samples the configured trajectories and stores the latent batch.
inline int cmd_generate(const Config &c, std::ostream &log) {
  internal::print_hash(c, log);
  Layout out { c.out_dir };
  auto enc = internal::make_encoder(c);
  auto batch = generate_batch(c.campaign_spec(), *enc);
  fs::create_directories(out.root);
  batch.save(out.latents().string());
  log << "generated " << batch.samples.size() << " latent vectors (spec "
      << hex64(batch.spec_hash) << ")\n";
  return kExitOk;
}

namespace internal {

struct LoadedModels {
  CampaignModels models;
  std::shared_ptr<LibraryIndex> library;
  std::unique_ptr<AdmetProvider> admet;
};

inline LoadedModels load_models(const Config &c) {
  Layout out { c.out_dir };
  require(out.index(), "ingest");
  auto enc = make_encoder(c);
  LoadedModels lm;
  lm.library = std::make_shared<LibraryIndex>(
      LibraryIndex::load(out.index().string(), enc));
  lm.models.library = lm.library;
  lm.models.features = make_features(c, enc, nullptr);

  const auto first = c.data.at("models").at("first_layer").get<std::string>();
  if (split_member(first).first != "ae")
    throw Error(ErrorCode::kInvalidConfig,
                "the first-layer model must use the latent (ae) fingerprint");
  const auto consensus = c.data.at("models").at("consensus")
                             .get<std::vector<std::string>>();
  const auto policy = c.policy();
  for (const auto &t: policy.ba) {
    auto load = [&](const std::string &m) -> std::shared_ptr<const Regressor> {
      const auto p = out.model(t.target, m);
      require(p, "train");
      return load_regressor(json::parse(read_text(p)));
    };
    lm.models.first_layer[t.target] = load(first);
    ConsensusPredictor cp;
    for (const auto &m: consensus)
      cp.add(load(m));
    lm.models.consensus[t.target] = std::move(cp);

    // Training set of this target, for novelty scores.
    auto ti = std::make_shared<LibraryIndex>(enc);
    if (fs::exists(out.dataset(t.target)))
      for (const auto &r: read_dataset_csv(out.dataset(t.target).string()).rows)
        ti->add(parse_smiles(r.smiles));
    if (!ti->empty())
      lm.models.training_sets.emplace_back(t.target, ti);
  }

  lm.admet = std::make_unique<AdmetProvider>();
  const auto mode = c.data.at("admet").at("mode").get<std::string>();
  if (mode == "table" || !c.path("property_table").empty()) {
    if (c.path("property_table").empty())
      throw Error(ErrorCode::kInvalidConfig,
                  "admet.mode 'table' needs paths.property_table");
    lm.admet->set_table(PropertyTable::load(c.path("property_table").string()));
  }
  if (mode == "remote") {
    auto cc = c.admet_client_config();
    if (cc.endpoint.empty())
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("admet.mode 'remote' needs admet.endpoint or ")
                      + kAdmetEndpointEnv);
    lm.admet->set_client(std::make_shared<AdmetClient>(cc));
  } else if (mode != "offline" && mode != "table") {
    throw Error(ErrorCode::kInvalidConfig, "unknown admet.mode '" + mode + "'");
  }
  lm.models.admet = lm.admet.get();
  return lm;
}

inline std::string jsonl(const std::vector<json> &rows) {
  std::string s;
  for (const auto &r: rows)
    s += r.dump() + "\n";
  return s;
}

inline std::vector<json> read_jsonl(const fs::path &p) {
  std::vector<json> rows;
  std::istringstream in(read_text(p));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty())
      continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kMalformedRecord, e.what(), n);
    }
  }
  return rows;
}

}  // namespace internal

/// Full campaign over the latent batch (generated first if absent or
/// produced under a different generator configuration).
inline int cmd_screen(const Config &c, std::ostream &log) {
  internal::print_hash(c, log);
  Layout out { c.out_dir };
  auto lm = internal::load_models(c);
  const auto spec = c.campaign_spec();
  const Encoder &enc = lm.library->encoder();
  const auto expected = generation_hash(spec, enc);
  LatentBatch batch;
  bool reuse = false;
  if (fs::exists(out.latents())) {
    batch = LatentBatch::load(out.latents().string());
    reuse = batch.spec_hash == expected;
  }
  if (!reuse) {
    batch = generate_batch(spec, enc);
    batch.save(out.latents().string());
    log << "generated " << batch.samples.size() << " latent vectors\n";
  } else {
    log << "resuming from " << out.latents().string() << "\n";
  }
  auto result = run_campaign(spec, lm.models, batch);
  internal::write_text(out.records(), internal::jsonl(result.records));
  internal::write_text(out.summary(), result.summary.dump(2) + "\n");
  log << "stage counts: " << result.summary.at("counts").dump() << "\n";
  return kExitOk;
}

/// Hydroxyl scan over selected screened molecules. A molecule that cannot
/// be substituted yields an error line; the run continues.
inline int cmd_optimize(const Config &c, std::ostream &log) {
  internal::print_hash(c, log);
  Layout out { c.out_dir };
  internal::require(out.records(), "screen");
  auto lm = internal::load_models(c);
  const auto spec = c.campaign_spec();
  const auto select = c.data.at("optimize").at("select").get<std::string>();
  const auto max_parents = c.data.at("optimize").at("max_parents").get<std::size_t>();
  const auto &stages = campaign_stages();
  const auto min_stage = std::find(stages.begin(), stages.end(), select);
  if (min_stage == stages.end() || min_stage - stages.begin() < 2)
    throw Error(ErrorCode::kInvalidConfig,
                "optimize.select must be a stage at or after 'decoded'");

  std::vector<std::string> parents;
  for (const auto &r: internal::read_jsonl(out.records())) {
    const auto st = std::find(stages.begin(), stages.end(),
                              r.at("stage").get<std::string>());
    if (st < min_stage || !r.contains("decoded"))
      continue;
    const auto smi = r.at("decoded").get<std::string>();
    if (std::find(parents.begin(), parents.end(), smi) == parents.end())
      parents.push_back(smi);
    if (parents.size() >= max_parents)
      break;
  }

  std::vector<json> rows;
  std::size_t improved = 0, failed = 0;
  for (const auto &p: parents) {
    try {
      auto res = logp_optimize(p, spec, lm.models);
      improved += res.improved;
      rows.insert(rows.end(), res.variants.begin(), res.variants.end());
    } catch (const Error &e) {
      ++failed;
      rows.push_back({ { "schema", kOptimizedSchema },
                       { "config_hash", c.hash() },
                       { "parent", p },
                       { "error", e.what() } });
    }
  }
  internal::write_text(out.optimized(), internal::jsonl(rows));
  log << "optimized " << parents.size() << " parents: " << rows.size() - failed
      << " variants, " << improved << " improved, " << failed
      << " without substitutable hydrogen\n";
  return kExitOk;
}

/// Histogram and stage-count tables recomputed from the record files.
inline int cmd_report(const Config &c, std::ostream &log) {
  internal::print_hash(c, log);
  Layout out { c.out_dir };
  std::vector<json> records;
  if (fs::exists(out.records()))
    records = internal::read_jsonl(out.records());

  const auto &stages = campaign_stages();
  std::map<std::string, std::size_t> count;
  std::map<std::string, std::map<std::string, Histogram>> hist;
  auto add = [&](const std::string &table, const std::string &key, double v,
                 bool ba) {
    auto &m = hist[table];
    m.try_emplace(key, ba ? internal::ba_histogram()
                          : Histogram(-0.35, 1.0, 0.05))
        .first->second.add(v);
  };
  for (const auto &r: records) {
    const auto reached = std::find(stages.begin(), stages.end(),
                                   r.at("stage").get<std::string>())
                         - stages.begin();
    for (long k = 0; k <= reached; ++k)
      ++count[stages[static_cast<std::size_t>(k)]];
    for (const auto &[t, v]: r.at("first_layer").items())
      add("ba_first_layer", t, v.get<double>(), true);
    if (r.contains("consensus"))
      for (const auto &[t, v]: r.at("consensus").items())
        add("ba_consensus", t, v.get<double>(), true);
    for (const auto &[k, v]: r.at("similarity").at("references").items())
      add("similarity_reference", k, v.get<double>(), false);
    for (const auto &[k, v]: r.at("similarity").at("training").items())
      add("similarity_training", k, v.get<double>(), false);
  }

  fs::create_directories(out.report());
  std::ostringstream sc;
  sc << internal::stamp(c) << "stage,count\n";
  for (const auto &s: stages)
    sc << s << "," << count[s] << "\n";
  internal::write_text(out.report() / "stage_counts.csv", sc.str());
  for (const char *table: { "ba_first_layer", "ba_consensus",
                            "similarity_reference", "similarity_training" }) {
    std::ostringstream os;
    os << internal::stamp(c) << "series,lo,hi,count\n";
    for (const auto &[key, h]: hist[table]) {
      os << key << ",-inf," << h.lo << "," << h.below << "\n";
      for (std::size_t i = 0; i < h.counts.size(); ++i)
        os << key << "," << h.lo + h.width * static_cast<double>(i) << ","
           << h.lo + h.width * static_cast<double>(i + 1) << "," << h.counts[i]
           << "\n";
      os << key << "," << h.hi << ",inf," << h.above << "\n";
    }
    internal::write_text(out.report() / (std::string(table) + ".csv"), os.str());
  }

  std::ostringstream op;
  op << internal::stamp(c) << "parent,smiles,logp,parent_logp,improved\n";
  if (fs::exists(out.optimized()))
    for (const auto &r: internal::read_jsonl(out.optimized()))
      if (!r.contains("error"))
        op << r.at("parent").get<std::string>() << ","
           << r.at("smiles").get<std::string>() << "," << r.at("logp") << ","
           << r.at("parent_logp") << "," << r.at("improved") << "\n";
  internal::write_text(out.report() / "optimized.csv", op.str());
  log << "report over " << records.size() << " records written to "
      << out.report().string() << "\n";
  return kExitOk;
}

/// Runs `fn`, mapping library errors to the documented exit codes.
template <class Fn>
int run_command(Fn &&fn, std::ostream &err) {
  try {
    return fn();
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception &e) {
    err << "error: configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace gnc::cli
