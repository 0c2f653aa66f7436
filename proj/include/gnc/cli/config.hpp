//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gnc/core/error.hpp"
#include "gnc/core/hash.hpp"
#include "gnc/embedding/encoder.hpp"
#include "gnc/predict/cv.hpp"
#include "gnc/screen/campaign.hpp"
#include "gnc/toplap/fingerprint.hpp"

namespace gnc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Built-in defaults; a config file only needs the keys it changes.
inline json default_config() {
  return json::parse(R"({
    "paths": {
      "dataset": "dataset.csv",
      "structures": "",
      "property_table": ""
    },
    "encoder": { "dimension": 512, "radius": 3, "nonzeros_per_feature": 8,
                 "seed": 7954320532686859892 },
    "fingerprint": {
      "geometry": "graph",
      "element_sets": [
        {"name": "C", "elements": ["C"]}, {"name": "N", "elements": ["N"]},
        {"name": "O", "elements": ["O"]}, {"name": "CN", "elements": ["C", "N"]},
        {"name": "CO", "elements": ["C", "O"]},
        {"name": "NO", "elements": ["N", "O"]},
        {"name": "heavy", "elements": []}
      ],
      "t_grid": {"start": 1.0, "stop": 10.0, "step": 0.5},
      "p_grid": [0.0, 0.5],
      "orders": [0]
    },
    "models": {
      "first_layer": "ae-mlp",
      "consensus": ["ae-mlp", "tl-gbdt"],
      "gbdt": {"trees": 500, "depth": 6, "learning_rate": 0.05,
               "subsample": 0.8, "min_samples_leaf": 1},
      "mlp": {"hidden": [256, 256], "epochs": 200, "learning_rate": 0.001,
              "batch_size": 32},
      "cv_folds": 5
    },
    "generator": {
      "seed": "",
      "references": [],
      "weights": [],
      "alpha": 0.15,
      "sigma": 1.0,
      "times": [1, 2, 4, 8, 16, 32],
      "trajectories": 100,
      "integrator": "exact",
      "euler_dt": 0.1
    },
    "policy": {},
    "admet": {"mode": "offline", "endpoint": "", "batch_size": 50,
              "retries": 3, "backoff_ms": 250, "timeout_ms": 10000},
    "optimize": {"select": "consensus", "max_parents": 10},
    "seed": 0
  })");
}

inline constexpr const char *kAdmetEndpointEnv = "GNC_ADMET_ENDPOINT";

/// A loaded configuration: the merged JSON, the directory relative paths
/// resolve against, and the run-time knobs that do not affect results.
struct Config {
  json data;
  fs::path base_dir;
  fs::path out_dir = "gnc_out";
  unsigned threads = 1;

  /// Hash of everything that can change an output. Thread count and the
  /// output directory are excluded.
  std::string hash() const { return hex64(fnv1a(data.dump())); }

  fs::path path(const std::string &key) const {
    const auto p = data.at("paths").value(key, std::string());
    if (p.empty())
      return {};
    fs::path q(p);
    return q.is_absolute() ? q : base_dir / q;
  }

  std::uint64_t seed() const { return data.at("seed").get<std::uint64_t>(); }

  DescriptorEncoderConfig encoder_config() const {
    const auto &e = data.at("encoder");
    DescriptorEncoderConfig c;
    c.dimension = e.at("dimension").get<int>();
    c.radius = e.at("radius").get<int>();
    c.nonzeros_per_feature = e.at("nonzeros_per_feature").get<int>();
    c.seed = e.at("seed").get<std::uint64_t>();
    return c;
  }

  TLFingerprintConfig fingerprint_config() const {
    const auto &f = data.at("fingerprint");
    TLFingerprintConfig c;
    c.element_sets.clear();
    for (const auto &s: f.at("element_sets")) {
      ElementSet es { s.at("name").get<std::string>(), {} };
      for (const auto &sym: s.at("elements")) {
        auto e = element_from_symbol(sym.get<std::string>());
        if (!e)
          throw Error(ErrorCode::kInvalidConfig,
                      "unknown element " + sym.get<std::string>());
        es.elements.push_back(*e);
      }
      c.element_sets.push_back(std::move(es));
    }
    const auto &t = f.at("t_grid");
    if (t.is_array()) {
      c.t_grid = t.get<std::vector<double>>();
    } else {
      c.t_grid.clear();
      const double start = t.at("start"), stop = t.at("stop"),
                   step = t.at("step");
      if (!(step > 0))
        throw Error(ErrorCode::kInvalidConfig, "t_grid step must be positive");
      for (int i = 0; start + step * i <= stop + 1e-9; ++i)
        c.t_grid.push_back(start + step * i);
    }
    c.p_grid = f.at("p_grid").get<std::vector<double>>();
    c.orders = f.at("orders").get<std::vector<int>>();
    return c;
  }

  ModelSpec model_spec(const std::string &kind) const {
    const auto &m = data.at("models");
    ModelSpec s;
    s.kind = kind;
    s.gbdt = GbdtParams::from_json(m.at("gbdt"));
    s.gbdt.seed = hash_combine(seed(), fnv1a("gbdt"));
    s.mlp = MlpParams::from_json(m.at("mlp"));
    s.mlp.seed = hash_combine(seed(), fnv1a("mlp"));
    return s;
  }

  ScreeningPolicy policy() const {
    return ScreeningPolicy::from_json(data.at("policy"));
  }

  CampaignSpec campaign_spec() const {
    const auto &g = data.at("generator");
    CampaignSpec s;
    s.seed_smiles = g.at("seed").get<std::string>();
    for (const auto &r: g.at("references")) {
      s.reference_names.push_back(r.at("name").get<std::string>());
      s.reference_smiles.push_back(r.at("smiles").get<std::string>());
    }
    s.weights = g.at("weights").get<std::vector<double>>();
    s.alpha = g.at("alpha").get<double>();
    s.sigma = g.at("sigma").get<double>();
    s.times = g.at("times").get<std::vector<double>>();
    s.trajectories = g.at("trajectories").get<int>();
    s.rng_seed = seed();
    const auto integrator = g.at("integrator").get<std::string>();
    if (integrator != "exact" && integrator != "euler")
      throw Error(ErrorCode::kInvalidConfig,
                  "integrator must be 'exact' or 'euler'");
    s.integrator = integrator == "exact" ? Integrator::kExact
                                         : Integrator::kEuler;
    s.euler_dt = g.at("euler_dt").get<double>();
    s.policy = policy();
    s.threads = threads;
    s.config_hash = hash();
    if (s.seed_smiles.empty() || s.reference_smiles.empty())
      throw Error(ErrorCode::kInvalidConfig,
                  "generator needs a seed and at least one reference");
    return s;
  }

  AdmetClientConfig admet_client_config() const {
    const auto &a = data.at("admet");
    AdmetClientConfig c;
    c.endpoint = a.at("endpoint").get<std::string>();
    if (const char *env = std::getenv(kAdmetEndpointEnv); env && *env)
      c.endpoint = env;
    c.batch_size = a.at("batch_size").get<int>();
    c.retries = a.at("retries").get<int>();
    c.backoff_ms = a.at("backoff_ms").get<int>();
    c.timeout_ms = a.at("timeout_ms").get<int>();
    return c;
  }
};

namespace internal {

inline void merge(json &into, const json &from) {
  for (const auto &[k, v]: from.items()) {
    if (v.is_object() && into.contains(k) && into[k].is_object())
      merge(into[k], v);
    else
      into[k] = v;
  }
}

// "a.b.c" -> JSON pointer "/a/b/c"
inline json::json_pointer pointer(const std::string &dotted) {
  std::string p;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.'))
    p += "/" + part;
  return json::json_pointer(p);
}

}  // namespace internal

/// Loads a JSON config (or defaults when `path` is empty) and applies
/// `key.path=value` overrides; values parse as JSON, falling back to a
/// plain string.
inline Config load_config(const std::string &path,
                          const std::vector<std::string> &overrides = {}) {
  Config c;
  c.data = default_config();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in)
      throw Error(ErrorCode::kPrerequisiteMissing, "config " + path
                                                       + " not found");
    json user;
    try {
      user = json::parse(in);
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kInvalidConfig, path + ": " + e.what());
    }
    internal::merge(c.data, user);
    c.base_dir = fs::absolute(path).parent_path();
  } else {
    c.base_dir = fs::current_path();
  }
  for (const auto &o: overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kInvalidConfig, "override '" + o
                                                 + "' is not key=value");
    const std::string key = o.substr(0, eq), value = o.substr(eq + 1);
    json v;
    try {
      v = json::parse(value);
    } catch (const json::exception &) {
      v = value;
    }
    c.data[internal::pointer(key)] = v;
  }
  return c;
}

}  // namespace gnc::cli
