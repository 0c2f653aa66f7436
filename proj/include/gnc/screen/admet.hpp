//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "gnc/core/error.hpp"
#include "gnc/molgraph/canon.hpp"
#include "gnc/molgraph/logp.hpp"
#include "gnc/molgraph/sas.hpp"
#include "gnc/molgraph/smiles.hpp"
#include "gnc/screen/policy.hpp"

namespace gnc {

/// Properties computed in-process: LogP and the SAS surrogate.
inline PropertyMap local_admet(const Molecule &mol) {
  return { { admet::kLogP, logp_estimate(mol) },
           { admet::kSas, sas_estimate(mol) } };
}

/// User-supplied property table keyed by canonical SMILES. CSV with a
/// `smiles` column followed by one column per property.
class PropertyTable {
public:
  static PropertyTable parse(const std::string &text) {
    PropertyTable t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
      return t;
    auto header = split(line);
    if (header.empty() || header[0] != "smiles")
      throw Error(ErrorCode::kSchemaMismatch,
                  "property table must start with a 'smiles' column", 1);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty())
        continue;
      auto f = split(line);
      if (f.size() != header.size())
        throw Error(ErrorCode::kMalformedRecord, "wrong field count", line_no);
      std::string key;
      try {
        key = write_canonical_smiles(parse_smiles(f[0]));
      } catch (const Error &e) {
        throw Error(ErrorCode::kMalformedRecord, e.what(), line_no);
      }
      auto &props = t.rows_[key];
      for (std::size_t c = 1; c < f.size(); ++c)
        if (!f[c].empty())
          props[header[c]] = std::stod(f[c]);
    }
    return t;
  }

  static PropertyTable load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw Error(ErrorCode::kIo, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  const PropertyMap *find(const std::string &canonical) const {
    auto it = rows_.find(canonical);
    return it == rows_.end() ? nullptr : &it->second;
  }

private:
  static std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c: line) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  }

  std::map<std::string, PropertyMap> rows_;
};

struct AdmetClientConfig {
  std::string endpoint;    // http://host[:port]/path
  int batch_size = 50;
  int retries = 3;
  int backoff_ms = 250;    // doubled after every failed attempt
  int timeout_ms = 10000;
};

struct AdmetFetchResult {
  std::map<std::string, PropertyMap> properties;  // by canonical SMILES
  std::vector<std::pair<std::string, std::string>> failures;  // smiles, why

  bool partial() const noexcept { return !failures.empty(); }
};

/// Batched client for a remote ADMET service speaking
///   POST {"smiles": [...]}  ->  {"results": [{"smiles", "properties"}]}
/// Results are cached by canonical SMILES; only cache misses go out.
class AdmetClient {
public:
  // Sends one request body, returns the response body. Throws Timeout.
  using Transport = std::function<std::string(const std::string &)>;

  explicit AdmetClient(AdmetClientConfig config)
      : config_(std::move(config)), transport_(http_transport(config_)) { }

  AdmetClient(AdmetClientConfig config, Transport transport)
      : config_(std::move(config)), transport_(std::move(transport)) { }

  std::size_t cache_hits() const noexcept { return hits_; }
  std::size_t network_calls() const noexcept { return calls_; }

  /// Never throws for per-molecule problems: unparseable SMILES and
  /// molecules the server did not return are listed in `failures`.
  /// Transport timeouts after all retries and malformed bodies throw.
  AdmetFetchResult fetch(const std::vector<std::string> &smiles) {
    AdmetFetchResult out;
    std::vector<std::string> todo;
    for (const auto &s: smiles) {
      std::string canon;
      try {
        canon = write_canonical_smiles(parse_smiles(s));
      } catch (const Error &e) {
        out.failures.emplace_back(s, e.what());
        continue;
      }
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(canon); it != cache_.end()) {
        ++hits_;
        out.properties[canon] = it->second;
      } else if (std::find(todo.begin(), todo.end(), canon) == todo.end()) {
        todo.push_back(canon);
      }
    }
    const std::size_t step = static_cast<std::size_t>(
        std::max(1, config_.batch_size));
    for (std::size_t start = 0; start < todo.size(); start += step) {
      std::vector<std::string> batch(
          todo.begin() + static_cast<long>(start),
          todo.begin() + static_cast<long>(std::min(todo.size(), start + step)));
      auto got = request(batch);
      for (const auto &s: batch) {
        auto it = got.find(s);
        if (it == got.end()) {
          out.failures.emplace_back(s, "not returned by server");
          continue;
        }
        std::lock_guard lock(mutex_);
        cache_[s] = it->second;
        out.properties[s] = it->second;
      }
    }
    return out;
  }

private:
  std::map<std::string, PropertyMap>
  request(const std::vector<std::string> &batch) {
    const std::string body = nlohmann::json { { "smiles", batch } }.dump();
    std::string reply;
    int wait = config_.backoff_ms;
    for (int attempt = 0;; ++attempt) {
      try {
        ++calls_;
        reply = transport_(body);
        break;
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kTimeout || attempt >= config_.retries)
          throw;
        std::this_thread::sleep_for(std::chrono::milliseconds(wait));
        wait *= 2;
      }
    }

    std::map<std::string, PropertyMap> got;
    try {
      auto j = nlohmann::json::parse(reply);
      for (const auto &r: j.at("results")) {
        const auto s = r.at("smiles").get<std::string>();
        std::string canon = write_canonical_smiles(parse_smiles(s));
        PropertyMap props;
        for (const auto &[k, v]: r.at("properties").items())
          if (v.is_number())
            props[k] = v.get<double>();
        got[canon] = std::move(props);
      }
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kMalformedResponse, e.what());
    } catch (const Error &e) {
      throw Error(ErrorCode::kMalformedResponse, e.what());
    }
    return got;
  }

  static Transport http_transport(const AdmetClientConfig &config) {
    return [config](const std::string &body) -> std::string {
      const std::string prefix = "http://";
      if (config.endpoint.rfind(prefix, 0) != 0)
        throw Error(ErrorCode::kInvalidConfig,
                    "ADMET endpoint must be an http:// URL");
      std::string rest = config.endpoint.substr(prefix.size());
      auto slash = rest.find('/');
      std::string host = rest.substr(0, slash);
      std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
      int port = 80;
      if (auto colon = host.find(':'); colon != std::string::npos) {
        port = std::stoi(host.substr(colon + 1));
        host = host.substr(0, colon);
      }
      httplib::Client cli(host, port);
      const auto sec = config.timeout_ms / 1000;
      const auto usec = (config.timeout_ms % 1000) * 1000;
      cli.set_connection_timeout(sec, usec);
      cli.set_read_timeout(sec, usec);
      cli.set_write_timeout(sec, usec);
      auto res = cli.Post(path, body, "application/json");
      if (!res)
        throw Error(ErrorCode::kTimeout,
                    "request to " + config.endpoint + " failed: "
                        + httplib::to_string(res.error()));
      if (res->status != 200)
        throw Error(ErrorCode::kMalformedResponse,
                    "HTTP status " + std::to_string(res->status));
      return res->body;
    };
  }

  AdmetClientConfig config_;
  Transport transport_;
  std::mutex mutex_;
  std::map<std::string, PropertyMap> cache_;
  std::size_t hits_ = 0;
  std::size_t calls_ = 0;
};

inline AdmetFetchResult fetch_admet_remote(AdmetClient &client,
                                           const std::vector<std::string> &smiles) {
  return client.fetch(smiles);
}

/// Where ADMET properties come from in a campaign. Local surrogates are
/// always available; a property table and a remote client, when present,
/// take precedence in that order (remote first).
class AdmetProvider {
public:
  AdmetProvider() = default;

  void set_table(PropertyTable table) { table_ = std::move(table); has_table_ = true; }
  void set_client(std::shared_ptr<AdmetClient> client) { client_ = std::move(client); }

  std::string mode() const {
    if (client_)
      return "remote";
    return has_table_ ? "table" : "offline";
  }

  /// Properties for each canonical SMILES. Remote failures are reported in
  /// `errors` and those molecules fall back to table and local values.
  std::map<std::string, PropertyMap>
  properties(const std::vector<std::string> &canonical,
             std::vector<std::pair<std::string, std::string>> *errors = nullptr) {
    std::map<std::string, PropertyMap> out;
    AdmetFetchResult remote;
    if (client_) {
      try {
        remote = client_->fetch(canonical);
      } catch (const Error &e) {
        for (const auto &s: canonical)
          remote.failures.emplace_back(s, e.what());
      }
      if (errors)
        errors->insert(errors->end(), remote.failures.begin(),
                       remote.failures.end());
    }
    for (const auto &s: canonical) {
      PropertyMap p = local_admet(parse_smiles(s));
      if (has_table_)
        if (const auto *row = table_.find(s))
          for (const auto &[k, v]: *row)
            p[k] = v;
      if (auto it = remote.properties.find(s); it != remote.properties.end())
        for (const auto &[k, v]: it->second)
          p[k] = v;
      out[s] = std::move(p);
    }
    return out;
  }

private:
  PropertyTable table_;
  bool has_table_ = false;
  std::shared_ptr<AdmetClient> client_;
};

}  // namespace gnc
