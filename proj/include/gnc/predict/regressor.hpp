//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "gnc/core/error.hpp"
#include "gnc/core/hash.hpp"

namespace gnc {

using Json = nlohmann::json;

/// Hash of a training set; stored in model files for provenance.
inline std::uint64_t training_data_hash(const Eigen::MatrixXd &x,
                                        const Eigen::VectorXd &y) {
  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(x.rows()),
                                 static_cast<std::uint64_t>(x.cols()));
  h = fnv1a(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), h);
  return fnv1a(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), h);
}

/// A trained fingerprint -> binding-affinity model.
class Regressor {
public:
  virtual ~Regressor() = default;

  virtual std::string kind() const = 0;
  virtual Json params_json() const = 0;
  virtual Json state_json() const = 0;

  const std::string &fingerprint() const noexcept { return fingerprint_; }
  void set_fingerprint(std::string tag) { fingerprint_ = std::move(tag); }
  int feature_count() const noexcept { return features_; }
  std::uint64_t training_hash() const noexcept { return training_hash_; }
  const std::vector<std::string> &warnings() const noexcept {
    return warnings_;
  }

  Eigen::VectorXd predict(const Eigen::MatrixXd &x) const {
    if (x.cols() != features_)
      throw Error(ErrorCode::kFingerprintMismatch,
                  "model expects " + std::to_string(features_)
                      + " features of kind '" + fingerprint_ + "', got "
                      + std::to_string(x.cols()));
    return predict_rows(x);
  }

  Json to_json() const {
    return Json { { "schema", "gnc-model/v1" },
                  { "kind", kind() },
                  { "params", params_json() },
                  { "fingerprint", fingerprint_ },
                  { "feature_count", features_ },
                  { "training_hash", hex64(training_hash_) },
                  { "state", state_json() } };
  }

protected:
  virtual Eigen::VectorXd predict_rows(const Eigen::MatrixXd &x) const = 0;

  void record_training(const Eigen::MatrixXd &x, const Eigen::VectorXd &y) {
    features_ = static_cast<int>(x.cols());
    training_hash_ = training_data_hash(x, y);
  }

  void restore_common(const Json &j) {
    fingerprint_ = j.at("fingerprint").get<std::string>();
    features_ = j.at("feature_count").get<int>();
    training_hash_ = std::stoull(j.at("training_hash").get<std::string>(),
                                 nullptr, 16);
  }

  std::string fingerprint_ = "unspecified";
  int features_ = 0;
  std::uint64_t training_hash_ = 0;
  std::vector<std::string> warnings_;
};

inline Eigen::VectorXd predict(const Regressor &model,
                               const Eigen::MatrixXd &x) {
  return model.predict(x);
}

/// Feature matrices keyed by fingerprint tag; rows must align across tags.
using FeatureSet = std::map<std::string, Eigen::MatrixXd>;

/// Mean of member predictions. Per row, member outputs are sorted before
/// summation, so the result does not depend on member order.
class ConsensusPredictor {
public:
  ConsensusPredictor() = default;
  explicit ConsensusPredictor(
      std::vector<std::shared_ptr<const Regressor>> members)
      : members_(std::move(members)) { }

  void add(std::shared_ptr<const Regressor> m) {
    members_.push_back(std::move(m));
  }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<std::shared_ptr<const Regressor>> &members() const {
    return members_;
  }

  std::vector<Eigen::VectorXd> member_predictions(const FeatureSet &x) const {
    std::vector<Eigen::VectorXd> out;
    for (const auto &m: members_) {
      auto it = x.find(m->fingerprint());
      if (it == x.end())
        throw Error(ErrorCode::kFingerprintMismatch,
                    "no features of kind '" + m->fingerprint() + "'");
      out.push_back(m->predict(it->second));
    }
    return out;
  }

  Eigen::VectorXd predict(const FeatureSet &x) const {
    if (members_.empty())
      throw Error(ErrorCode::kNotFitted, "consensus has no members");
    return mean_of(member_predictions(x));
  }

  static Eigen::VectorXd mean_of(const std::vector<Eigen::VectorXd> &preds) {
    const auto rows = preds.front().size();
    Eigen::VectorXd out(rows);
    std::vector<double> col(preds.size());
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (std::size_t m = 0; m < preds.size(); ++m) {
        if (preds[m].size() != rows)
          throw Error(ErrorCode::kFingerprintMismatch,
                      "member predictions have different row counts");
        col[m] = preds[m](r);
      }
      std::sort(col.begin(), col.end());
      double s = 0;
      for (double v: col)
        s += v;
      out(r) = s / static_cast<double>(col.size());
    }
    return out;
  }

private:
  std::vector<std::shared_ptr<const Regressor>> members_;
};

inline Eigen::VectorXd
consensus_predict(const std::vector<std::shared_ptr<const Regressor>> &members,
                  const FeatureSet &x) {
  return ConsensusPredictor(members).predict(x);
}

}  // namespace gnc
