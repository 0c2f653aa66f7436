//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gnc/core/parallel.hpp"
#include "gnc/embedding/encoder.hpp"
#include "gnc/molgraph/canon.hpp"
#include "gnc/molgraph/smiles.hpp"
#include "gnc/molgraph/structure.hpp"
#include "gnc/predict/regressor.hpp"
#include "gnc/toplap/fingerprint.hpp"

namespace gnc {

/// Builds the two fingerprint kinds used by the predictors: "ae" (the latent
/// vector) and "tl" (topological-Laplacian statistics). Tags carry the
/// encoder and layout hashes, so a model trained under one configuration
/// rejects features from another.
class FeatureBuilder {
public:
  FeatureBuilder(std::shared_ptr<const Encoder> encoder,
                 TLFingerprintConfig tl_config)
      : encoder_(std::move(encoder)), tl_config_(std::move(tl_config)) { }

  std::string ae_tag() const { return "ae:" + hex64(encoder_->config_hash()); }
  std::string tl_tag() const { return "tl:" + hex64(tl_config_.layout_hash()); }
  const Encoder &encoder() const { return *encoder_; }
  const TLFingerprintConfig &tl_config() const { return tl_config_; }

  /// Recorded geometry for a canonical SMILES; molecules without one get
  /// graph-derived coordinates.
  void set_geometry(const std::string &canonical, LabeledPointCloud cloud) {
    geometry_[canonical] = std::move(cloud);
  }

  LabeledPointCloud cloud_for(const std::string &canonical,
                              const Molecule &mol) const {
    if (auto it = geometry_.find(canonical); it != geometry_.end())
      return it->second;
    return graph_embedding_3d(mol);
  }

  /// Features for canonical SMILES, one row per molecule in input order.
  FeatureSet build(const std::vector<std::string> &canonical,
                   unsigned threads = 1) const {
    const auto n = static_cast<Eigen::Index>(canonical.size());
    Eigen::MatrixXd ae(n, encoder_->dimension());
    Eigen::MatrixXd tl(n, static_cast<Eigen::Index>(tl_config_.length()));
    parallel_for(canonical.size(), threads, [&](std::size_t i) {
      Molecule m = parse_smiles(canonical[i]);
      auto v = encoder_->encode(m);
      ae.row(static_cast<Eigen::Index>(i)) =
          Eigen::Map<const Eigen::RowVectorXd>(v.data(),
                                               static_cast<Eigen::Index>(v.size()));
      auto fp = tl_fingerprint(cloud_for(canonical[i], m), tl_config_);
      tl.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(
          fp.features.data(), static_cast<Eigen::Index>(fp.features.size()));
    });
    return { { ae_tag(), std::move(ae) }, { tl_tag(), std::move(tl) } };
  }

private:
  std::shared_ptr<const Encoder> encoder_;
  TLFingerprintConfig tl_config_;
  std::map<std::string, LabeledPointCloud> geometry_;
};

}  // namespace gnc
