//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gnc/embedding/index.hpp"

namespace gnc {

struct NamedLatent {
  std::string name;
  LatentVector vector;
};

struct NoveltyScores {
  std::map<std::string, double> reference;  // Tanimoto to each reference
  std::map<std::string, double> training;   // max Tanimoto over each set

  double max_training() const {
    double m = -1.0;
    for (const auto &[k, v]: training)
      m = std::max(m, v);
    return m;
  }
};

using NamedIndex = std::pair<std::string, std::shared_ptr<const LibraryIndex>>;

inline NoveltyScores novelty_scores(std::span<const double> candidate,
                                    const std::vector<NamedLatent> &references,
                                    const std::vector<NamedIndex> &training) {
  NoveltyScores s;
  for (const auto &r: references)
    s.reference[r.name] = tanimoto_latent(candidate, r.vector);
  for (const auto &[name, index]: training)
    s.training[name] = index->max_similarity(candidate);
  return s;
}

}  // namespace gnc
