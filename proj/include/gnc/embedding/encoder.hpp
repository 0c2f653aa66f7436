//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gnc/core/hash.hpp"
#include "gnc/embedding/latent.hpp"
#include "gnc/molgraph/molecule.hpp"

namespace gnc {

/// The encoder side of the latent-space contract. A learned model can be
/// slotted in by implementing this interface; indexes record config_hash()
/// and refuse vectors from a different encoder.
class Encoder {
public:
  virtual ~Encoder() = default;
  virtual int dimension() const noexcept = 0;
  virtual std::uint64_t config_hash() const noexcept = 0;
  virtual LatentVector encode(const Molecule &mol) const = 0;
};

struct DescriptorEncoderConfig {
  int dimension = kDefaultLatentDimension;
  int radius = 3;             // circular environments of radius 0..radius
  int nonzeros_per_feature = 8;
  std::uint64_t seed = 0x6e63'6c61'7465'6e74ULL;
};

/// Reference encoder: count descriptors plus hashed circular substructures,
/// pushed through a sparse random sign projection and rescaled to unit RMS.
/// The projection is generated from a hash of (seed, feature, slot), so no
/// matrix is stored and every feature id has a fixed image.
class DescriptorEncoder final: public Encoder {
public:
  static constexpr std::string_view kVersion = "descriptor-encoder/v1";

  explicit DescriptorEncoder(DescriptorEncoderConfig config = {})
      : config_(config) {
    if (config_.dimension < 1 || config_.radius < 0
        || config_.nonzeros_per_feature < 1)
      throw Error(ErrorCode::kInvalidConfig, "bad encoder configuration");
  }

  const DescriptorEncoderConfig &config() const noexcept { return config_; }
  int dimension() const noexcept override { return config_.dimension; }

  std::uint64_t config_hash() const noexcept override {
    std::uint64_t h = fnv1a(kVersion);
    h = hash_combine(h, static_cast<std::uint64_t>(config_.dimension));
    h = hash_combine(h, static_cast<std::uint64_t>(config_.radius));
    h = hash_combine(h,
                     static_cast<std::uint64_t>(config_.nonzeros_per_feature));
    return hash_combine(h, config_.seed);
  }

  /// Sparse feature multiset: feature id -> count.
  std::map<std::uint64_t, double> features(const Molecule &mol) const {
    std::map<std::uint64_t, double> f;
    add_counts(mol, f);
    add_environments(mol, f);
    return f;
  }

  LatentVector encode(const Molecule &mol) const override {
    const int d = config_.dimension;
    const int k = config_.nonzeros_per_feature;
    LatentVector v(d, 0.0);
    for (auto [id, count]: features(mol)) {
      const double w = std::sqrt(count);
      for (int slot = 0; slot < k; ++slot) {
        std::uint64_t r = splitmix64(
            hash_combine(hash_combine(config_.seed, id),
                         static_cast<std::uint64_t>(slot)));
        const auto j = static_cast<std::size_t>((r >> 1) % d);
        v[j] += (r & 1U) ? w : -w;
      }
    }
    const double scale = rms(v);
    if (scale > 0)
      for (auto &x: v)
        x /= scale;
    return v;
  }

private:
  static std::uint64_t tag(std::string_view name) { return fnv1a(name); }

  static void add_counts(const Molecule &mol,
                         std::map<std::uint64_t, double> &f) {
    auto put = [&](std::string_view name, double value) {
      if (value > 0)
        f[tag(name)] += value;
    };
    put("count:heavy", mol.heavy_atom_count());
    put("count:hydrogen", mol.hydrogen_count());
    put("count:rings", std::max(0, mol.cycle_rank()));
    put("count:fragments", mol.component_count());
    int aromatic = 0, charged = 0, ring_atoms = 0;
    for (int i = 0; i < mol.atom_count(); ++i) {
      const auto &a = mol.atom(i);
      aromatic += a.aromatic;
      charged += a.charge != 0;
      ring_atoms += mol.atom_in_ring(i);
      put(std::string("count:element:") + std::string(symbol(a.element)), 1);
    }
    put("count:aromatic", aromatic);
    put("count:charged", charged);
    put("count:ring_atoms", ring_atoms);
    for (const auto &b: mol.bonds())
      put("count:bond:" + std::to_string(static_cast<int>(b.order)), 1);
  }

  void add_environments(const Molecule &mol,
                        std::map<std::uint64_t, double> &f) const {
    const int n = mol.atom_count();
    std::vector<std::uint64_t> id(n), next(n);
    for (int i = 0; i < n; ++i) {
      const auto &a = mol.atom(i);
      std::uint64_t h = 0x9e37'79b9'7f4a'7c15ULL;
      for (std::uint64_t part:
           { std::uint64_t(atomic_number(a.element)),
             std::uint64_t(mol.degree(i)), std::uint64_t(a.hydrogens),
             std::uint64_t(a.charge + 8), std::uint64_t(a.aromatic),
             std::uint64_t(mol.atom_in_ring(i)) })
        h = hash_combine(h, part);
      id[i] = h;
    }
    for (int r = 0; r <= config_.radius; ++r) {
      for (int i = 0; i < n; ++i)
        f[hash_combine(static_cast<std::uint64_t>(r) + 1, id[i])] += 1;
      if (r == config_.radius)
        break;
      for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, std::uint64_t>> env;
        for (auto nb: mol.neighbors(i))
          env.emplace_back(static_cast<int>(mol.bond(nb.bond).order),
                           id[nb.atom]);
        std::sort(env.begin(), env.end());
        std::uint64_t h = id[i];
        for (auto [order, nid]: env)
          h = hash_combine(hash_combine(h, static_cast<std::uint64_t>(order)),
                           nid);
        next[i] = h;
      }
      id.swap(next);
    }
  }

  DescriptorEncoderConfig config_;
};

}  // namespace gnc
