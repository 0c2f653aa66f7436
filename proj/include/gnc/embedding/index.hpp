//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/embedding/encoder.hpp"
#include "gnc/embedding/latent.hpp"
#include "gnc/molgraph/canon.hpp"
#include "gnc/molgraph/smiles.hpp"

namespace gnc {

struct IndexEntry {
  std::string smiles;  // canonical
  std::string metadata;
};

struct DecodeHit {
  std::string smiles;
  double score;
  std::size_t entry;
};

struct BuildIssue {
  std::size_t input;  // position in the input list
  std::string smiles;
  std::string message;
};

/// Library of canonical molecules and their latent vectors; decoding is an
/// exact top-k search by generalized Tanimoto. Vectors live in one
/// contiguous row-major block with cached squared norms, so a query costs a
/// single pass of dot products. Immutable once built except through add(),
/// which callers must not race with queries.
class LibraryIndex {
public:
  static constexpr std::uint32_t kFormatVersion = 1;

  explicit LibraryIndex(std::shared_ptr<const Encoder> encoder)
      : encoder_(std::move(encoder)), dim_(encoder_->dimension()),
        encoder_hash_(encoder_->config_hash()) { }

  /// Adds each parseable, not yet present molecule. Parse failures are
  /// returned, never thrown.
  std::vector<BuildIssue> add(const std::vector<std::string> &smiles,
                              const std::vector<std::string> &metadata = {}) {
    std::vector<BuildIssue> issues;
    for (std::size_t i = 0; i < smiles.size(); ++i) {
      try {
        Molecule m = parse_smiles(smiles[i]);
        add(m, i < metadata.size() ? metadata[i] : std::string());
      } catch (const Error &e) {
        issues.push_back({ i, smiles[i], e.what() });
      }
    }
    return issues;
  }

  /// Returns false when the canonical form is already indexed.
  bool add(const Molecule &mol, const std::string &metadata = {}) {
    std::string canon = write_canonical_smiles(mol);
    if (lookup_.count(canon))
      return false;
    LatentVector v = encoder_->encode(mol);
    push(std::move(canon), metadata, v);
    return true;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  int dimension() const noexcept { return dim_; }
  std::uint64_t encoder_hash() const noexcept { return encoder_hash_; }
  const Encoder &encoder() const noexcept { return *encoder_; }
  std::shared_ptr<const Encoder> encoder_ptr() const noexcept {
    return encoder_;
  }
  const IndexEntry &entry(std::size_t i) const { return entries_[i]; }

  std::span<const double> vector(std::size_t i) const {
    return { data_.data() + i * dim_, static_cast<std::size_t>(dim_) };
  }

  bool contains(const std::string &canonical) const {
    return lookup_.count(canonical) != 0;
  }

  std::optional<std::size_t> find(const std::string &canonical) const {
    auto it = lookup_.find(canonical);
    if (it == lookup_.end())
      return std::nullopt;
    return it->second;
  }

  /// Top-k entries by Tanimoto to `query`, descending; ties broken by
  /// canonical SMILES ascending. k larger than the index returns all.
  std::vector<DecodeHit> decode(std::span<const double> query,
                                std::size_t k) const {
    if (empty())
      throw Error(ErrorCode::kEmptyIndex, "decode on an empty index");
    require_same_dimension(query.size(), static_cast<std::size_t>(dim_));
    if (k == 0)
      throw Error(ErrorCode::kInvalidConfig, "decode needs k >= 1");
    const double qq = dot(query, query);
    std::vector<DecodeHit> hits;
    hits.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      const double ab = dot(query, vector(i));
      const double denom = qq + norms_[i] - ab;
      if (denom == 0.0)
        throw Error(ErrorCode::kBothZero, "Tanimoto of two zero vectors");
      hits.push_back({ entries_[i].smiles, ab / denom, i });
    }
    auto better = [](const DecodeHit &x, const DecodeHit &y) {
      if (x.score != y.score)
        return x.score > y.score;
      return x.smiles < y.smiles;
    };
    k = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(k),
                      hits.end(), better);
    hits.resize(k);
    return hits;
  }

  /// Highest Tanimoto between `query` and any entry.
  double max_similarity(std::span<const double> query) const {
    return decode(query, 1).front().score;
  }

  void save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw Error(ErrorCode::kIo, "cannot write " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, kFormatVersion);
    put(out, static_cast<std::uint32_t>(dim_));
    put(out, encoder_hash_);
    put(out, static_cast<std::uint64_t>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      put_string(out, entries_[i].smiles);
      put_string(out, entries_[i].metadata);
      out.write(reinterpret_cast<const char *>(vector(i).data()),
                static_cast<std::streamsize>(dim_ * sizeof(double)));
    }
    if (!out)
      throw Error(ErrorCode::kIo, "write failed for " + path);
  }

  /// Loads an index written by save(). The file's encoder hash and
  /// dimension must match `encoder`.
  static LibraryIndex load(const std::string &path,
                           std::shared_ptr<const Encoder> encoder) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw Error(ErrorCode::kIo, "cannot read " + path);
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
      throw Error(ErrorCode::kIndexVersionMismatch, path + " is not an index");
    LibraryIndex index(std::move(encoder));
    auto version = get<std::uint32_t>(in);
    auto dim = get<std::uint32_t>(in);
    auto hash = get<std::uint64_t>(in);
    auto count = get<std::uint64_t>(in);
    if (version != kFormatVersion)
      throw Error(ErrorCode::kIndexVersionMismatch,
                  "index format version " + std::to_string(version));
    if (static_cast<int>(dim) != index.dim_ || hash != index.encoder_hash_)
      throw Error(ErrorCode::kIndexVersionMismatch,
                  "index built by encoder " + hex64(hash) + " (d="
                      + std::to_string(dim) + "), expected "
                      + hex64(index.encoder_hash_));
    LatentVector v(dim);
    for (std::uint64_t i = 0; i < count; ++i) {
      std::string smi = get_string(in);
      std::string meta = get_string(in);
      in.read(reinterpret_cast<char *>(v.data()),
              static_cast<std::streamsize>(dim * sizeof(double)));
      if (!in)
        throw Error(ErrorCode::kIo, "truncated index " + path);
      index.push(std::move(smi), meta, v);
    }
    return index;
  }

private:
  static constexpr char kMagic[8] = { 'G', 'N', 'C', 'I', 'D', 'X', 0, 1 };

  void push(std::string canon, const std::string &metadata,
            const LatentVector &v) {
    lookup_.emplace(canon, entries_.size());
    entries_.push_back({ std::move(canon), metadata });
    data_.insert(data_.end(), v.begin(), v.end());
    norms_.push_back(dot(v, v));
  }

  template <class T> static void put(std::ofstream &out, T v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof v);
  }
  static void put_string(std::ofstream &out, const std::string &s) {
    put(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  template <class T> static T get(std::ifstream &in) {
    T v {};
    in.read(reinterpret_cast<char *>(&v), sizeof v);
    if (!in)
      throw Error(ErrorCode::kIo, "truncated index header");
    return v;
  }
  static std::string get_string(std::ifstream &in) {
    auto n = get<std::uint32_t>(in);
    std::string s(n, '\0');
    in.read(s.data(), n);
    return s;
  }

  std::shared_ptr<const Encoder> encoder_;
  int dim_;
  std::uint64_t encoder_hash_;
  std::vector<IndexEntry> entries_;
  std::vector<double> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// Library decoder: the top-k indexed molecules nearest to `v`.
inline std::vector<std::pair<Molecule, double>>
decode(const LibraryIndex &index, std::span<const double> v, std::size_t k) {
  std::vector<std::pair<Molecule, double>> out;
  for (const auto &hit: index.decode(v, k))
    out.emplace_back(parse_smiles(hit.smiles), hit.score);
  return out;
}

/// True iff decoding the encoding of `mol` returns `mol` itself.
inline bool reconstruction_check(const LibraryIndex &index,
                                 const Molecule &mol) {
  auto v = index.encoder().encode(mol);
  return index.decode(v, 1).front().smiles == write_canonical_smiles(mol);
}

}  // namespace gnc
