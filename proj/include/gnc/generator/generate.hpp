//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/core/hash.hpp"
#include "gnc/core/parallel.hpp"
#include "gnc/generator/ou.hpp"

namespace gnc {

enum class Integrator { kExact, kEuler };

struct GenerationSchedule {
  LatentVector seed;                  // C
  std::vector<double> times { 1, 2, 4, 8, 16, 32 };
  int trajectories = 1;
  std::uint64_t rng_seed = 0;
  Integrator integrator = Integrator::kExact;
  double euler_dt = 0.1;              // used by kEuler only

  void validate() const {
    if (times.empty())
      throw Error(ErrorCode::kInvalidSchedule, "no sample times");
    for (std::size_t i = 0; i < times.size(); ++i)
      if (!(times[i] > 0) || (i > 0 && !(times[i] > times[i - 1])))
        throw Error(ErrorCode::kInvalidSchedule,
                    "sample times must be positive and increasing");
    if (trajectories < 1)
      throw Error(ErrorCode::kInvalidSchedule, "need at least one trajectory");
    if (integrator == Integrator::kEuler && !(euler_dt > 0))
      throw Error(ErrorCode::kInvalidSchedule, "Euler step must be positive");
    if (!all_finite(seed))
      throw Error(ErrorCode::kInvalidSchedule, "seed vector is not finite");
  }

  std::uint64_t hash() const {
    std::uint64_t h = fnv1a("schedule/v1");
    h = fnv1a(seed, h);
    h = fnv1a(times, h);
    h = hash_combine(h, static_cast<std::uint64_t>(trajectories));
    h = hash_combine(h, rng_seed);
    h = hash_combine(h, static_cast<std::uint64_t>(integrator));
    return fnv1a(std::span<const double>(&euler_dt, 1), h);
  }
};

struct LatentSample {
  std::uint32_t trajectory = 0;
  std::uint32_t time_index = 0;
  double t = 0;
  LatentVector x;
};

/// One trajectory, sampled at every schedule time.
inline std::vector<LatentSample>
generate_trajectory(const DriftSpec &spec, const GenerationSchedule &schedule,
                    std::uint32_t trajectory) {
  const auto m = drift_target(spec);
  require_same_dimension(schedule.seed.size(), m.size());
  Rng rng = split_rng(schedule.rng_seed, trajectory);
  std::vector<LatentSample> out;
  LatentVector x = schedule.seed;
  double now = 0;
  for (std::size_t i = 0; i < schedule.times.size(); ++i) {
    const double target = schedule.times[i];
    if (schedule.integrator == Integrator::kExact) {
      x = ou_exact_step(x, m, spec.alpha, spec.sigma, target - now, rng);
    } else {
      // Whole steps of euler_dt, then one short step to land on target.
      const double span = target - now;
      const auto whole = static_cast<long>(std::floor(span / schedule.euler_dt
                                                      + 1e-9));
      for (long s = 0; s < whole; ++s)
        x = euler_maruyama_step(x, m, spec.alpha, spec.sigma,
                                schedule.euler_dt, rng);
      const double rest = span - static_cast<double>(whole) * schedule.euler_dt;
      if (rest > 1e-12 * std::max(1.0, span))
        x = euler_maruyama_step(x, m, spec.alpha, spec.sigma, rest, rng);
    }
    now = target;
    out.push_back({ trajectory, static_cast<std::uint32_t>(i), target, x });
  }
  return out;
}

/// All trajectories, ordered by (trajectory, time). Each trajectory draws
/// from its own stream, so the result is independent of `threads`.
inline std::vector<LatentSample> generate(const DriftSpec &spec,
                                          const GenerationSchedule &schedule,
                                          unsigned threads = 1) {
  spec.validate();
  schedule.validate();
  std::vector<std::vector<LatentSample>> per(schedule.trajectories);
  parallel_for(per.size(), threads, [&](std::size_t k) {
    per[k] = generate_trajectory(spec, schedule,
                                 static_cast<std::uint32_t>(k));
  });
  std::vector<LatentSample> out;
  out.reserve(per.size() * schedule.times.size());
  for (auto &p: per)
    for (auto &s: p)
      out.push_back(std::move(s));
  return out;
}

/// Binary batch of generated latents with a header naming the run.
struct LatentBatch {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint32_t dimension = 0;
  std::uint64_t rng_seed = 0;
  std::uint64_t spec_hash = 0;
  std::vector<LatentSample> samples;

  void save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw Error(ErrorCode::kIo, "cannot write " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, kFormatVersion);
    put(out, dimension);
    put(out, static_cast<std::uint64_t>(samples.size()));
    put(out, rng_seed);
    put(out, spec_hash);
    for (const auto &s: samples) {
      require_same_dimension(s.x.size(), dimension);
      put(out, s.trajectory);
      put(out, s.time_index);
      put(out, s.t);
      out.write(reinterpret_cast<const char *>(s.x.data()),
                static_cast<std::streamsize>(dimension * sizeof(double)));
    }
    if (!out)
      throw Error(ErrorCode::kIo, "write failed for " + path);
  }

  static LatentBatch load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw Error(ErrorCode::kIo, "cannot read " + path);
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
      throw Error(ErrorCode::kIo, path + " is not a latent batch");
    LatentBatch b;
    if (get<std::uint32_t>(in) != kFormatVersion)
      throw Error(ErrorCode::kIo, "unsupported latent batch version");
    b.dimension = get<std::uint32_t>(in);
    auto count = get<std::uint64_t>(in);
    b.rng_seed = get<std::uint64_t>(in);
    b.spec_hash = get<std::uint64_t>(in);
    b.samples.resize(count);
    for (auto &s: b.samples) {
      s.trajectory = get<std::uint32_t>(in);
      s.time_index = get<std::uint32_t>(in);
      s.t = get<double>(in);
      s.x.resize(b.dimension);
      in.read(reinterpret_cast<char *>(s.x.data()),
              static_cast<std::streamsize>(b.dimension * sizeof(double)));
      if (!in)
        throw Error(ErrorCode::kIo, "truncated latent batch " + path);
    }
    return b;
  }

private:
  static constexpr char kMagic[8] = { 'G', 'N', 'C', 'L', 'A', 'T', 0, 1 };

  template <class T> static void put(std::ofstream &out, T v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof v);
  }
  template <class T> static T get(std::ifstream &in) {
    T v {};
    in.read(reinterpret_cast<char *>(&v), sizeof v);
    if (!in)
      throw Error(ErrorCode::kIo, "truncated latent batch");
    return v;
  }
};

}  // namespace gnc
