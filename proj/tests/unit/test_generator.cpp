//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "gnc/generator/generate.hpp"

#include "oracles.hpp"

using namespace gnc;

namespace {

DriftSpec one_d(double m = 0.0, double sigma = 1.0) {
  return DriftSpec { { { m } }, { 1.0 }, 0.15, sigma };
}

DriftSpec three_refs(double sigma) {
  return DriftSpec { { { 1.0, -2.0, 0.5, 4.0 },
                       { -3.0, 0.25, 2.0, 1.0 },
                       { 0.7, 0.1, -1.5, -2.0 } },
                     { 0.35, 0.35, 0.3 },
                     0.15,
                     sigma };
}

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kSyntax;
}

}  // namespace

TEST(Drift, Target) {
  auto single = DriftSpec { { { 1.0, 2.0 } }, { 1.0 } };
  EXPECT_EQ(drift_target(single), (LatentVector { 1.0, 2.0 }));
  auto spec = three_refs(1.0);
  auto m = drift_target(spec);
  for (std::size_t j = 0; j < 4; ++j)
    EXPECT_NEAR(m[j],
                0.35 * spec.references[0][j] + 0.35 * spec.references[1][j]
                    + 0.3 * spec.references[2][j],
                1e-15);
  auto sym = DriftSpec { { { 1.5, -2.0 }, { -1.5, 2.0 } }, { 0.5, 0.5 } };
  EXPECT_EQ(drift_target(sym), (LatentVector { 0.0, 0.0 }));
}

TEST(Drift, Errors) {
  EXPECT_EQ(code_of([] {
              drift_target(DriftSpec { { { 1.0 }, { 2.0 } }, { 0.5, 0.6 } });
            }),
            ErrorCode::kWeightSumViolation);
  EXPECT_EQ(code_of([] {
              drift_target(DriftSpec { { { 1.0 }, { 2.0, 1.0 } }, { 0.5, 0.5 } });
            }),
            ErrorCode::kDimensionMismatch);
  Rng rng(1);
  EXPECT_EQ(code_of([&] { euler_maruyama_step({ 1.0 }, { 0.0 }, 0.15, 1.0, 7.0, rng); }),
            ErrorCode::kStepTooLarge);
}

TEST(ExactStep, NoiseFreeDecay) {
  Rng rng(1);
  auto x = ou_exact_step({ 1.0 }, { 0.0 }, 0.15, 0.0, 10.0, rng);
  EXPECT_NEAR(x[0], std::exp(-1.5), 1e-15);
  EXPECT_NEAR(x[0], 0.223130, 1e-6);
  auto y = ou_exact_step({ 1.0 }, { 0.0 }, 0.15, 0.0, 1e-12, rng);
  EXPECT_NEAR(y[0], 1.0, 1e-12);
}

TEST(ExactStep, StationaryVariance) {
  Rng rng(42);
  const int n = 100'000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = ou_exact_step({ 1.0 }, { 0.0 }, 0.15, 1.0, 50.0, rng)[0];
    s += x;
    s2 += x * x;
  }
  const double var = s2 / n - (s / n) * (s / n);
  EXPECT_NEAR(var / (1 / 0.3), 1.0, 0.02);
}

TEST(ExactStep, ContractsTowardTarget) {
  std::mt19937_64 pick(9);
  std::uniform_real_distribution<double> u(-10, 10), dt(1e-6, 100);
  Rng rng(0);
  for (int rep = 0; rep < 1000; ++rep) {
    LatentVector x { u(pick), u(pick), u(pick) }, m { u(pick), u(pick), u(pick) };
    if (x == m)
      continue;
    auto y = ou_exact_step(x, m, 0.15, 0.0, dt(pick), rng);
    double before = 0, after = 0;
    for (int j = 0; j < 3; ++j) {
      before += (x[j] - m[j]) * (x[j] - m[j]);
      after += (y[j] - m[j]) * (y[j] - m[j]);
    }
    EXPECT_LT(after, before);
  }
}

TEST(EulerStep, NoiseFreeIncrement) {
  Rng rng(1);
  LatentVector x { 2.0, -1.0 }, m { 0.5, 0.5 };
  auto y = euler_maruyama_step(x, m, 0.15, 0.0, 0.1, rng);
  for (int j = 0; j < 2; ++j)
    EXPECT_NEAR(y[j] - x[j], 0.15 * 0.1 * (m[j] - x[j]), 1e-15);
}

TEST(EulerStep, LocalErrorIsSecondOrder) {
  Rng rng(1);
  std::vector<double> err;
  for (double dt: { 0.1, 0.05, 0.025 }) {
    const double e = euler_maruyama_step({ 1.0 }, { 0.0 }, 0.15, 0.0, dt, rng)[0];
    const double x = ou_exact_step({ 1.0 }, { 0.0 }, 0.15, 0.0, dt, rng)[0];
    err.push_back(std::abs(e - x));
  }
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.05);
  EXPECT_NEAR(err[1] / err[2], 4.0, 0.05);
}

TEST(Moments, Closed) {
  auto spec = one_d(2.0);
  auto at0 = analytic_moments({ 5.0 }, spec, 0.0);
  EXPECT_EQ(at0.mean[0], 5.0);
  EXPECT_EQ(at0.variance, 0.0);
  auto late = analytic_moments({ 5.0 }, spec, 1e4);
  EXPECT_NEAR(late.mean[0], 2.0, 1e-12);
  EXPECT_NEAR(late.variance, 1 / 0.3, 1e-12);
  auto t5 = analytic_moments({ 0.0 }, one_d(), 5.0);
  EXPECT_NEAR(t5.variance, 2.589566, 1e-6);
  EXPECT_NEAR(t5.variance, (1 - std::exp(-1.5)) / 0.3, 1e-14);
}

TEST(Moments, MonteCarloAgrees) {
  auto spec = one_d();
  Rng rng(17);
  const int n = 100'000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = ou_exact_step({ 0.0 }, spec, 5.0, rng)[0];
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), 2.589566, 0.02 * 2.589566);
}

TEST(Generate, NoiseFreeMatchesClosedForm) {
  auto spec = three_refs(0.0);
  GenerationSchedule sched;
  sched.seed = { 0.3, 0.3, -0.9, 8.0 };
  sched.times = { 1, 5, 25 };
  auto out = generate(spec, sched);
  ASSERT_EQ(out.size(), 3u);
  for (const auto &s: out) {
    auto want = analytic_moments(sched.seed, spec, s.t).mean;
    for (std::size_t j = 0; j < want.size(); ++j)
      EXPECT_LE(std::abs(s.x[j] - want[j]), 1e-12 * std::abs(want[j]));
  }
}

TEST(Generate, DeterministicAndThreadIndependent) {
  auto spec = three_refs(1.0);
  GenerationSchedule sched;
  sched.seed = { 0, 0, 0, 0 };
  sched.trajectories = 16;
  sched.rng_seed = 99;
  auto a = generate(spec, sched, 1), b = generate(spec, sched, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i].x, b[i].x);
  sched.rng_seed = 100;
  EXPECT_NE(generate(spec, sched)[0].x, a[0].x);
}

TEST(Generate, PermutedReferencesGiveIdenticalStreams) {
  auto spec = three_refs(1.0);
  auto perm = spec;
  std::swap(perm.references[0], perm.references[2]);
  std::swap(perm.weights[0], perm.weights[2]);
  GenerationSchedule sched;
  sched.seed = { 1, 1, 1, 1 };
  sched.trajectories = 4;
  auto a = generate(spec, sched), b = generate(perm, sched);
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i].x, b[i].x);
  EXPECT_EQ(spec.hash(), perm.hash());
}

TEST(Generate, LargeTimeMeanNearTarget) {
  auto spec = three_refs(1.0);
  GenerationSchedule sched;
  sched.seed = { 10, 10, 10, 10 };
  sched.times = { 200 };
  sched.trajectories = 10'000;
  auto out = generate(spec, sched, 4);
  auto m = drift_target(spec);
  const double se = std::sqrt(1 / 0.3 / 10'000);
  for (std::size_t j = 0; j < m.size(); ++j) {
    double s = 0;
    for (const auto &x: out)
      s += x.x[j];
    EXPECT_LT(std::abs(s / 10'000 - m[j]), 3 * se);
  }
}

TEST(Generate, ExactSamplerPassesKs) {
  auto spec = one_d(1.0);
  GenerationSchedule sched;
  sched.seed = { -3.0 };
  sched.times = { 4.0 };
  sched.trajectories = 10'000;
  sched.rng_seed = 5;
  auto out = generate(spec, sched);
  auto mom = analytic_moments(sched.seed, spec, 4.0);
  std::vector<double> z;
  for (const auto &s: out)
    z.push_back(s.x[0]);
  std::sort(z.begin(), z.end());
  double d = 0;
  const double n = static_cast<double>(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = oracle::normal_cdf((z[i] - mom.mean[0]) / std::sqrt(mom.variance));
    d = std::max({ d, std::abs(f - i / n), std::abs(f - (i + 1) / n) });
  }
  // One-sample KS critical value at 1%: 1.628 / sqrt(n).
  EXPECT_LT(d, 1.628 / std::sqrt(n));
}

TEST(Generate, EulerLandsOnSampleTimes) {
  auto spec = one_d(0.0, 0.0);
  GenerationSchedule sched;
  sched.seed = { 1.0 };
  sched.times = { 0.25, 1.0 };
  sched.integrator = Integrator::kEuler;
  sched.euler_dt = 0.1;
  auto out = generate(spec, sched);
  EXPECT_NEAR(out[1].x[0], std::exp(-0.15), 2e-3);
  EXPECT_EQ(out[0].t, 0.25);
}

TEST(Generate, ScheduleErrors) {
  auto spec = one_d();
  GenerationSchedule sched;
  sched.seed = { 0.0 };
  sched.times = { 2, 1 };
  EXPECT_EQ(code_of([&] { generate(spec, sched); }), ErrorCode::kInvalidSchedule);
  sched.times = { 1, 2 };
  sched.integrator = Integrator::kEuler;
  sched.euler_dt = 0;
  EXPECT_EQ(code_of([&] { generate(spec, sched); }), ErrorCode::kInvalidSchedule);
}

TEST(LatentBatchFile, RoundTrip) {
  auto spec = three_refs(1.0);
  GenerationSchedule sched;
  sched.seed = { 0, 0, 0, 0 };
  sched.trajectories = 3;
  LatentBatch b;
  b.dimension = 4;
  b.rng_seed = 7;
  b.spec_hash = 123;
  b.samples = generate(spec, sched);
  const auto path = (std::filesystem::temp_directory_path() / "gnc_batch.bin").string();
  b.save(path);
  auto back = LatentBatch::load(path);
  EXPECT_EQ(back.spec_hash, 123u);
  EXPECT_EQ(back.rng_seed, 7u);
  ASSERT_EQ(back.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    EXPECT_EQ(back.samples[i].x, b.samples[i].x);
    EXPECT_EQ(back.samples[i].t, b.samples[i].t);
    EXPECT_EQ(back.samples[i].trajectory, b.samples[i].trajectory);
  }
  std::filesystem::remove(path);
}
