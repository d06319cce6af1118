// Microbenchmarks for the pipeline's hot paths: association, degree sweeps,
// and the forward fisheye projection that dominates simulation time.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "trajan/anomaly.hpp"
#include "trajan/geometry.hpp"
#include "trajan/tracking.hpp"

namespace {

trajan::geometry::DistortionModel make_lens() {
  return {{960.0, 960.0}, {1.0, 3e-4, 2e-8}, 1360.0};
}

void BM_Assign(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd affinity(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) affinity(r, c) = dist(rng);
  }
  for (auto _ : state) {
    auto result = trajan::tracking::assign(affinity, 0.0);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_Assign)->Arg(4)->Arg(16)->Arg(64);

void BM_Jaccard(benchmark::State& state) {
  trajan::BBox a{100, 100, 150, 150};
  trajan::BBox b{120, 110, 170, 160};
  for (auto _ : state) {
    benchmark::DoNotOptimize(trajan::tracking::jaccard(a, b));
  }
}
BENCHMARK(BM_Jaccard);

void BM_DegreeSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(11);
  std::normal_distribution<double> noise(0.0, 0.002);
  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = 0.1 + 0.8 * i / (n - 1);
    v[i] = 0.4 + 0.2 * u[i] - 0.15 * u[i] * u[i] + noise(rng);
  }
  trajan::anomaly::SweepConfig cfg;
  for (auto _ : state) {
    auto result = trajan::anomaly::degree_sweep(u, v, cfg);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_DegreeSweep)->Arg(200)->Arg(1000);

void BM_ToFisheye(benchmark::State& state) {
  auto lens = make_lens();
  trajan::Point2 p{1400.0, 700.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(trajan::geometry::to_fisheye(lens, p));
  }
}
BENCHMARK(BM_ToFisheye);

void BM_ToBirdeye(benchmark::State& state) {
  auto lens = make_lens();
  trajan::Point2 p{1400.0, 700.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(trajan::geometry::to_birdeye(lens, p));
  }
}
BENCHMARK(BM_ToBirdeye);

void BM_TrackerStep(benchmark::State& state) {
  const int vehicles = static_cast<int>(state.range(0));
  auto lens = make_lens();
  trajan::tracking::TrackerConfig cfg;
  trajan::CameraFrame camera{1920, 1920, 10};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> pos(400.0, 1500.0);
  std::vector<trajan::Point2> centers(vehicles);
  for (auto& c : centers) c = {pos(rng), pos(rng)};

  for (auto _ : state) {
    state.PauseTiming();
    trajan::tracking::Tracker tracker(cfg, lens, camera);
    state.ResumeTiming();
    for (long frame = 0; frame < 20; ++frame) {
      trajan::ingest::FrameBatch batch;
      batch.frame_index = frame;
      batch.timestamp = frame / 10.0;
      for (int i = 0; i < vehicles; ++i) {
        double x = centers[i].x + 3.0 * frame;
        double y = centers[i].y + 1.5 * frame;
        batch.detections.push_back({{x - 20, y - 20, x + 20, y + 20}, 0.9, "car"});
      }
      benchmark::DoNotOptimize(tracker.step(batch));
    }
  }
}
BENCHMARK(BM_TrackerStep)->Arg(5)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
