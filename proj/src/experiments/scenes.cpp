// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "ddfr/experiments.hpp"

namespace ddfr {

namespace {

constexpr double kSpeed = 1500.0;

struct ToneTable {
  double doa;
  double freqs[5];
};

// DOA and tone frequencies (Hz) of the multitone scene.
constexpr ToneTable kMultitone[] = {
    {-20.0, {15, 16, 20, 30, 31}},
    {0.0, {20, 21, 22, 30, 31}},
    {30.0, {40, 41, 42, 43, 44}},
    {50.0, {10, 20, 30, 40, 50}},
};

}  // namespace

SceneDescription multitone_scene(double snr_db) {
  SceneDescription scene{ArrayGeometry::ula(8, kSpeed / (2.0 * 50.0), kSpeed), SamplingGrid(0.0, 120.0, 100), {}, 1.0};
  for (const auto& row : kMultitone) {
    Multitone mt;
    for (double f : row.freqs) mt.tones.push_back({f, Complex{1.0, 0.0}});
    scene.sources.push_back({row.doa, mt, snr_db});
  }
  return scene;
}

SceneDescription wideband_scene(const std::vector<double>& doas_deg, double snr_db, int num_snapshots) {
  SceneDescription scene{ArrayGeometry::ula(8, kSpeed / (2.0 * 450.0), kSpeed),
                         SamplingGrid(0.0, 2000.0, num_snapshots), {}, 1.0};
  for (double doa : doas_deg) scene.sources.push_back({doa, BandlimitedGaussian{150.0, 450.0, 200, 1.0}, snr_db});
  return scene;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ddfr
