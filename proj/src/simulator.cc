// Copyright 2026 The vflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vflow/simulator.h"

#include <cmath>
#include <random>
#include <set>

#include "vflow/error.h"

namespace vflow {
namespace {

void Validate(const SimulatorConfig& config) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidInput, "simulator: " + what);
  };
  if (config.cameras.empty()) fail("no cameras");
  if (std::set<std::string>(config.cameras.begin(), config.cameras.end())
          .size() != config.cameras.size()) {
    fail("duplicate camera id");
  }
  if (config.rates_per_minute.empty()) fail("no class rates");
  auto check_rates = [&](const std::vector<double>& rates) {
    if (rates.size() != config.rates_per_minute.size()) {
      fail("rate vectors differ in length");
    }
    for (double r : rates) {
      if (!(r >= 0.0) || !std::isfinite(r)) fail("rates must be >= 0");
    }
  };
  check_rates(config.rates_per_minute);
  for (const auto& [camera, rates] : config.camera_rates) check_rates(rates);
  if (config.frame_interval_ms <= 0) fail("frame interval must be positive");
  if (config.duration_ms < 0) fail("duration must be >= 0");
  if (config.start_ms <= 0) fail("start timestamp must be positive");
  if (!(config.min_confidence >= 0.0 && config.min_confidence <= 1.0)) {
    fail("min confidence outside [0, 1]");
  }
}

}  // namespace

SimulationTotals SimulateCameras(
    const SimulatorConfig& config,
    const std::function<void(const DetectionEvent&)>& emit) {
  Validate(config);
  const std::size_t k = config.rates_per_minute.size();

  // Per-frame Poisson means, resolved once per camera.
  std::vector<std::vector<double>> means;
  for (const auto& camera : config.cameras) {
    auto it = config.camera_rates.find(camera);
    const auto& rates =
        it == config.camera_rates.end() ? config.rates_per_minute : it->second;
    std::vector<double> m(k);
    for (std::size_t c = 0; c < k; ++c) {
      m[c] = rates[c] * static_cast<double>(config.frame_interval_ms) / 60'000.0;
    }
    means.push_back(std::move(m));
  }

  SimulationTotals totals;
  totals.per_class.assign(k, 0);
  for (const auto& camera : config.cameras) {
    totals.per_camera[camera].assign(k, 0);
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> size(0.02, 0.3);
  std::uniform_real_distribution<double> confidence(config.min_confidence, 1.0);

  DetectionEvent event;
  for (TimestampMs offset = 0; offset < config.duration_ms;
       offset += config.frame_interval_ms) {
    for (std::size_t cam = 0; cam < config.cameras.size(); ++cam) {
      event.camera_id = config.cameras[cam];
      event.timestamp_ms = config.start_ms + offset;
      event.detections.clear();
      auto& camera_totals = totals.per_camera[event.camera_id];
      for (std::size_t c = 0; c < k; ++c) {
        if (means[cam][c] <= 0.0) continue;
        std::poisson_distribution<std::uint64_t> arrivals(means[cam][c]);
        const std::uint64_t n = arrivals(rng);
        for (std::uint64_t i = 0; i < n; ++i) {
          EventDetection d;
          d.class_id = static_cast<ClassId>(c);
          d.confidence = confidence(rng);
          d.box.w = size(rng);
          d.box.h = size(rng);
          d.box.cx = d.box.w / 2.0 + unit(rng) * (1.0 - d.box.w);
          d.box.cy = d.box.h / 2.0 + unit(rng) * (1.0 - d.box.h);
          event.detections.push_back(d);
        }
        totals.per_class[c] += n;
        camera_totals[c] += n;
        totals.vehicles += n;
      }
      ++totals.events;
      emit(event);
    }
  }
  return totals;
}

}  // namespace vflow
