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

#ifndef VFLOW_SIMULATOR_H_
#define VFLOW_SIMULATOR_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vflow/wire.h"

namespace vflow {

struct SimulatorConfig {
  std::vector<std::string> cameras;
  // Mean vehicles per minute for each class; length sets the class count.
  std::vector<double> rates_per_minute;
  // Optional per-camera replacement for `rates_per_minute`.
  std::map<std::string, std::vector<double>> camera_rates;
  TimestampMs start_ms = 1'700'000'000'000;
  TimestampMs duration_ms = 600'000;
  TimestampMs frame_interval_ms = 1'000;
  std::uint64_t seed = 0;
  // Emitted confidences are uniform in [min_confidence, 1].
  double min_confidence = 0.5;
};

struct SimulationTotals {
  std::uint64_t events = 0;
  std::uint64_t vehicles = 0;
  std::vector<std::uint64_t> per_class;
  std::map<std::string, std::vector<std::uint64_t>> per_camera;
};

// Emits one event per camera per frame, frames in time order and cameras in
// config order. Each class's vehicle count in a frame is Poisson with mean
// rate * interval; boxes are random valid normalized boxes. The stream is a
// pure function of the config. Throws Error(kInvalidInput) for an invalid
// config.
SimulationTotals SimulateCameras(
    const SimulatorConfig& config,
    const std::function<void(const DetectionEvent&)>& emit);

}  // namespace vflow

#endif  // VFLOW_SIMULATOR_H_
