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

#include "vflow/confusion.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "vflow/error.h"

namespace vflow {

std::uint64_t ConfusionMatrix::Total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::vector<double> ConfusionMatrix::RowNormalized() const {
  const std::size_t n = dimension();
  std::vector<double> out(counts_.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    std::uint64_t row_sum = 0;
    for (std::size_t c = 0; c < n; ++c) row_sum += at(r, c);
    if (row_sum == 0) continue;
    for (std::size_t c = 0; c < n; ++c) {
      out[r * n + c] =
          static_cast<double>(at(r, c)) / static_cast<double>(row_sum);
    }
  }
  return out;
}

void AccumulateConfusion(ConfusionMatrix& matrix,
                         std::span<const Detection> detections,
                         std::span<const GroundTruth> ground_truths,
                         double iou_threshold, double confidence_threshold) {
  const std::size_t k = matrix.num_classes();
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].class_id >= k) {
      throw Error(ErrorCode::kInvalidInput,
                  "detection class " + std::to_string(detections[i].class_id) +
                      " outside class map");
    }
    if (detections[i].confidence >= confidence_threshold) kept.push_back(i);
  }

  struct Pair {
    double iou;
    double confidence;
    std::size_t det;
    std::size_t gt;
  };
  std::vector<Pair> pairs;
  for (std::size_t di : kept) {
    for (std::size_t gj = 0; gj < ground_truths.size(); ++gj) {
      const double overlap = Iou(detections[di].box, ground_truths[gj].box);
      if (overlap >= iou_threshold) {
        pairs.push_back({overlap, detections[di].confidence, di, gj});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tuple(-a.iou, -a.confidence, a.det, a.gt) <
           std::tuple(-b.iou, -b.confidence, b.det, b.gt);
  });

  std::vector<bool> det_used(detections.size(), false);
  std::vector<bool> gt_used(ground_truths.size(), false);
  for (const Pair& p : pairs) {
    if (det_used[p.det] || gt_used[p.gt]) continue;
    det_used[p.det] = true;
    gt_used[p.gt] = true;
    matrix.Increment(ground_truths[p.gt].class_id,
                     detections[p.det].class_id);
  }
  for (std::size_t gj = 0; gj < ground_truths.size(); ++gj) {
    if (!gt_used[gj]) {
      matrix.Increment(ground_truths[gj].class_id, matrix.background());
    }
  }
  for (std::size_t di : kept) {
    if (!det_used[di]) {
      matrix.Increment(matrix.background(), detections[di].class_id);
    }
  }
}

ConfusionMatrix BuildConfusionMatrix(std::span<const Detection> detections,
                                     std::span<const ImageRecord> images,
                                     std::size_t num_classes,
                                     double iou_threshold,
                                     double confidence_threshold) {
  std::map<std::string, std::vector<Detection>> by_image;
  for (const auto& image : images) by_image[image.id];
  for (const auto& det : detections) {
    auto it = by_image.find(det.image_id);
    if (it == by_image.end()) {
      throw Error(ErrorCode::kInvalidInput,
                  "detection for unknown image '" + det.image_id + "'");
    }
    it->second.push_back(det);
  }
  ConfusionMatrix matrix(num_classes);
  for (const auto& image : images) {
    AccumulateConfusion(matrix, by_image[image.id], image.annotations,
                        iou_threshold, confidence_threshold);
  }
  return matrix;
}

}  // namespace vflow
