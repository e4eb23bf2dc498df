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

#include <algorithm>
#include <numeric>

#include "vflow/error.h"
#include "vflow/eval.h"

namespace vflow {

std::size_t MatchResult::true_positives(ClassId cls,
                                        std::span<const Detection> dets) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].class_id == cls && labels[i] == DetectionLabel::kTruePositive) {
      ++n;
    }
  }
  return n;
}

std::size_t MatchResult::false_positives(
    ClassId cls, std::span<const Detection> dets) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].class_id == cls &&
        labels[i] == DetectionLabel::kFalsePositive) {
      ++n;
    }
  }
  return n;
}

std::size_t MatchResult::false_negatives(
    ClassId cls, std::span<const GroundTruth> gts) const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < gts.size(); ++j) {
    if (gts[j].class_id == cls && !gt_matched_by[j]) ++n;
  }
  return n;
}

MatchResult MatchDetections(std::span<const Detection> detections,
                            std::span<const GroundTruth> ground_truths,
                            double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "IoU threshold must lie in (0, 1], got " +
                    std::to_string(iou_threshold));
  }
  for (const auto& d : detections) {
    if (d.image_id != detections.front().image_id) {
      throw Error(ErrorCode::kInvalidInput,
                  "detections from images '" + detections.front().image_id +
                      "' and '" + d.image_id + "' passed to one match");
    }
  }

  MatchResult result;
  result.iou_threshold = iou_threshold;
  result.labels.assign(detections.size(), DetectionLabel::kFalsePositive);
  result.matched_gt.assign(detections.size(), std::nullopt);
  result.gt_matched_by.assign(ground_truths.size(), std::nullopt);

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return detections[a].confidence >
                            detections[b].confidence;
                   });

  for (std::size_t di : order) {
    const Detection& det = detections[di];
    std::optional<std::size_t> best;
    double best_iou = 0.0;
    for (std::size_t gj = 0; gj < ground_truths.size(); ++gj) {
      const GroundTruth& gt = ground_truths[gj];
      if (gt.class_id != det.class_id || result.gt_matched_by[gj]) continue;
      const double overlap = Iou(det.box, gt.box);
      if (overlap < iou_threshold) continue;
      if (!best || overlap > best_iou) {
        best = gj;
        best_iou = overlap;
      }
    }
    if (best) {
      result.labels[di] = DetectionLabel::kTruePositive;
      result.matched_gt[di] = best;
      result.gt_matched_by[*best] = di;
    }
  }
  return result;
}

}  // namespace vflow
