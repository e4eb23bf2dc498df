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

#ifndef VFLOW_CONFUSION_H_
#define VFLOW_CONFUSION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vflow/annotation.h"
#include "vflow/eval.h"

namespace vflow {

// (k + 1) x (k + 1) counts. Rows are the true class, columns the predicted
// class; index k is the background pseudo-class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes)
      : num_classes_(num_classes),
        counts_((num_classes + 1) * (num_classes + 1), 0) {}

  std::size_t num_classes() const { return num_classes_; }
  std::size_t dimension() const { return num_classes_ + 1; }
  std::size_t background() const { return num_classes_; }

  std::uint64_t at(std::size_t truth, std::size_t predicted) const {
    return counts_.at(truth * dimension() + predicted);
  }
  void Increment(std::size_t truth, std::size_t predicted) {
    ++counts_.at(truth * dimension() + predicted);
  }

  std::uint64_t Total() const;
  // Each row divided by its sum (rows with no mass stay zero).
  std::vector<double> RowNormalized() const;

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;

 private:
  std::size_t num_classes_;
  std::vector<std::uint64_t> counts_;
};

// Adds one image to `matrix`. Detections below `confidence_threshold` are
// dropped; the rest are paired with ground truths class-agnostically,
// highest IoU first (ties: higher confidence, then lower detection index,
// then lower ground-truth index), requiring IoU >= `iou_threshold`.
void AccumulateConfusion(ConfusionMatrix& matrix,
                         std::span<const Detection> detections,
                         std::span<const GroundTruth> ground_truths,
                         double iou_threshold, double confidence_threshold);

// Whole-dataset form. Detections are grouped by image id; an id not present
// in `images` throws Error(kInvalidInput).
ConfusionMatrix BuildConfusionMatrix(std::span<const Detection> detections,
                                     std::span<const ImageRecord> images,
                                     std::size_t num_classes,
                                     double iou_threshold,
                                     double confidence_threshold);

}  // namespace vflow

#endif  // VFLOW_CONFUSION_H_
