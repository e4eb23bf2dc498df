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
namespace {

void RequireSorted(std::span<const RankedLabel> ranked) {
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    if (ranked[i].confidence > ranked[i - 1].confidence) {
      throw Error(ErrorCode::kInvalidInput,
                  "ranking not sorted by descending confidence at position " +
                      std::to_string(i));
    }
  }
}

std::vector<PrPoint> CumulativePoints(std::span<const RankedLabel> ranked,
                                      std::size_t total_gt) {
  RequireSorted(ranked);
  std::vector<PrPoint> points;
  points.reserve(ranked.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].true_positive) ++tp;
    if (tp > total_gt) {
      throw Error(ErrorCode::kInvalidInput,
                  "more true positives than ground truths (" +
                      std::to_string(total_gt) + ")");
    }
    const double recall =
        total_gt == 0 ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(total_gt);
    const double precision =
        static_cast<double>(tp) / static_cast<double>(i + 1);
    points.push_back({recall, precision, ranked[i].confidence});
  }
  return points;
}

// Envelope value at recall r is the best precision among points whose recall
// reaches r. Precision is made non-increasing from the right, then each grid
// recall is located with a lower-bound search.
std::array<double, kRecallSamples> Envelope(const std::vector<PrPoint>& points,
                                            std::size_t total_gt) {
  std::array<double, kRecallSamples> envelope{};
  if (total_gt == 0) {
    envelope.fill(points.empty() ? 1.0 : 0.0);
    return envelope;
  }
  std::vector<double> recall(points.size());
  std::vector<double> precision(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    recall[i] = points[i].recall;
    precision[i] = points[i].precision;
  }
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  for (std::size_t s = 0; s < kRecallSamples; ++s) {
    const double r = static_cast<double>(s) / 100.0;
    auto it = std::lower_bound(recall.begin(), recall.end(), r);
    envelope[s] = it == recall.end() ? 0.0 : precision[it - recall.begin()];
  }
  return envelope;
}

OperatingPoint PointAt(std::size_t tp, std::size_t kept, std::size_t total_gt,
                       double confidence) {
  const auto pr = ComputePrecisionRecall(tp, kept - tp, total_gt - tp);
  return {pr.precision, pr.recall, confidence};
}

}  // namespace

PrecisionRecall ComputePrecisionRecall(std::size_t tp, std::size_t fp,
                                       std::size_t fn) {
  PrecisionRecall pr;
  if (tp + fp > 0) {
    pr.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn > 0) {
    pr.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  return pr;
}

double AveragePrecision(std::span<const RankedLabel> ranked,
                        std::size_t total_gt) {
  const auto envelope = Envelope(CumulativePoints(ranked, total_gt), total_gt);
  double sum = 0.0;
  for (double p : envelope) sum += p;
  return sum / static_cast<double>(kRecallSamples);
}

PrCurve ComputePrCurve(std::span<const RankedLabel> ranked,
                       std::size_t total_gt) {
  PrCurve curve;
  curve.raw = CumulativePoints(ranked, total_gt);
  curve.envelope = Envelope(curve.raw, total_gt);
  return curve;
}

double IntegrateEnvelope(const PrCurve& curve) {
  // Rectangle rule on the 101-sample grid.
  return std::accumulate(curve.envelope.begin(), curve.envelope.end(), 0.0) /
         static_cast<double>(kRecallSamples);
}

double MeanAveragePrecision(std::span<const double> per_class_ap) {
  if (per_class_ap.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no classes to average");
  }
  return std::accumulate(per_class_ap.begin(), per_class_ap.end(), 0.0) /
         static_cast<double>(per_class_ap.size());
}

std::array<double, kIouThresholdCount> IouThresholds() {
  std::array<double, kIouThresholdCount> t{};
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<double>(50 + 5 * i) / 100.0;
  }
  return t;
}

double MeanAveragePrecisionRange(
    std::span<const std::vector<double>> per_class_per_threshold) {
  std::vector<double> per_class;
  per_class.reserve(per_class_per_threshold.size());
  for (std::size_t c = 0; c < per_class_per_threshold.size(); ++c) {
    const auto& aps = per_class_per_threshold[c];
    if (aps.size() != kIouThresholdCount) {
      throw Error(ErrorCode::kInvalidInput,
                  "class " + std::to_string(c) + " has " +
                      std::to_string(aps.size()) + " thresholds, expected 10");
    }
    per_class.push_back(std::accumulate(aps.begin(), aps.end(), 0.0) /
                        static_cast<double>(kIouThresholdCount));
  }
  return MeanAveragePrecision(per_class);
}

OperatingPoint BestF1Point(std::span<const RankedLabel> ranked,
                           std::size_t total_gt) {
  RequireSorted(ranked);
  OperatingPoint best{0.0, 0.0, 1.0};
  double best_f1 = -1.0;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].true_positive) ++tp;
    const bool boundary = i + 1 == ranked.size() ||
                          ranked[i + 1].confidence != ranked[i].confidence;
    if (!boundary) continue;
    const OperatingPoint point =
        PointAt(tp, i + 1, std::max(total_gt, tp), ranked[i].confidence);
    const double denom = point.precision + point.recall;
    const double f1 =
        denom > 0.0 ? 2.0 * point.precision * point.recall / denom : 0.0;
    if (f1 > best_f1) {
      best_f1 = f1;
      best = point;
    }
  }
  return best;
}

OperatingPoint PointAtConfidence(std::span<const RankedLabel> ranked,
                                 std::size_t total_gt, double threshold) {
  RequireSorted(ranked);
  std::size_t tp = 0;
  std::size_t kept = 0;
  for (const auto& label : ranked) {
    if (label.confidence < threshold) break;
    ++kept;
    if (label.true_positive) ++tp;
  }
  return PointAt(tp, kept, std::max(total_gt, tp), threshold);
}

}  // namespace vflow
