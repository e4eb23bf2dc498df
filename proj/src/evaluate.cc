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

#include "vflow/evaluate.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "vflow/error.h"

namespace vflow {
namespace {

void ValidateThreshold(double value, const char* what) {
  if (!(value > 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " must lie in (0, 1]");
  }
}

struct RankedEntry {
  double confidence;
  std::size_t image;
  std::size_t detection;
  bool true_positive;
};

std::vector<RankedLabel> Rank(std::vector<RankedEntry> entries) {
  // Confidence descending, then dataset order, so the ranking does not depend
  // on how the per-image work was scheduled.
  std::sort(entries.begin(), entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.confidence != b.confidence) {
                return a.confidence > b.confidence;
              }
              if (a.image != b.image) return a.image < b.image;
              return a.detection < b.detection;
            });
  std::vector<RankedLabel> ranked;
  ranked.reserve(entries.size());
  for (const auto& e : entries) ranked.push_back({e.confidence, e.true_positive});
  return ranked;
}

}  // namespace

MetricsRow MacroAverage(std::span<const MetricsRow> rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no rows to average");
  }
  MetricsRow all;
  all.name = "all";
  for (const auto& r : rows) {
    all.instances += r.instances;
    all.precision += r.precision;
    all.recall += r.recall;
    all.map50 += r.map50;
    all.map50_95 += r.map50_95;
  }
  const double n = static_cast<double>(rows.size());
  all.precision /= n;
  all.recall /= n;
  all.map50 /= n;
  all.map50_95 /= n;
  return all;
}

std::vector<MetricsRow> EvalReport::Rows() const {
  std::vector<MetricsRow> rows{all};
  for (const auto& c : classes) rows.push_back(c.row);
  return rows;
}

EvalReport Evaluate(std::span<const Detection> detections,
                    const DatasetManifest& manifest, const ClassMap& classes,
                    const EvalConfig& config) {
  ValidateThreshold(config.iou_threshold, "IoU threshold");
  ValidateThreshold(config.confusion_iou_threshold, "confusion IoU threshold");
  ValidateThreshold(config.confusion_confidence_threshold,
                    "confusion confidence threshold");
  if (config.fixed_confidence) {
    ValidateThreshold(*config.fixed_confidence, "fixed confidence");
  }
  if (manifest.splits.size() != manifest.records.size()) {
    throw Error(ErrorCode::kInvalidInput, "manifest has no split assignment");
  }

  const std::vector<const ImageRecord*> images =
      manifest.RecordsIn(Split::kTest);
  std::map<std::string, std::size_t> image_index;
  for (std::size_t i = 0; i < images.size(); ++i) {
    image_index.emplace(images[i]->id, i);
  }

  std::vector<std::vector<Detection>> per_image(images.size());
  for (const auto& det : detections) {
    auto it = image_index.find(det.image_id);
    if (it == image_index.end()) {
      throw Error(ErrorCode::kInvalidInput,
                  "detection for image '" + det.image_id +
                      "' which is not in the test split");
    }
    if (!classes.contains(det.class_id)) {
      throw Error(ErrorCode::kInvalidInput,
                  "detection class " + std::to_string(det.class_id) +
                      " outside class map");
    }
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
      throw Error(ErrorCode::kInvalidInput,
                  "confidence outside [0, 1] for image '" + det.image_id + "'");
    }
    per_image[it->second].push_back(det);
  }

  const std::size_t k = classes.size();
  std::vector<std::size_t> instances(k, 0);
  for (const auto* image : images) {
    for (const auto& gt : image->annotations) {
      if (!classes.contains(gt.class_id)) {
        throw Error(ErrorCode::kInvalidInput,
                    "ground truth class outside class map in '" + image->id +
                        "'");
      }
      ++instances[gt.class_id];
    }
  }

  // ranked[t][c]: class c's ranking at threshold t.
  const auto thresholds = IouThresholds();
  std::vector<std::vector<std::vector<RankedLabel>>> ranked(
      thresholds.size() + 1);
  auto rank_at = [&](double threshold) {
    std::vector<std::vector<RankedEntry>> entries(k);
    for (std::size_t i = 0; i < images.size(); ++i) {
      const MatchResult match = MatchDetections(
          per_image[i], images[i]->annotations, threshold);
      for (std::size_t d = 0; d < per_image[i].size(); ++d) {
        entries[per_image[i][d].class_id].push_back(
            {per_image[i][d].confidence, i, d,
             match.labels[d] == DetectionLabel::kTruePositive});
      }
    }
    std::vector<std::vector<RankedLabel>> out;
    out.reserve(k);
    for (auto& e : entries) out.push_back(Rank(std::move(e)));
    return out;
  };
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    ranked[t] = rank_at(thresholds[t]);
  }
  ranked.back() = rank_at(config.iou_threshold);
  const auto& headline = ranked.back();

  EvalReport report;
  report.config = config;
  report.images = images.size();
  report.detections = detections.size();

  std::vector<MetricsRow> rows;
  for (ClassId c = 0; c < k; ++c) {
    if (instances[c] == 0) continue;
    ClassEvaluation eval;
    eval.class_id = c;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      eval.ap_by_threshold[t] = AveragePrecision(ranked[t][c], instances[c]);
    }
    eval.pr_curve = ComputePrCurve(headline[c], instances[c]);
    eval.operating_point =
        config.fixed_confidence
            ? PointAtConfidence(headline[c], instances[c],
                                *config.fixed_confidence)
            : BestF1Point(headline[c], instances[c]);

    eval.row.name = classes.name(c);
    eval.row.instances = instances[c];
    eval.row.precision = eval.operating_point.precision;
    eval.row.recall = eval.operating_point.recall;
    eval.row.map50 = IntegrateEnvelope(eval.pr_curve);
    eval.row.map50_95 =
        std::accumulate(eval.ap_by_threshold.begin(),
                        eval.ap_by_threshold.end(), 0.0) /
        static_cast<double>(kIouThresholdCount);
    rows.push_back(eval.row);
    report.classes.push_back(std::move(eval));
  }
  if (rows.empty()) {
    report.all.name = "all";
  } else {
    report.all = MacroAverage(rows);
  }

  report.confusion = ConfusionMatrix(k);
  for (std::size_t i = 0; i < images.size(); ++i) {
    AccumulateConfusion(report.confusion, per_image[i],
                        images[i]->annotations,
                        config.confusion_iou_threshold,
                        config.confusion_confidence_threshold);
  }
  return report;
}

}  // namespace vflow
