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

#include "vflow/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "vflow/error.h"

namespace vflow {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw Error(ErrorCode::kParseError, "unknown split '" + std::string(name) + "'");
}

SplitSizes DatasetManifest::Sizes() const {
  SplitSizes sizes;
  for (Split s : splits) {
    switch (s) {
      case Split::kTrain: ++sizes.train; break;
      case Split::kValid: ++sizes.valid; break;
      case Split::kTest: ++sizes.test; break;
    }
  }
  return sizes;
}

std::vector<const ImageRecord*> DatasetManifest::RecordsIn(Split split) const {
  std::vector<const ImageRecord*> out;
  for (std::size_t i = 0; i < records.size() && i < splits.size(); ++i) {
    if (splits[i] == split) out.push_back(&records[i]);
  }
  return out;
}

SplitSizes ComputeSplitSizes(std::size_t n, const SplitFractions& fractions) {
  const double sum = fractions.train + fractions.valid + fractions.test;
  if (!(fractions.train >= 0.0 && fractions.valid >= 0.0 &&
        fractions.test >= 0.0) ||
      std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "fractions (" << fractions.train << ", " << fractions.valid << ", "
        << fractions.test << ") must be non-negative and sum to 1";
    throw Error(ErrorCode::kInvalidFractions, msg.str());
  }
  // The 1e-9 nudge keeps products such as 0.29 * 100 = 28.999999999999996
  // from flooring one below the exact value.
  auto floor_part = [n](double fraction) {
    return static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(n) + 1e-9));
  };
  SplitSizes sizes;
  sizes.valid = floor_part(fractions.valid);
  sizes.test = floor_part(fractions.test);
  sizes.train = n - sizes.valid - sizes.test;
  return sizes;
}

DatasetManifest SplitDataset(std::vector<ImageRecord> records,
                             const SplitFractions& fractions,
                             std::uint64_t seed) {
  const SplitSizes sizes = ComputeSplitSizes(records.size(), fractions);

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.splits.assign(records.size(), Split::kTrain);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    Split split = Split::kTest;
    if (rank < sizes.train) {
      split = Split::kTrain;
    } else if (rank < sizes.train + sizes.valid) {
      split = Split::kValid;
    }
    manifest.splits[order[rank]] = split;
  }
  manifest.records = std::move(records);
  return manifest;
}

void WriteManifest(const DatasetManifest& manifest, std::ostream& out) {
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& r = manifest.records[i];
    const Split split = i < manifest.splits.size() ? manifest.splits[i]
                                                   : Split::kTrain;
    out << r.id << ',' << r.size.width << ',' << r.size.height << ','
        << SplitName(split) << '\n';
  }
}

DatasetManifest ReadManifest(std::istream& in) {
  DatasetManifest manifest;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    const std::string context = "manifest line " + std::to_string(line_no);
    if (parts.size() != 4 || parts[0].empty()) {
      throw Error(ErrorCode::kParseError,
                  context + ": expected image_id,width,height,split");
    }
    ImageRecord record;
    record.id = parts[0];
    record.size = {static_cast<int>(ParseInteger(parts[1], context)),
                   static_cast<int>(ParseInteger(parts[2], context))};
    ValidateImageSize(record.size);
    manifest.records.push_back(std::move(record));
    manifest.splits.push_back(ParseSplit(parts[3]));
  }
  return manifest;
}

void AttachYoloLabels(DatasetManifest& manifest,
                      const std::filesystem::path& labels_dir,
                      const ClassMap& classes) {
  for (auto& record : manifest.records) {
    const auto path = labels_dir / (record.id + ".txt");
    std::ifstream in(path);
    if (!in) {
      record.annotations.clear();
      continue;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      ImageRecord parsed = ParseYoloTxt(buffer.str(), record.size, classes);
      record.annotations = std::move(parsed.annotations);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
}

}  // namespace vflow
