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

#ifndef VFLOW_DATASET_H_
#define VFLOW_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "vflow/annotation.h"

namespace vflow {

enum class Split : std::uint8_t { kTrain, kValid, kTest };

std::string_view SplitName(Split split);
// Throws Error(kParseError) on anything but train/valid/test.
Split ParseSplit(std::string_view name);

struct SplitFractions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;

  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

struct DatasetManifest {
  std::vector<ImageRecord> records;
  // Parallel to `records`.
  std::vector<Split> splits;
  std::uint64_t seed = 0;

  SplitSizes Sizes() const;
  std::vector<const ImageRecord*> RecordsIn(Split split) const;
};

// valid and test get floor(fraction * n); every remaining record goes to
// train. Throws Error(kInvalidFractions) unless all fractions are non-negative
// and sum to 1 within 1e-9.
SplitSizes ComputeSplitSizes(std::size_t n, const SplitFractions& fractions);

// Seeded uniform shuffle, then the first `train` shuffled records go to
// train, the next `valid` to valid, the rest to test. Record order in the
// returned manifest is the input order.
DatasetManifest SplitDataset(std::vector<ImageRecord> records,
                             const SplitFractions& fractions,
                             std::uint64_t seed);

// Manifest file: one "image_id,width,height,split" line per record.
// Annotations are not part of the manifest; see AttachYoloLabels.
void WriteManifest(const DatasetManifest& manifest, std::ostream& out);
DatasetManifest ReadManifest(std::istream& in);

// Loads <labels_dir>/<image_id>.txt for every record. A missing label file
// means an image without vehicles.
void AttachYoloLabels(DatasetManifest& manifest,
                      const std::filesystem::path& labels_dir,
                      const ClassMap& classes);

}  // namespace vflow

#endif  // VFLOW_DATASET_H_
