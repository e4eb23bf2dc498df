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

#include "vflow/class_map.h"

#include <istream>
#include <ostream>

#include <boost/algorithm/string/trim.hpp>

#include "vflow/error.h"

namespace vflow {

ClassMap::ClassMap(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) {
    throw Error(ErrorCode::kInvalidInput, "class map is empty");
  }
  for (ClassId i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "class " + std::to_string(i) + " has an empty name");
    }
    if (!index_.emplace(names_[i], i).second) {
      throw Error(ErrorCode::kInvalidInput,
                  "duplicate class name '" + names_[i] + "'");
    }
  }
}

ClassMap ClassMap::Default() {
  return ClassMap({"bicycle", "bike", "boat", "bus", "car", "cng", "easybike",
                   "horsecart", "launch", "leguna", "rickshaw", "tractor",
                   "truck", "van", "wheelbarrow"});
}

std::optional<ClassId> ClassMap::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ClassId ClassMap::Lookup(std::string_view name) const {
  if (auto id = Find(name)) return *id;
  throw Error(ErrorCode::kUnknownClass, std::string(name));
}

ClassMap ReadClassList(std::istream& in) {
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    boost::algorithm::trim(line);
    if (!line.empty()) names.push_back(line);
  }
  return ClassMap(std::move(names));
}

void WriteClassList(const ClassMap& classes, std::ostream& out) {
  for (const auto& name : classes.names()) out << name << '\n';
}

}  // namespace vflow
