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

#ifndef VFLOW_CLASS_MAP_H_
#define VFLOW_CLASS_MAP_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vflow {

using ClassId = std::uint32_t;

// Ordered, dense list of class names. Index i is the class id.
class ClassMap {
 public:
  // Throws Error(kInvalidInput) on empty or duplicate names.
  explicit ClassMap(std::vector<std::string> names);

  // The 15 vehicle classes in Table-1 row order: bicycle, bike, boat, bus,
  // car, cng, easybike, horsecart, launch, leguna, rickshaw, tractor, truck,
  // van, wheelbarrow.
  static ClassMap Default();

  std::size_t size() const { return names_.size(); }
  const std::string& name(ClassId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  bool contains(ClassId id) const { return id < names_.size(); }

  std::optional<ClassId> Find(std::string_view name) const;
  // Like Find but throws Error(kUnknownClass) naming the class.
  ClassId Lookup(std::string_view name) const;

  friend bool operator==(const ClassMap& a, const ClassMap& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ClassId> index_;
};

// Sidecar class list: one name per line in index order. Blank lines and
// surrounding whitespace are ignored.
ClassMap ReadClassList(std::istream& in);
void WriteClassList(const ClassMap& classes, std::ostream& out);

}  // namespace vflow

#endif  // VFLOW_CLASS_MAP_H_
