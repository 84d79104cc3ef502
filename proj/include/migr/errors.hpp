// Copyright 2025 The migr Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>

namespace migr {

/// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration or malformed input data.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// An emotion label has no row in the FAU table.
class MissingTableEntry : public Error {
 public:
  explicit MissingTableEntry(const std::string& what) : Error(what) {}
};

/// An operation that requires a resolved modality got Unresolved.
class UnresolvedMiError : public Error {
 public:
  explicit UnresolvedMiError(const std::string& what) : Error(what) {}
};

/// Metric over an empty record set.
class EmptyDatasetError : public Error {
 public:
  explicit EmptyDatasetError(const std::string& what) : Error(what) {}
};

/// Group-relative advantages over an empty group.
class EmptyGroupError : public Error {
 public:
  explicit EmptyGroupError(const std::string& what) : Error(what) {}
};

/// Policy update produced a non-finite parameter or gradient.
class NonFiniteGradientError : public Error {
 public:
  NonFiniteGradientError(const std::string& what, int step)
      : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace migr
