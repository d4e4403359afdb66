// Copyright 2026 The qtm-patterns Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception types shared by all modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qtm {

/// Invalid machine configuration: bad tape spec, index out of range, size
/// mismatch.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A configuration that is valid in general but not supported by the
/// requested computation path (e.g. recursion with non-uniform angles).
class UnsupportedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numeric validation failed (norm drift, weight sums, fit residuals).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qtm
