// Copyright 2026 The qksvm Authors

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
 * Exception hierarchy shared by all qksvm modules.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace qksvm {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested size exceeds a hard capacity limit (e.g. qubit count).
struct CapacityError : Error {
    using Error::Error;
};

/// Dimensions of the supplied operands do not match.
struct ShapeError : Error {
    using Error::Error;
};

/// A qubit or element index is out of range or inconsistent.
struct IndexError : Error {
    using Error::Error;
};

/// Input is valid in shape but degenerate in value (all-zero vector,
/// single-class labels, a class too small to split, ...).
struct DegenerateInputError : Error {
    using Error::Error;
};

/// The requested feature-map family cannot serve this operation.
struct UnsupportedFamilyError : Error {
    using Error::Error;
};

/// A configuration document or field is invalid.
struct ConfigError : Error {
    using Error::Error;
};

/// File access or parse failure.
struct IoError : Error {
    using Error::Error;
};

} // namespace qksvm
