/* Copyright 2026 The OptInter Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef OPTINTER_ERRORS_H_
#define OPTINTER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace optinter {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (CSV rows, vocabulary files, encoded splits).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Empty input where at least one row is required.
class EmptyInputError : public FormatError {
 public:
  using FormatError::FormatError;
};

// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite values encountered during optimization or evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, decision or synthetic spec.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Embedding lookup with an out-of-range index.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Checkpoint version or schema hash mismatch.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures.
class FileError : public Error {
 public:
  using Error::Error;
};

// A metric that is undefined for the given input (e.g. AUC on one class).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace optinter

#endif  // OPTINTER_ERRORS_H_
