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

#ifndef OPTINTER_MODEL_CHECKPOINT_H_
#define OPTINTER_MODEL_CHECKPOINT_H_

#include <iosfwd>
#include <string>

#include "optinter/model/optinter_model.h"

namespace optinter::model {

// Binary layout, all integers little-endian:
//   "OPTINTER-CKPT\n"  magic
//   uint32             format version
//   uint64             header length, then a JSON header with config,
//                      schema hash, dims, decision (null while searching),
//                      temperature and the list of arrays
//   per array: uint64 element count, then that many float64 values
struct Checkpoint {
  static constexpr std::string_view kMagic = "OPTINTER-CKPT\n";
  static constexpr uint32_t kFormatVersion = 1;
};

struct LoadedCheckpoint {
  OptInterModel model;
  std::string schema_hash;
  double tau = 1.0;
};

void save_checkpoint(const OptInterModel& model, const std::string& schema_hash,
                     double tau, std::ostream& out);
void save_checkpoint(const OptInterModel& model, const std::string& schema_hash,
                     double tau, const std::string& path);

// Throws FormatError on a malformed file and CompatibilityError when
// `expected_schema_hash` is non-empty and differs from the stored one.
LoadedCheckpoint load_checkpoint(std::istream& in,
                                 const std::string& expected_schema_hash = "");
LoadedCheckpoint load_checkpoint(const std::string& path,
                                 const std::string& expected_schema_hash = "");

}  // namespace optinter::model

#endif  // OPTINTER_MODEL_CHECKPOINT_H_
