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

#include "optinter/model/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "optinter/errors.h"

namespace optinter::model {

namespace {

void put_u64(std::ostream& out, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

void put_u32(std::ostream& out, uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 4);
}

uint64_t get_uint(std::istream& in, int bytes) {
  unsigned char buf[8] = {};
  in.read(reinterpret_cast<char*>(buf), bytes);
  if (!in) throw FormatError("checkpoint: truncated");
  uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

void save_checkpoint(const OptInterModel& model, const std::string& schema_hash,
                     double tau, std::ostream& out) {
  const auto params = model.parameters();
  nlohmann::ordered_json arrays = nlohmann::ordered_json::array();
  for (const Parameter* p : params) {
    arrays.push_back(
        {{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()}});
  }
  nlohmann::ordered_json header;
  header["config"] = model.config().to_json();
  header["schema_hash"] = schema_hash;
  header["dims"] = model.dims().to_json();
  header["decision"] = model.decision() ? model.decision()->to_json()
                                        : nlohmann::ordered_json(nullptr);
  header["tau"] = tau;
  header["arrays"] = std::move(arrays);
  const std::string text = header.dump();

  out.write(Checkpoint::kMagic.data(),
            static_cast<std::streamsize>(Checkpoint::kMagic.size()));
  put_u32(out, Checkpoint::kFormatVersion);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Parameter* p : params) {
    put_u64(out, p->value.size());
    for (double v : p->value.values()) put_u64(out, std::bit_cast<uint64_t>(v));
  }
  if (!out) throw FileError("checkpoint: write failed");
}

void save_checkpoint(const OptInterModel& model, const std::string& schema_hash,
                     double tau, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot open '" + path + "' for writing");
  save_checkpoint(model, schema_hash, tau, out);
}

LoadedCheckpoint load_checkpoint(std::istream& in,
                                 const std::string& expected_schema_hash) {
  std::string magic(Checkpoint::kMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != Checkpoint::kMagic) {
    throw FormatError("checkpoint: bad magic");
  }
  const uint64_t version = get_uint(in, 4);
  if (version != Checkpoint::kFormatVersion) {
    throw FormatError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  const uint64_t header_len = get_uint(in, 8);
  if (header_len > (uint64_t{1} << 32)) {
    throw FormatError("checkpoint: implausible header length");
  }
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw FormatError("checkpoint: truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  std::string schema_hash;
  std::optional<ArchitectureDecision> decision;
  ModelConfig config;
  ModelDims dims;
  double tau = 1.0;
  nlohmann::json arrays;
  try {
    schema_hash = header.at("schema_hash").get<std::string>();
    config = ModelConfig::from_json(header.at("config"));
    dims = ModelDims::from_json(header.at("dims"));
    if (!header.at("decision").is_null()) {
      decision = ArchitectureDecision::from_json(header.at("decision"));
    }
    tau = header.at("tau").get<double>();
    arrays = header.at("arrays");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  if (!expected_schema_hash.empty() && schema_hash != expected_schema_hash) {
    throw CompatibilityError("checkpoint schema hash " + schema_hash +
                             " does not match data schema " +
                             expected_schema_hash);
  }

  OptInterModel model(config, dims, decision);
  const auto params = model.parameters();
  if (arrays.size() != params.size()) {
    throw FormatError("checkpoint: array count does not match architecture");
  }
  for (size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    const auto& a = arrays[k];
    if (a.value("name", "") != p.name ||
        a.value("rows", size_t{0}) != p.value.rows() ||
        a.value("cols", size_t{0}) != p.value.cols()) {
      throw FormatError("checkpoint: array " + std::to_string(k) +
                        " does not match expected '" + p.name + "' " +
                        p.value.shape_string());
    }
    const uint64_t count = get_uint(in, 8);
    if (count != p.value.size()) {
      throw FormatError("checkpoint: element count mismatch for " + p.name);
    }
    for (double& v : p.value.values()) {
      v = std::bit_cast<double>(get_uint(in, 8));
    }
  }
  return {std::move(model), schema_hash, tau};
}

LoadedCheckpoint load_checkpoint(const std::string& path,
                                 const std::string& expected_schema_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  return load_checkpoint(in, expected_schema_hash);
}

}  // namespace optinter::model
