// Copyright 2026 The vqtif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqtif/model_io.h"

#include <fstream>

#include "vqtif/error.h"
#include "vqtif/report.h"

namespace vqtif {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidModel, "invalid model: " + what);
}

const json& Field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) Invalid(where + " is not an object");
  const auto it = object.find(key);
  if (it == object.end()) {
    Invalid("missing field '" + (where.empty() ? "" : where + ".") + key + "'");
  }
  return *it;
}

double Number(const json& value, const std::string& what) {
  if (!value.is_number()) Invalid(what + " is not a number");
  return value.get<double>();
}

int Integer(const json& value, const std::string& what) {
  if (!value.is_number_integer()) Invalid(what + " is not an integer");
  return value.get<int>();
}

std::vector<double> Vector(const json& value, std::size_t expected,
                           const std::string& what) {
  if (!value.is_array()) Invalid(what + " is not an array");
  if (value.size() != expected) {
    Invalid(what + " has " + std::to_string(value.size()) + " entries, expected " +
            std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const json& v : value) out.push_back(Number(v, what));
  return out;
}

std::vector<double> Matrix(const json& value, std::size_t rows, std::size_t cols,
                           const std::string& what) {
  if (!value.is_array()) Invalid(what + " is not an array");
  if (value.size() != rows) {
    Invalid(what + " has " + std::to_string(value.size()) + " rows, expected " +
            std::to_string(rows));
  }
  std::vector<double> out;
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = Vector(value[r], cols, what + "[" + std::to_string(r) + "]");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

json MatrixToJson(const std::vector<double>& flat, std::size_t cols) {
  json rows = json::array();
  for (std::size_t r = 0; r * cols < flat.size(); ++r) {
    rows.push_back(std::vector<double>(flat.begin() + r * cols,
                                       flat.begin() + (r + 1) * cols));
  }
  return rows;
}

json ReadJsonFile(const std::filesystem::path& path, ErrorCode parse_code) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(parse_code, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

ChunkMatrix MatrixFromJson(const json& value, std::size_t rows, const std::string& what) {
  const auto flat = Matrix(value, rows, kFeatureCount, what);
  std::vector<FeatureRow> out(rows);
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) out[t][j] = flat[t * kFeatureCount + j];
  }
  return ChunkMatrix(std::move(out));
}

}  // namespace

json ModelToJson(const ModelBundle& bundle) {
  json lstm;
  lstm["input_dim"] = bundle.input_dim;
  lstm["hidden_dim"] = bundle.hidden_dim;
  json w, u, b;
  for (std::size_t g = 0; g < kGateCount; ++g) {
    const std::string name(kGateNames[g]);
    w[name] = MatrixToJson(bundle.gates[g].input, kFeatureCount);
    u[name] = MatrixToJson(bundle.gates[g].recurrent,
                           static_cast<std::size_t>(bundle.hidden_dim));
    b[name] = bundle.gates[g].bias;
  }
  lstm["W"] = w;
  lstm["U"] = u;
  lstm["b"] = b;

  json doc;
  doc["format_version"] = bundle.format_version;
  doc["f_c"] = bundle.chunk_size;
  doc["feature_order"] = bundle.feature_order;
  doc["norm_mean"] = bundle.norm_mean;
  doc["norm_std"] = bundle.norm_std;
  doc["lstm"] = lstm;
  doc["dense"] = {{"weight", bundle.dense_weight}, {"bias", bundle.dense_bias}};
  doc["feature_definitions"] = {{"luminance", bundle.feature_definitions.luminance},
                                {"ssim", bundle.feature_definitions.ssim}};
  doc["provenance"] = bundle.provenance;
  return doc;
}

ModelBundle ModelFromJson(const json& doc) {
  ModelBundle bundle;
  bundle.format_version = Integer(Field(doc, "format_version", ""), "format_version");
  if (bundle.format_version != 1) {
    Invalid("unknown format_version " + std::to_string(bundle.format_version));
  }
  bundle.chunk_size = Integer(Field(doc, "f_c", ""), "f_c");

  const json& order = Field(doc, "feature_order", "");
  if (!order.is_array() || order.size() != kFeatureCount) {
    Invalid("feature_order must list 4 features");
  }
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (!order[j].is_string()) Invalid("feature_order entries must be strings");
    bundle.feature_order[j] = order[j].get<std::string>();
  }
  const auto mean = Vector(Field(doc, "norm_mean", ""), kFeatureCount, "norm_mean");
  const auto std_dev = Vector(Field(doc, "norm_std", ""), kFeatureCount, "norm_std");
  std::copy(mean.begin(), mean.end(), bundle.norm_mean.begin());
  std::copy(std_dev.begin(), std_dev.end(), bundle.norm_std.begin());

  const json& lstm = Field(doc, "lstm", "");
  bundle.input_dim = Integer(Field(lstm, "input_dim", "lstm"), "lstm.input_dim");
  bundle.hidden_dim = Integer(Field(lstm, "hidden_dim", "lstm"), "lstm.hidden_dim");
  if (bundle.input_dim != static_cast<int>(kFeatureCount)) {
    Invalid("lstm.input_dim must be " + std::to_string(kFeatureCount));
  }
  if (bundle.hidden_dim < 1) Invalid("lstm.hidden_dim must be at least 1");
  const auto hidden = static_cast<std::size_t>(bundle.hidden_dim);
  const json& w = Field(lstm, "W", "lstm");
  const json& u = Field(lstm, "U", "lstm");
  const json& b = Field(lstm, "b", "lstm");
  for (std::size_t g = 0; g < kGateCount; ++g) {
    const std::string name(kGateNames[g]);
    const char* key = name.c_str();
    bundle.gates[g].input =
        Matrix(Field(w, key, "lstm.W"), hidden, kFeatureCount, "lstm.W." + name);
    bundle.gates[g].recurrent =
        Matrix(Field(u, key, "lstm.U"), hidden, hidden, "lstm.U." + name);
    bundle.gates[g].bias = Vector(Field(b, key, "lstm.b"), hidden, "lstm.b." + name);
  }

  const json& dense = Field(doc, "dense", "");
  bundle.dense_weight = Vector(Field(dense, "weight", "dense"), hidden, "dense.weight");
  bundle.dense_bias = Number(Field(dense, "bias", "dense"), "dense.bias");

  if (const auto it = doc.find("feature_definitions"); it != doc.end()) {
    const json& defs = *it;
    const json& lum = Field(defs, "luminance", "feature_definitions");
    const json& ssim = Field(defs, "ssim", "feature_definitions");
    if (!lum.is_string() || !ssim.is_string()) {
      Invalid("feature_definitions entries must be strings");
    }
    bundle.feature_definitions.luminance = lum.get<std::string>();
    bundle.feature_definitions.ssim = ssim.get<std::string>();
  }
  if (const auto it = doc.find("provenance"); it != doc.end()) {
    if (!it->is_string()) Invalid("provenance must be a string");
    bundle.provenance = it->get<std::string>();
  }

  ValidateModel(bundle);
  return bundle;
}

ModelBundle LoadModel(const std::filesystem::path& path) {
  return ModelFromJson(ReadJsonFile(path, ErrorCode::kInvalidModel));
}

void SaveModel(const ModelBundle& bundle, const std::filesystem::path& path) {
  ValidateModel(bundle);
  WriteFileAtomic(path, ModelToJson(bundle).dump(1) + "\n");
}

std::vector<ParityVector> LoadParityVectors(const std::filesystem::path& path) {
  const json doc = ReadJsonFile(path, ErrorCode::kParse);
  const int version = Integer(Field(doc, "format_version", ""), "format_version");
  if (version != 1) Invalid("unknown parity fixture format_version");
  const int rows = Integer(Field(doc, "f_c", ""), "f_c");
  if (rows < 1) Invalid("parity fixture f_c must be at least 1");
  const json& vectors = Field(doc, "vectors", "");
  if (!vectors.is_array()) Invalid("vectors is not an array");
  std::vector<ParityVector> out;
  out.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const std::string where = "vectors[" + std::to_string(i) + "]";
    ParityVector v;
    v.input = MatrixFromJson(Field(vectors[i], "input", where),
                             static_cast<std::size_t>(rows), where + ".input");
    v.output = Number(Field(vectors[i], "output", where), where + ".output");
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace vqtif
