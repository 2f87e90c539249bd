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

#ifndef VQTIF_MODEL_IO_H_
#define VQTIF_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vqtif/fusion.h"

namespace vqtif {

// Model file layout (format_version 1):
//
//   {
//     "format_version": 1,
//     "f_c": 8,
//     "feature_order": ["r_E", "r_h", "r_L", "ssim"],
//     "norm_mean": [4 numbers], "norm_std": [4 numbers],
//     "lstm": {
//       "input_dim": 4, "hidden_dim": H,
//       "W": {"input": HxD, "forget": HxD, "candidate": HxD, "output": HxD},
//       "U": {"input": HxH, ...},
//       "b": {"input": [H], ...}
//     },
//     "dense": {"weight": [H], "bias": number},
//     "feature_definitions": {"luminance": "...", "ssim": "..."},  // optional
//     "provenance": "free text"                                  // optional
//   }
//
// Matrices are nested row-major arrays; row u of W[g] feeds hidden unit u.
nlohmann::json ModelToJson(const ModelBundle& bundle);
// Parses and validates; throws kInvalidModel naming the offending field.
ModelBundle ModelFromJson(const nlohmann::json& doc);

ModelBundle LoadModel(const std::filesystem::path& path);
void SaveModel(const ModelBundle& bundle, const std::filesystem::path& path);

// Cross-implementation parity fixture: raw (pre-normalization) chunk matrices
// with the exporter's predicted scores.
//
//   {"format_version": 1, "seed": 7, "f_c": 8,
//    "vectors": [{"input": [[r_E, r_h, r_L, ssim], ...], "output": 63.1}, ...]}
struct ParityVector {
  ChunkMatrix input;
  double output = 0.0;
};

std::vector<ParityVector> LoadParityVectors(const std::filesystem::path& path);

}  // namespace vqtif

#endif  // VQTIF_MODEL_IO_H_
