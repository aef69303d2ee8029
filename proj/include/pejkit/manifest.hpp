// Copyright 2026 The pejkit Authors.
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

#ifndef PEJKIT_MANIFEST_HPP
#define PEJKIT_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pejkit/textio.hpp"

namespace pejkit {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kManifestFileName = "run_manifest.json";

// Provenance record written once per output directory. Reruns with identical
// inputs and seed reproduce every output byte-for-byte; only duration_s
// varies.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t rng_seed = 0;
  std::string tool_version = kToolVersion;
  double duration_s = 0.0;
  nlohmann::json extra;  // command-specific details

  void write(const std::filesystem::path& out_dir) const {
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["rng_seed"] = rng_seed;
    j["tool_version"] = tool_version;
    j["duration_s"] = duration_s;
    if (!extra.is_null()) j["details"] = extra;
    write_text_file(out_dir / kManifestFileName, j.dump(2) + "\n");
  }
};

}  // namespace pejkit

#endif  // PEJKIT_MANIFEST_HPP
