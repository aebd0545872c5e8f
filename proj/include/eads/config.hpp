// Copyright 2026 The EADS Authors
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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eads {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Server deployment configuration. File format is TOML-style flat
// `key = value` lines ('#' comments, optional double quotes around values).
// Every key can be overridden by an environment variable named EADS_<KEY
// uppercased>, e.g. EADS_LISTEN_PORT.
struct ServerConfig {
  std::string listen_address = "127.0.0.1";
  int listen_port = 8080;
  std::filesystem::path data_dir = "data";
  // Defaults to <data_dir>/<ledger_id>.journal.jsonl when empty.
  std::filesystem::path journal_path;
  std::string ledger_id = "ledger";
  std::string mode = "log";  // "log" or "map"
  // Static bearer token required on mutating routes; empty disables auth
  // (local testing only).
  std::string token;
  std::uint64_t checkpoint_every_n_edits = 1;
  // Hex-encoded 32-byte Ed25519 seed; generated via `eads keygen`.
  std::filesystem::path key_file;
  // Enables POST /admin/adversary. Never turn on outside a test bench.
  bool admin_enabled = false;
};

// Parses configuration text. Unknown keys, bad integers and malformed
// lines throw ConfigError.
ServerConfig parse_config(std::string_view text);

// Reads the file, parses it, then applies EADS_* environment overrides.
// A missing file yields defaults plus overrides.
ServerConfig load_config(const std::filesystem::path& path);

void apply_env_overrides(ServerConfig& config);

}  // namespace eads
