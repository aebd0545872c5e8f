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

#include "eads/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace eads {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::uint64_t parse_uint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + std::string(key) +
                      "' wants an unsigned integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config key '" + std::string(key) +
                    "' wants true or false, got '" + std::string(value) +
                    "'");
}

void apply(ServerConfig& config, std::string_view key,
           std::string_view value) {
  if (key == "listen_address") {
    config.listen_address = std::string(value);
  } else if (key == "listen_port") {
    config.listen_port = static_cast<int>(parse_uint(key, value));
  } else if (key == "data_dir") {
    config.data_dir = std::string(value);
  } else if (key == "journal_path") {
    config.journal_path = std::string(value);
  } else if (key == "ledger_id") {
    config.ledger_id = std::string(value);
  } else if (key == "mode") {
    if (value != "log" && value != "map") {
      throw ConfigError("mode must be 'log' or 'map', got '" +
                        std::string(value) + "'");
    }
    config.mode = std::string(value);
  } else if (key == "token") {
    config.token = std::string(value);
  } else if (key == "checkpoint_every_n_edits") {
    config.checkpoint_every_n_edits = parse_uint(key, value);
    if (config.checkpoint_every_n_edits == 0) {
      throw ConfigError("checkpoint_every_n_edits must be >= 1");
    }
  } else if (key == "key_file") {
    config.key_file = std::string(value);
  } else if (key == "admin_enabled") {
    config.admin_enabled = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

const char* const kKeys[] = {
    "listen_address", "listen_port",  "data_dir",
    "journal_path",   "ledger_id",    "mode",
    "token",          "checkpoint_every_n_edits",
    "key_file",       "admin_enabled",
};

std::string env_name(std::string_view key) {
  std::string name = "EADS_";
  for (char c : key) {
    name += (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  }
  return name;
}

}  // namespace

ServerConfig parse_config(std::string_view text) {
  ServerConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = unquote(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    apply(config, key, value);
  }
  return config;
}

void apply_env_overrides(ServerConfig& config) {
  for (const char* key : kKeys) {
    if (const char* value = std::getenv(env_name(key).c_str())) {
      apply(config, key, value);
    }
  }
}

ServerConfig load_config(const std::filesystem::path& path) {
  ServerConfig config;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    config = parse_config(buffer.str());
  }
  apply_env_overrides(config);
  return config;
}

}  // namespace eads
