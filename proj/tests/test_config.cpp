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

#include <doctest.h>

#include <cstdlib>

#include "eads/clock.hpp"
#include "eads/config.hpp"
#include "test_util.hpp"

namespace eads {
namespace {

// setenv/unsetenv scope guard so env-override tests cannot leak into each
// other or into later tests.
class EnvVar {
 public:
  EnvVar(const char* name, const char* value) : name_(name) {
    ::setenv(name, value, /*overwrite=*/1);
  }
  ~EnvVar() { ::unsetenv(name_); }

 private:
  const char* name_;
};

TEST_CASE("config defaults") {
  const ServerConfig config = parse_config("");
  CHECK(config.listen_address == "127.0.0.1");
  CHECK(config.listen_port == 8080);
  CHECK(config.data_dir == "data");
  CHECK(config.journal_path.empty());
  CHECK(config.ledger_id == "ledger");
  CHECK(config.mode == "log");
  CHECK(config.token.empty());
  CHECK(config.checkpoint_every_n_edits == 1);
  CHECK(config.key_file.empty());
  CHECK_FALSE(config.admin_enabled);
}

TEST_CASE("config parses flat key = value text") {
  const ServerConfig config = parse_config(
      "# deployment\n"
      "listen_address = \"0.0.0.0\"\n"
      "listen_port = 9443\n"
      "\n"
      "data_dir = /var/lib/eads\n"
      "ledger_id = audit-ledger\n"
      "mode = map\n"
      "token = \"s3cret\"\n"
      "checkpoint_every_n_edits = 4\n"
      "key_file = keys/server.key\n"
      "admin_enabled = true\n");
  CHECK(config.listen_address == "0.0.0.0");
  CHECK(config.listen_port == 9443);
  CHECK(config.data_dir == "/var/lib/eads");
  CHECK(config.ledger_id == "audit-ledger");
  CHECK(config.mode == "map");
  CHECK(config.token == "s3cret");
  CHECK(config.checkpoint_every_n_edits == 4);
  CHECK(config.key_file == "keys/server.key");
  CHECK(config.admin_enabled);
}

TEST_CASE("config tolerates whitespace and comments") {
  const ServerConfig config = parse_config(
      "   # indented comment\n"
      "\tlisten_port\t=\t9000\t\n"
      "ledger_id=compact\r\n");
  CHECK(config.listen_port == 9000);
  CHECK(config.ledger_id == "compact");
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS((void)parse_config("nonsense line\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("= value\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("no_such_key = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("listen_port = http\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("listen_port = 80x\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("mode = tree\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("admin_enabled = yes\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("checkpoint_every_n_edits = 0\n"),
                  ConfigError);
}

TEST_CASE("environment variables override file values") {
  EnvVar port("EADS_LISTEN_PORT", "7001");
  EnvVar mode("EADS_MODE", "map");
  ServerConfig config = parse_config("listen_port = 9443\nmode = log\n");
  apply_env_overrides(config);
  CHECK(config.listen_port == 7001);
  CHECK(config.mode == "map");
  // Untouched keys keep their file values.
  CHECK(config.ledger_id == "ledger");
}

TEST_CASE("environment overrides are validated like file values") {
  EnvVar bad("EADS_MODE", "pyramid");
  ServerConfig config;
  CHECK_THROWS_AS(apply_env_overrides(config), ConfigError);
}

TEST_CASE("load_config reads a file and applies overrides") {
  const auto dir = testutil::scratch_dir("config-load");
  const auto path = dir / "eads.conf";
  testutil::write_file(path, "listen_port = 9443\nledger_id = from-file\n");

  SUBCASE("file only") {
    const ServerConfig config = load_config(path);
    CHECK(config.listen_port == 9443);
    CHECK(config.ledger_id == "from-file");
  }
  SUBCASE("file plus environment") {
    EnvVar env("EADS_LEDGER_ID", "from-env");
    const ServerConfig config = load_config(path);
    CHECK(config.listen_port == 9443);
    CHECK(config.ledger_id == "from-env");
  }
  SUBCASE("missing file yields defaults") {
    const ServerConfig config = load_config(dir / "absent.conf");
    CHECK(config.listen_port == 8080);
  }
}

TEST_CASE("fixed step clock is deterministic") {
  const Clock clock = fixed_step_clock(1000, 250);
  CHECK(clock() == 1000);
  CHECK(clock() == 1250);
  CHECK(clock() == 1500);
  // A fresh clock restarts; an existing one keeps counting through copies.
  const Clock copy = clock;
  CHECK(copy() == 1750);
  CHECK(clock() == 2000);
  CHECK(fixed_step_clock(1000, 250)() == 1000);
}

TEST_CASE("system clock looks like wall time") {
  // Coarse sanity: after 2020-01-01 and before 2100-01-01, in milliseconds.
  const std::int64_t now = system_time_ms();
  CHECK(now > 1577836800000LL);
  CHECK(now < 4102444800000LL);
  CHECK(system_clock()() >= now);
}

}  // namespace
}  // namespace eads
