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
//
// Operator entry point binding all roles: serve a ledger, drive verified
// client operations against it, audit journals, and replay end-to-end
// scenarios. Exit codes: 0 success/CONSISTENT, 2 verification failure or
// INCONSISTENT, 3 FORKED, 1 operational error.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "eads/auditor.hpp"
#include "eads/config.hpp"
#include "eads/history.hpp"
#include "eads/http_server.hpp"
#include "eads/scenario.hpp"
#include "eads/server.hpp"

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitOperational = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitForked = 3;

volatile std::sig_atomic_t g_stop_requested = 0;

void on_stop_signal(int) { g_stop_requested = 1; }

// ---------------------------------------------------------------------------
// Small HTTP client helpers

struct HttpResult {
  int status = 0;  // 0 means the connection itself failed
  std::string body;
};

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::runtime_error("url must start with http://: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

HttpResult http_get(const std::string& url, const std::string& session = {}) {
  const auto [base, path] = split_url(url);
  httplib::Client client(base);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(10, 0);
  httplib::Headers headers;
  if (!session.empty()) headers.emplace("X-EADS-Session", session);
  auto res = client.Get(path, headers);
  if (!res) return {};
  return {res->status, res->body};
}

HttpResult http_post(const std::string& url, const std::string& token,
                     const std::string& body,
                     const std::string& session = {}) {
  const auto [base, path] = split_url(url);
  httplib::Client client(base);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(10, 0);
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  if (!session.empty()) headers.emplace("X-EADS-Session", session);
  auto res = client.Post(path, headers, body, "application/json");
  if (!res) return {};
  return {res->status, res->body};
}

std::string http_error_text(const HttpResult& result,
                            const std::string& what) {
  if (result.status == 0) return what + ": connection failed";
  std::string detail = result.body;
  const auto parsed = json::parse(result.body, nullptr, false);
  if (parsed.is_object() && parsed.contains("error") &&
      parsed["error"].is_string()) {
    detail = parsed["error"].get<std::string>();
  }
  return what + ": HTTP " + std::to_string(result.status) + " (" + detail +
         ")";
}

// ---------------------------------------------------------------------------
// Shared file helpers

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' ||
                        s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  return s;
}

eads::Bytes read_public_key(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto bytes = eads::from_hex(trim_ws(text));
  if (!bytes || bytes->empty()) {
    throw std::runtime_error("public key file " + path.string() +
                             " must hold lowercase hex");
  }
  return *bytes;
}

std::unique_ptr<eads::JournalSource> make_journal_source(
    const std::string& target, const std::string& session = {}) {
  if (target.rfind("http://", 0) == 0 || target.rfind("https://", 0) == 0) {
    return std::make_unique<eads::HttpJournalSource>(target, session);
  }
  return std::make_unique<eads::FileJournalSource>(target);
}

// ---------------------------------------------------------------------------
// serve

int run_serve(const std::string& config_path) {
  eads::ServerConfig config = eads::load_config(config_path);

  std::filesystem::create_directories(config.data_dir);
  std::filesystem::path key_file = config.key_file;
  if (key_file.empty()) key_file = config.data_dir / "server.key";
  if (!std::filesystem::exists(key_file)) {
    // First boot: provision a signing key in place.
    eads::Bytes seed = eads::random_bytes(32);
    std::ofstream out(key_file, std::ios::trunc);
    out << eads::to_hex(eads::ByteSpan(seed)) << '\n';
    if (!out) throw std::runtime_error("cannot write " + key_file.string());
    out.close();
    std::filesystem::permissions(key_file,
                                 std::filesystem::perms::owner_read |
                                     std::filesystem::perms::owner_write);
  }
  const auto seed = eads::from_hex(trim_ws(read_text_file(key_file)));
  if (!seed || seed->size() != 32) {
    throw std::runtime_error("key file " + key_file.string() +
                             " must hold a 32-byte hex seed");
  }
  const eads::KeyPair keys =
      eads::ed25519().keypair_from_seed(eads::ByteSpan(*seed));
  {
    std::filesystem::path pub_file = key_file;
    pub_file += ".pub";
    std::ofstream out(pub_file, std::ios::trunc);
    out << eads::to_hex(eads::ByteSpan(keys.public_key)) << '\n';
  }

  eads::ServerOptions options;
  options.ledger_id = config.ledger_id;
  options.mode = config.mode == "map" ? eads::LedgerMode::kLogBackedMap
                                      : eads::LedgerMode::kLog;
  options.data_dir = config.data_dir;
  options.journal_path = config.journal_path;
  options.checkpoint_every_n_edits = config.checkpoint_every_n_edits;
  options.keys = keys;
  eads::LedgerServer ledger(std::move(options));

  eads::HttpFrontendOptions frontend_options;
  frontend_options.listen_address = config.listen_address;
  frontend_options.port = config.listen_port;
  frontend_options.token = config.token;
  frontend_options.admin_enabled = config.admin_enabled;
  eads::HttpFrontend frontend(ledger, frontend_options);
  const int port = frontend.start();

  std::cout << "listening on http://" << config.listen_address << ":" << port
            << "\n";
  std::cout << "ledger " << ledger.ledger_id() << " ("
            << (ledger.mode() == eads::LedgerMode::kLog ? "log" : "map")
            << " mode), version " << ledger.version() << "\n";
  std::cout << "public key " << eads::to_hex(eads::ByteSpan(keys.public_key))
            << "\n";
  std::cout << "journal " << ledger.journal_path().string() << "\n";
  std::cout.flush();

  std::signal(SIGINT, on_stop_signal);
  std::signal(SIGTERM, on_stop_signal);
  while (!g_stop_requested) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  frontend.stop();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// keygen

int run_keygen(const std::string& out_path) {
  const eads::Bytes seed = eads::random_bytes(32);
  const eads::KeyPair keys =
      eads::ed25519().keypair_from_seed(eads::ByteSpan(seed));

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << eads::to_hex(eads::ByteSpan(seed)) << '\n';
  out.close();
  std::filesystem::permissions(out_path,
                               std::filesystem::perms::owner_read |
                                   std::filesystem::perms::owner_write);

  std::ofstream pub(out_path + ".pub", std::ios::trunc);
  if (!pub) throw std::runtime_error("cannot write " + out_path + ".pub");
  pub << eads::to_hex(eads::ByteSpan(keys.public_key)) << '\n';

  std::cout << "public key " << eads::to_hex(eads::ByteSpan(keys.public_key))
            << "\n";
  std::cout << "seed written to " << out_path << " (mode 0600)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// append

std::filesystem::path checkpoint_cache_path(const std::string& state_dir,
                                            const std::string& ledger) {
  return std::filesystem::path(state_dir) / (ledger + ".checkpoint.json");
}

std::optional<eads::SignedCheckpoint> load_cached_checkpoint(
    const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  return eads::SignedCheckpoint::from_json(read_text_file(path));
}

void store_cached_checkpoint(const std::filesystem::path& path,
                             const eads::SignedCheckpoint& checkpoint) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  out << checkpoint.to_json() << '\n';
}

int run_append(const std::string& url, const std::string& token,
               const std::string& ledger, const std::string& entry_hex,
               const std::string& entry_text, const std::string& op_json,
               const std::string& ops_file, const std::string& state_dir,
               const std::string& pubkey_path, bool as_json) {
  std::vector<std::string> bodies;
  if (!ops_file.empty()) {
    const std::string text = read_text_file(ops_file);
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto eol = text.find('\n', pos);
      std::string line = text.substr(
          pos, eol == std::string::npos ? text.size() - pos : eol - pos);
      pos = eol == std::string::npos ? text.size() : eol + 1;
      if (!std::string_view(trim_ws(line)).empty()) {
        bodies.push_back(std::string(trim_ws(line)));
      }
    }
  } else if (!op_json.empty()) {
    bodies.push_back(op_json);
  } else if (!entry_hex.empty()) {
    if (!eads::from_hex(entry_hex)) {
      throw std::runtime_error("--entry must be lowercase hex");
    }
    bodies.push_back(json{{"entry", entry_hex}}.dump());
  } else if (!entry_text.empty()) {
    bodies.push_back(
        json{{"entry", eads::to_hex(eads::as_bytes(entry_text))}}.dump());
  } else {
    throw std::runtime_error(
        "provide one of --entry, --entry-text, --op or --ops-file");
  }

  eads::Bytes public_key;
  if (!pubkey_path.empty()) public_key = read_public_key(pubkey_path);

  const auto cache_path = checkpoint_cache_path(state_dir, ledger);
  std::optional<eads::SignedCheckpoint> cached =
      load_cached_checkpoint(cache_path);
  if (!cached) {
    // First contact: baseline from the server's current checkpoint, so the
    // very first append already verifies a consistency proof against it.
    const auto result = http_get(url + "/ledgers/" + ledger + "/checkpoint");
    if (result.status != 200) {
      std::cerr << http_error_text(result, "cannot fetch baseline checkpoint")
                << "\n";
      return kExitOperational;
    }
    cached = eads::SignedCheckpoint::from_json(result.body);
    if (!cached) {
      std::cerr << "baseline checkpoint does not parse\n";
      return kExitOperational;
    }
  }

  for (const std::string& body : bodies) {
    const auto result =
        http_post(url + "/ledgers/" + ledger + "/entries", token, body);
    if (result.status != 200) {
      std::cerr << http_error_text(result, "append rejected") << "\n";
      return kExitOperational;
    }
    const auto response = eads::AppendResponse::from_json(result.body);
    if (!response) {
      std::cerr << "append response does not parse\n";
      return kExitOperational;
    }
    const eads::SignedCheckpoint& next = response->checkpoint;
    if (!public_key.empty() &&
        !eads::verify_checkpoint(next, eads::ByteSpan(public_key))) {
      std::cerr << "checkpoint signature invalid at version " << next.version
                << "\n";
      return kExitVerifyFailed;
    }
    // The two-party user's check: the new digest must provably extend the
    // one we already hold.
    if (!eads::verify_consistency(cached->tree_size, cached->root,
                                  next.tree_size, next.root,
                                  response->consistency)) {
      std::cerr << "consistency verification FAILED: cached tree_size "
                << cached->tree_size << " root " << cached->root.to_hex()
                << " does not extend to tree_size " << next.tree_size
                << " root " << next.root.to_hex() << "\n";
      return kExitVerifyFailed;
    }
    cached = next;
    store_cached_checkpoint(cache_path, next);
    if (as_json) {
      std::cout << next.to_json() << "\n";
    } else {
      std::cout << "verified: version " << next.version << ", tree_size "
                << next.tree_size << ", root " << next.root.to_hex() << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// query

std::optional<eads::HistoryRecord> fetch_latest_record(
    const std::string& target, const std::string& session) {
  std::string text;
  if (target.rfind("http://", 0) == 0 || target.rfind("https://", 0) == 0) {
    const auto result = http_get(target, session);
    if (result.status != 200) {
      throw std::runtime_error(http_error_text(result, "journal fetch"));
    }
    text = result.body;
  } else {
    text = read_text_file(target);
  }
  // Accept either one record document (the /latest endpoint) or a whole
  // journal file, in which case the last line's record is the latest.
  if (auto record = eads::HistoryRecord::from_json(text)) return record;
  std::string last_line;
  std::istringstream lines{text};
  for (std::string line; std::getline(lines, line);) {
    if (!std::string_view(trim_ws(line)).empty()) last_line = line;
  }
  const auto envelope = json::parse(last_line, nullptr, false);
  if (!envelope.is_object() || !envelope.contains("record")) {
    return std::nullopt;
  }
  return eads::HistoryRecord::from_json(envelope["record"].dump());
}

int run_query(const std::string& url, const std::string& ledger,
              bool have_index, std::uint64_t index, const std::string& key_hex,
              const std::string& session, const std::string& journal_target,
              const std::string& pubkey_path, bool as_json) {
  std::string path;
  if (have_index) {
    path = url + "/ledgers/" + ledger + "/entries/" + std::to_string(index);
  } else if (!key_hex.empty()) {
    path = url + "/ledgers/" + ledger + "/map/" + key_hex;
  } else {
    throw std::runtime_error("provide --index or --key");
  }

  const auto result = http_get(path, session);
  if (result.status != 200) {
    std::cerr << http_error_text(result, "query rejected") << "\n";
    return kExitOperational;
  }
  const auto response = eads::QueryResponse::from_json(result.body);
  if (!response) {
    std::cerr << "query response does not parse\n";
    return kExitOperational;
  }
  const eads::SignedCheckpoint& checkpoint = response->checkpoint;

  if (!pubkey_path.empty()) {
    const eads::Bytes public_key = read_public_key(pubkey_path);
    if (!eads::verify_checkpoint(checkpoint, eads::ByteSpan(public_key))) {
      std::cerr << "checkpoint signature invalid\n";
      return kExitVerifyFailed;
    }
  }

  bool proof_ok = false;
  if (have_index) {
    proof_ok = response->entry && response->inclusion &&
               eads::verify_inclusion(eads::leaf_hash(*response->entry),
                                      index, checkpoint.tree_size,
                                      *response->inclusion, checkpoint.root);
  } else {
    const auto key = eads::from_hex(key_hex);
    proof_ok = key && response->map_proof && checkpoint.map_root &&
               eads::verify_map_proof(*checkpoint.map_root, eads::ByteSpan(*key),
                                      response->value, *response->map_proof);
  }
  if (!proof_ok) {
    std::cerr << "proof verification FAILED against checkpoint version "
              << checkpoint.version << "\n";
    return kExitVerifyFailed;
  }

  // Consumer/trusted-storage cross-check: the checkpoint the server answered
  // with must be the one trusted storage holds.
  const std::string target = journal_target.empty()
                                 ? url + "/journal/" + ledger + "/latest"
                                 : journal_target;
  const auto latest = fetch_latest_record(target, session);
  if (!latest) {
    std::cerr << "trusted-storage record does not parse\n";
    return kExitOperational;
  }
  if (!(latest->checkpoint == checkpoint)) {
    std::cerr << "checkpoint MISMATCH between server and trusted storage\n"
              << "  server:  version " << checkpoint.version << ", tree_size "
              << checkpoint.tree_size << ", root " << checkpoint.root.to_hex()
              << "\n  storage: version " << latest->checkpoint.version
              << ", tree_size " << latest->checkpoint.tree_size << ", root "
              << latest->checkpoint.root.to_hex() << "\n";
    return kExitVerifyFailed;
  }

  if (as_json) {
    std::cout << response->to_json() << "\n";
    return kExitOk;
  }
  if (have_index) {
    std::cout << "entry " << index << ": " << eads::to_hex(*response->entry)
              << "\n";
  } else if (response->value) {
    std::cout << "key " << key_hex << ": " << eads::to_hex(*response->value)
              << "\n";
  } else {
    std::cout << "key " << key_hex << ": absent (verified non-inclusion)\n";
  }
  std::cout << "verified against checkpoint version " << checkpoint.version
            << "; matches trusted storage\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// checkpoint

int run_checkpoint(const std::string& url, const std::string& ledger,
                   const std::string& session, const std::string& pubkey_path,
                   bool as_json) {
  const auto result =
      http_get(url + "/ledgers/" + ledger + "/checkpoint", session);
  if (result.status != 200) {
    std::cerr << http_error_text(result, "checkpoint fetch") << "\n";
    return kExitOperational;
  }
  const auto checkpoint = eads::SignedCheckpoint::from_json(result.body);
  if (!checkpoint) {
    std::cerr << "checkpoint does not parse\n";
    return kExitOperational;
  }
  if (!pubkey_path.empty()) {
    const eads::Bytes public_key = read_public_key(pubkey_path);
    if (!eads::verify_checkpoint(*checkpoint, eads::ByteSpan(public_key))) {
      std::cerr << "checkpoint signature invalid\n";
      return kExitVerifyFailed;
    }
  }
  if (as_json) {
    std::cout << checkpoint->to_json() << "\n";
  } else {
    std::cout << "ledger " << checkpoint->ledger_id << ", version "
              << checkpoint->version << ", tree_size " << checkpoint->tree_size
              << "\nroot " << checkpoint->root.to_hex() << "\n";
    if (checkpoint->map_root) {
      std::cout << "map root " << checkpoint->map_root->to_hex() << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// audit

int outcome_exit_code(eads::AuditOutcome outcome) {
  switch (outcome) {
    case eads::AuditOutcome::kConsistent:
      return kExitOk;
    case eads::AuditOutcome::kInconsistent:
      return kExitVerifyFailed;
    case eads::AuditOutcome::kForked:
      return kExitForked;
  }
  return kExitOperational;
}

int run_audit(const std::string& journal, const std::string& ledger,
              const std::string& pubkey_path, const std::string& session,
              bool as_json) {
  const eads::Bytes public_key = read_public_key(pubkey_path);
  auto source = make_journal_source(journal, session);
  const eads::AuditReport report =
      eads::audit(*source, ledger, eads::ByteSpan(public_key));
  std::cout << (as_json ? eads::render_report_json(report)
                        : eads::render_report_text(report));
  if (as_json) std::cout << "\n";
  return outcome_exit_code(report.overall);
}

int run_audit_cross(const std::string& journal_a, const std::string& journal_b,
                    const std::string& ledger, const std::string& pubkey_path,
                    bool as_json) {
  const eads::Bytes public_key = read_public_key(pubkey_path);
  auto source_a = make_journal_source(journal_a);
  auto source_b = make_journal_source(journal_b);
  const auto evidence =
      eads::audit_cross(*source_a, *source_b, ledger, eads::ByteSpan(public_key));
  std::cout << (as_json ? eads::render_fork_json(evidence)
                        : eads::render_fork_text(evidence));
  if (as_json) std::cout << "\n";
  return evidence ? kExitForked : kExitOk;
}

// ---------------------------------------------------------------------------
// scenario

int run_scenario_cmd(const std::string& name, std::uint64_t seed,
                     std::uint64_t ops, const std::string& workdir,
                     bool as_json) {
  const auto kind = eads::scenario_kind_from_string(name);
  if (!kind) {
    throw std::runtime_error(
        "scenario must be honest, rewrite, fork or truncate");
  }
  const std::filesystem::path run_dir =
      std::filesystem::path(workdir) / (name + "-" + std::to_string(seed));
  const eads::ScenarioResult result =
      eads::run_scenario(*kind, seed, ops, run_dir);

  if (as_json) {
    ordered_json out;
    out["kind"] = name;
    out["seed"] = seed;
    out["ops"] = ops;
    out["expected"] = eads::to_string(result.expected);
    out["observed"] = eads::to_string(result.observed);
    if (result.fork_evidence) {
      out["evidence_version"] = result.fork_evidence->second.version;
    } else {
      out["evidence_version"] = nullptr;
    }
    out["ok"] = result.flagged_correctly();
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "scenario " << name << " seed " << seed << ": expected "
              << eads::to_string(result.expected) << ", observed "
              << eads::to_string(result.observed);
    if (result.fork_evidence) {
      std::cout << " (evidence at version "
                << result.fork_evidence->second.version << ")";
    }
    std::cout << (result.flagged_correctly() ? " -> OK" : " -> MISMATCH")
              << "\n";
  }
  return result.flagged_correctly() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "eads -- externally auditable data structures: verifiable logs and "
      "maps with trusted-storage history audits"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // serve
  auto* serve = app.add_subcommand("serve", "run the ledger server");
  std::string serve_config = "eads.toml";
  serve->add_option("--config", serve_config, "configuration file")
      ->capture_default_str();
  serve->callback([&] { exit_code = run_serve(serve_config); });

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate a signing key pair");
  std::string keygen_out;
  keygen->add_option("--out", keygen_out, "seed output file")->required();
  keygen->callback([&] { exit_code = run_keygen(keygen_out); });

  // append
  auto* append = app.add_subcommand(
      "append", "append an entry or edit op, verifying the returned proof");
  std::string ap_url = "http://127.0.0.1:8080";
  std::string ap_token, ap_ledger = "ledger", ap_entry, ap_entry_text, ap_op,
              ap_ops_file, ap_state = ".eads-client", ap_pubkey;
  bool ap_json = false;
  append->add_option("--url", ap_url, "server base url")
      ->capture_default_str();
  append->add_option("--token", ap_token, "bearer token");
  append->add_option("--ledger", ap_ledger, "ledger id")
      ->capture_default_str();
  append->add_option("--entry", ap_entry, "entry bytes as lowercase hex");
  append->add_option("--entry-text", ap_entry_text, "entry bytes as text");
  append->add_option("--op", ap_op, "one edit op as canonical JSON");
  append->add_option("--ops-file", ap_ops_file,
                     "JSON Lines file of append bodies");
  append->add_option("--state-dir", ap_state,
                     "directory caching the last verified checkpoint")
      ->capture_default_str();
  append->add_option("--pubkey", ap_pubkey,
                     "hex public key file; also verify signatures");
  append->add_flag("--json", ap_json, "machine-readable output");
  append->callback([&] {
    exit_code = run_append(ap_url, ap_token, ap_ledger, ap_entry,
                           ap_entry_text, ap_op, ap_ops_file, ap_state,
                           ap_pubkey, ap_json);
  });

  // query
  auto* query = app.add_subcommand(
      "query", "query an entry or key, verifying proof and storage agreement");
  std::string q_url = "http://127.0.0.1:8080";
  std::string q_ledger = "ledger", q_key, q_session, q_journal, q_pubkey;
  std::uint64_t q_index = 0;
  bool q_json = false;
  query->add_option("--url", q_url, "server base url")->capture_default_str();
  query->add_option("--ledger", q_ledger, "ledger id")->capture_default_str();
  auto* q_index_opt =
      query->add_option("--index", q_index, "log entry index");
  query->add_option("--key", q_key, "map key as lowercase hex");
  query->add_option("--session", q_session, "client session token");
  query->add_option("--journal", q_journal,
                    "trusted-storage journal (path or url) to cross-check; "
                    "defaults to the server's /journal endpoint");
  query->add_option("--pubkey", q_pubkey,
                    "hex public key file; also verify signatures");
  query->add_flag("--json", q_json, "machine-readable output");
  query->callback([&] {
    exit_code =
        run_query(q_url, q_ledger, q_index_opt->count() > 0, q_index, q_key,
                  q_session, q_journal, q_pubkey, q_json);
  });

  // checkpoint
  auto* checkpoint =
      app.add_subcommand("checkpoint", "fetch the latest signed checkpoint");
  std::string cp_url = "http://127.0.0.1:8080";
  std::string cp_ledger = "ledger", cp_session, cp_pubkey;
  bool cp_json = false;
  checkpoint->add_option("--url", cp_url, "server base url")
      ->capture_default_str();
  checkpoint->add_option("--ledger", cp_ledger, "ledger id")
      ->capture_default_str();
  checkpoint->add_option("--session", cp_session, "client session token");
  checkpoint->add_option("--pubkey", cp_pubkey,
                         "hex public key file; also verify signature");
  checkpoint->add_flag("--json", cp_json, "machine-readable output");
  checkpoint->callback([&] {
    exit_code =
        run_checkpoint(cp_url, cp_ledger, cp_session, cp_pubkey, cp_json);
  });

  // audit (+ audit cross)
  auto* audit_cmd = app.add_subcommand(
      "audit", "verify a ledger's published history from trusted storage");
  std::string au_journal, au_ledger = "ledger", au_pubkey, au_session;
  bool au_json = false;
  audit_cmd->add_option("--journal", au_journal, "journal path or url");
  audit_cmd->add_option("--ledger", au_ledger, "ledger id")
      ->capture_default_str();
  audit_cmd->add_option("--pubkey", au_pubkey, "hex public key file");
  audit_cmd->add_option("--session", au_session,
                        "session token forwarded to http journal fetches");
  audit_cmd->add_flag("--json", au_json, "machine-readable output");

  auto* cross = audit_cmd->add_subcommand(
      "cross", "compare two storage views of one ledger for forks");
  std::string cx_a, cx_b, cx_ledger = "ledger", cx_pubkey;
  bool cx_json = false;
  cross->add_option("--journal-a", cx_a, "first journal path or url")
      ->required();
  cross->add_option("--journal-b", cx_b, "second journal path or url")
      ->required();
  cross->add_option("--ledger", cx_ledger, "ledger id")
      ->capture_default_str();
  cross->add_option("--pubkey", cx_pubkey, "hex public key file")->required();
  cross->add_flag("--json", cx_json, "machine-readable output");

  audit_cmd->callback([&] {
    if (cross->parsed()) {
      exit_code = run_audit_cross(cx_a, cx_b, cx_ledger, cx_pubkey, cx_json);
      return;
    }
    if (au_journal.empty() || au_pubkey.empty()) {
      throw CLI::ValidationError("audit", "--journal and --pubkey required");
    }
    exit_code =
        run_audit(au_journal, au_ledger, au_pubkey, au_session, au_json);
  });

  // scenario
  auto* scenario = app.add_subcommand(
      "scenario", "replay a scripted end-to-end run and audit it");
  std::string sc_name;
  std::uint64_t sc_seed = 1, sc_ops = 200;
  std::string sc_workdir = "scenario-runs";
  bool sc_json = false;
  scenario
      ->add_option("--name", sc_name, "honest | rewrite | fork | truncate")
      ->required();
  scenario->add_option("--seed", sc_seed, "deterministic seed")
      ->capture_default_str();
  scenario->add_option("--ops", sc_ops, "number of edits")
      ->capture_default_str();
  scenario->add_option("--workdir", sc_workdir, "scratch directory")
      ->capture_default_str();
  scenario->add_flag("--json", sc_json, "machine-readable output");
  scenario->callback([&] {
    exit_code = run_scenario_cmd(sc_name, sc_seed, sc_ops, sc_workdir, sc_json);
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperational;
  }
  return exit_code;
}
