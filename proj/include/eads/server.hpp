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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>

#include "eads/clock.hpp"
#include "eads/history.hpp"
#include "eads/journal.hpp"
#include "eads/log_backed_map.hpp"
#include "eads/merkle_log.hpp"
#include "eads/signature.hpp"
#include "eads/sparse_map.hpp"

namespace eads {

enum class LedgerMode { kLog, kLogBackedMap };

// Adversary switches for the test harness. An honest deployment never
// leaves AdversaryNone; the others let scenarios exercise exactly the
// misbehavior the audit pipeline must catch.
struct AdversaryNone {};
// Overwrites the stored entry at `index` and silently recomputes the tree.
struct AdversaryRewriteLeaf {
  std::uint64_t index = 0;
  Bytes entry;
};
// From version `version` on, maintains a second branch whose entry
// version-1 has been rewritten, publishing it to a separate journal and
// serving it to half of the client sessions (split view).
struct AdversaryForkAfter {
  std::uint64_t version = 0;
};
// Drops all entries beyond `size` while the edit counter keeps running.
struct AdversaryTruncate {
  std::uint64_t size = 0;
};
using AdversaryMode = std::variant<AdversaryNone, AdversaryRewriteLeaf,
                                   AdversaryForkAfter, AdversaryTruncate>;

// Edit acknowledgment: the latest published checkpoint plus the consistency
// proof linking it to the previously published one. Clients verify the
// proof against their cached checkpoint before trusting the new one.
struct AppendResponse {
  SignedCheckpoint checkpoint;
  ConsistencyProof consistency;

  std::string to_json() const;
  static std::optional<AppendResponse> from_json(std::string_view text);
};

// Query answer. Log queries fill entry + inclusion; map queries fill
// value (absent for non-inclusion) + map_proof. Both carry the checkpoint
// the proof verifies against.
struct QueryResponse {
  std::optional<Bytes> entry;
  std::optional<InclusionProof> inclusion;
  std::optional<Bytes> value;
  std::optional<MapProof> map_proof;
  SignedCheckpoint checkpoint;

  std::string to_json() const;
  static std::optional<QueryResponse> from_json(std::string_view text);
};

struct ServerOptions {
  std::string ledger_id = "ledger";
  LedgerMode mode = LedgerMode::kLog;
  std::filesystem::path data_dir = "data";
  // Defaults to <data_dir>/<ledger_id>.journal.jsonl when empty.
  std::filesystem::path journal_path;
  // Publish a checkpoint every n-th edit; 1 publishes on every edit.
  std::uint64_t checkpoint_every_n_edits = 1;
  // The reference deployment fuses source and server: the server holds the
  // signing key and signs checkpoints itself.
  KeyPair keys;
  Clock clock = system_clock();
};

// The untrusted server of the two-party model: executes edits and queries,
// returns proofs, and publishes every checkpoint to the trusted-storage
// journal BEFORE acknowledging the edit, so each acknowledged edit is
// auditable even if the server dies on the way back to the client.
//
// Edits are serialized through one writer lock per instance; queries run
// concurrently and are always answered against the latest published
// checkpoint, never unpublished state.
//
// Session routing: queries and checkpoint fetches carry an opaque client
// session token. Under AdversaryForkAfter, sessions whose token has an odd
// byte sum are served the forked branch; everyone else sees the main
// branch. Deterministic, so scenarios can place observers on either side of
// the split view.
class LedgerServer {
 public:
  // Opens or creates the ledger under options.data_dir. On restart,
  // reloads the entry file and the journal, drops any entry tail that was
  // never published (the edit was never acknowledged), and refuses to start
  // if the persisted entries cannot reproduce the published root.
  explicit LedgerServer(ServerOptions options);

  // Log-mode append of raw entry bytes.
  AppendResponse handle_append(ByteSpan entry);
  // Map-mode edit; the canonical op bytes are what the log records.
  AppendResponse handle_append(const EditOp& op);

  // Entry + inclusion proof for `index` within the published snapshot.
  // Throws std::out_of_range for indexes at or past the published size.
  QueryResponse handle_query_index(std::uint64_t index,
                                   std::string_view session = {}) const;
  // Map lookup with (non-)inclusion proof; log-backed-map mode only.
  QueryResponse handle_query_key(ByteSpan key,
                                 std::string_view session = {}) const;

  SignedCheckpoint handle_checkpoint(std::string_view session = {}) const;

  // REWRITE_LEAF and TRUNCATE apply immediately. FORK_AFTER(v) arms a fork
  // that activates when version v is reached (or immediately if it already
  // has); v must be >= 1 and not already behind the published history.
  // AdversaryNone stops any fork dual-writing.
  void set_adversary(const AdversaryMode& mode);

  const std::string& ledger_id() const { return options_.ledger_id; }
  LedgerMode mode() const { return options_.mode; }
  const Bytes& public_key() const { return options_.keys.public_key; }
  std::uint64_t version() const;

  // Trusted-storage surface: path of the journal a given session is shown.
  std::filesystem::path journal_path(std::string_view session = {}) const;
  std::optional<HistoryRecord> journal_latest(
      std::string_view session = {}) const;
  bool fork_active() const;

  // Test hook, called with the just-published version after the journal
  // append and before the append response is returned. Throwing from it
  // simulates a crash in that window.
  void set_after_publish_hook(std::function<void(std::uint64_t)> hook);

 private:
  struct Branch {
    VerifiableLog log;
    SparseMap map;            // log-backed-map mode only
    SparseMap published_map;  // map snapshot at the last publication
    std::uint64_t version = 0;
    SignedCheckpoint checkpoint;       // last published
    ConsistencyProof consistency;      // proof published with it
    std::unique_ptr<Journal> journal;
    std::filesystem::path journal_file;
  };

  AppendResponse do_append(Bytes entry, const EditOp* op);
  void publish(Branch& branch, std::uint64_t new_version);
  void create_fork_branch();
  void rebuild_map_from_log(Branch& branch) const;
  const Branch& branch_for(std::string_view session) const;
  std::filesystem::path entries_file() const;
  void rewrite_entries_file();

  ServerOptions options_;
  Branch main_;
  std::unique_ptr<Branch> fork_;
  std::optional<std::uint64_t> pending_fork_version_;
  std::ofstream entries_out_;
  std::function<void(std::uint64_t)> after_publish_hook_;
  mutable std::shared_mutex mutex_;
};

// Branch selector used for fork routing: true when the session token's
// byte sum is odd.
bool session_routes_to_fork(std::string_view session);

}  // namespace eads
