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

#include "eads/server.hpp"

#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace eads {

namespace {

using ordered_json = nlohmann::ordered_json;

bool valid_ledger_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void apply_op(SparseMap& map, const EditOp& op) {
  if (op.kind == EditOp::Kind::kPut) {
    map.put(op.key, op.value);
  } else {
    map.erase(op.key);
  }
}

void restore_binding(SparseMap& map, const Hash& key_hash,
                     const std::optional<Bytes>& old_value) {
  if (old_value) {
    map.put_hashed(key_hash, *old_value);
  } else {
    map.erase_hashed(key_hash);
  }
}

// A plausible rewritten entry for the fork branch: in map mode a parseable
// op with a different value (so the branch still replays), otherwise a
// one-bit perturbation.
Bytes perturb_entry(const Bytes& entry, LedgerMode mode) {
  if (mode == LedgerMode::kLogBackedMap) {
    auto op = EditOp::parse(std::string_view(
        reinterpret_cast<const char*>(entry.data()), entry.size()));
    if (op) {
      EditOp other = *op;
      if (other.kind == EditOp::Kind::kDelete) {
        other = EditOp::put(other.key, Bytes{0xfe});
      } else {
        other.value.push_back(0xfe);
      }
      return other.canonical_bytes();
    }
  }
  Bytes out = entry;
  if (out.empty()) {
    out.push_back(0xfe);
  } else {
    out[0] ^= 0x01;
  }
  return out;
}

}  // namespace

bool session_routes_to_fork(std::string_view session) {
  unsigned sum = 0;
  for (unsigned char c : session) sum += c;
  return (sum & 1) != 0;
}

std::string AppendResponse::to_json() const {
  ordered_json out;
  out["checkpoint"] = ordered_json::parse(checkpoint.to_json());
  out["consistency"] = ordered_json::parse(consistency.to_json());
  return out.dump();
}

std::optional<AppendResponse> AppendResponse::from_json(std::string_view text) {
  const auto parsed = nlohmann::json::parse(text, nullptr, false);
  if (!parsed.is_object() || parsed.size() != 2 ||
      !parsed.contains("checkpoint") || !parsed.contains("consistency")) {
    return std::nullopt;
  }
  auto checkpoint = SignedCheckpoint::from_json(parsed["checkpoint"].dump());
  auto consistency = ConsistencyProof::from_json(parsed["consistency"].dump());
  if (!checkpoint || !consistency) return std::nullopt;
  return AppendResponse{std::move(*checkpoint), std::move(*consistency)};
}

std::string QueryResponse::to_json() const {
  ordered_json out;
  if (entry) {
    out["entry"] = to_hex(*entry);
    out["inclusion"] = ordered_json::parse(inclusion->to_json());
  } else {
    if (value) {
      out["value"] = to_hex(*value);
    } else {
      out["value"] = nullptr;
    }
    out["map_proof"] = ordered_json::parse(map_proof->to_json());
  }
  out["checkpoint"] = ordered_json::parse(checkpoint.to_json());
  return out.dump();
}

std::optional<QueryResponse> QueryResponse::from_json(std::string_view text) {
  const auto parsed = nlohmann::json::parse(text, nullptr, false);
  if (!parsed.is_object() || parsed.size() != 3 ||
      !parsed.contains("checkpoint")) {
    return std::nullopt;
  }
  QueryResponse out;
  auto checkpoint = SignedCheckpoint::from_json(parsed["checkpoint"].dump());
  if (!checkpoint) return std::nullopt;
  out.checkpoint = std::move(*checkpoint);
  if (parsed.contains("entry")) {
    if (!parsed.contains("inclusion") || !parsed["entry"].is_string()) {
      return std::nullopt;
    }
    auto entry_bytes = from_hex(parsed["entry"].get<std::string>());
    auto proof = InclusionProof::from_json(parsed["inclusion"].dump());
    if (!entry_bytes || !proof) return std::nullopt;
    out.entry = std::move(*entry_bytes);
    out.inclusion = std::move(*proof);
    return out;
  }
  if (!parsed.contains("value") || !parsed.contains("map_proof")) {
    return std::nullopt;
  }
  if (parsed["value"].is_string()) {
    auto value_bytes = from_hex(parsed["value"].get<std::string>());
    if (!value_bytes) return std::nullopt;
    out.value = std::move(*value_bytes);
  } else if (!parsed["value"].is_null()) {
    return std::nullopt;
  }
  auto proof = MapProof::from_json(parsed["map_proof"].dump());
  if (!proof) return std::nullopt;
  out.map_proof = std::move(*proof);
  return out;
}

LedgerServer::LedgerServer(ServerOptions options)
    : options_(std::move(options)) {
  if (!valid_ledger_id(options_.ledger_id)) {
    throw std::invalid_argument("ledger id must match [A-Za-z0-9._-]{1,64}");
  }
  if (options_.checkpoint_every_n_edits == 0) {
    throw std::invalid_argument("checkpoint cadence must be >= 1");
  }
  if (options_.keys.secret.empty() || options_.keys.public_key.empty()) {
    throw std::invalid_argument("server requires a signing key pair");
  }
  if (!options_.clock) options_.clock = system_clock();

  std::filesystem::create_directories(options_.data_dir);
  if (options_.journal_path.empty()) {
    options_.journal_path =
        options_.data_dir / (options_.ledger_id + ".journal.jsonl");
  }
  main_.journal_file = options_.journal_path;
  main_.journal = std::make_unique<Journal>(main_.journal_file);

  const auto entries = entries_file();
  if (std::filesystem::exists(entries)) {
    main_.log = VerifiableLog::load(entries);
  }

  const auto latest = main_.journal->latest(options_.ledger_id);
  if (!latest) {
    if (main_.log.size() != 0) {
      // Entries that were never published were never acknowledged either;
      // drop them rather than publish edits nobody asked for.
      main_.log.tamper_truncate(0);
      main_.log.save(entries);
    }
    SignedCheckpoint genesis = make_checkpoint(
        options_.ledger_id, 0, 0, empty_log_root(),
        options_.mode == LedgerMode::kLogBackedMap
            ? std::optional<Hash>(main_.map.root())
            : std::nullopt,
        options_.clock(), options_.keys.secret);
    main_.journal->append(
        HistoryRecord{genesis, std::nullopt, std::nullopt});
    main_.checkpoint = std::move(genesis);
    main_.consistency = ConsistencyProof{0, 0, {}};
  } else {
    const SignedCheckpoint& published = latest->checkpoint;
    if (main_.log.size() < published.tree_size) {
      throw std::runtime_error("entry file is behind the published history");
    }
    if (main_.log.size() > published.tree_size) {
      main_.log.tamper_truncate(published.tree_size);
      main_.log.save(entries);
    }
    if (!(main_.log.root() == published.root)) {
      throw std::runtime_error(
          "entry file does not reproduce the published root");
    }
    main_.version = published.version;
    main_.checkpoint = published;
    main_.consistency =
        latest->consistency.value_or(ConsistencyProof{0, 0, {}});
    if (options_.mode == LedgerMode::kLogBackedMap) {
      rebuild_map_from_log(main_);
      if (!published.map_root || !(main_.map.root() == *published.map_root)) {
        throw std::runtime_error(
            "entry file does not reproduce the published map root");
      }
    }
  }
  if (options_.mode == LedgerMode::kLogBackedMap) {
    main_.published_map = main_.map.clone();
  }

  entries_out_.open(entries, std::ios::app);
  if (!entries_out_) {
    throw std::runtime_error("cannot open entry file for append: " +
                             entries.string());
  }
}

std::filesystem::path LedgerServer::entries_file() const {
  return options_.data_dir / (options_.ledger_id + ".entries");
}

void LedgerServer::rewrite_entries_file() {
  entries_out_.close();
  main_.log.save(entries_file());
  entries_out_.open(entries_file(), std::ios::app);
}

AppendResponse LedgerServer::handle_append(ByteSpan entry) {
  if (options_.mode != LedgerMode::kLog) {
    throw std::invalid_argument(
        "raw entries are log-mode only; send an edit op");
  }
  return do_append(Bytes(entry.begin(), entry.end()), nullptr);
}

AppendResponse LedgerServer::handle_append(const EditOp& op) {
  if (options_.mode != LedgerMode::kLogBackedMap) {
    throw std::invalid_argument(
        "edit ops are log-backed-map mode only; send raw entry bytes");
  }
  return do_append(op.canonical_bytes(), &op);
}

AppendResponse LedgerServer::do_append(Bytes entry, const EditOp* op) {
  std::unique_lock lock(mutex_);
  const std::uint64_t next_version = main_.version + 1;

  // Captured before the edit so a journal conflict can undo it.
  std::optional<Hash> edited_key;
  std::optional<Bytes> prior_value;
  if (op != nullptr) {
    edited_key = sha256(op->key);
    auto it = main_.map.bindings().find(*edited_key);
    if (it != main_.map.bindings().end()) prior_value = it->second;
  }

  main_.log.append(entry);
  entries_out_ << to_hex(entry) << '\n';
  entries_out_.flush();
  if (op != nullptr) apply_op(main_.map, *op);
  if (fork_) {
    fork_->log.append(entry);
    if (op != nullptr) apply_op(fork_->map, *op);
  }

  const bool boundary =
      next_version % options_.checkpoint_every_n_edits == 0;
  if (boundary) {
    try {
      publish(main_, next_version);
    } catch (const JournalConflictError&) {
      // Nothing published, so nothing may stay acknowledged: undo the edit.
      main_.log.tamper_truncate(main_.log.size() - 1);
      rewrite_entries_file();
      if (edited_key) restore_binding(main_.map, *edited_key, prior_value);
      if (fork_) {
        fork_->log.tamper_truncate(fork_->log.size() - 1);
        if (edited_key) restore_binding(fork_->map, *edited_key, prior_value);
      }
      throw;
    }
    if (fork_) publish(*fork_, next_version);
  }
  main_.version = next_version;
  if (fork_) fork_->version = next_version;
  if (pending_fork_version_ && !fork_ &&
      main_.version == *pending_fork_version_) {
    create_fork_branch();
  }
  if (boundary && after_publish_hook_) after_publish_hook_(next_version);
  return AppendResponse{main_.checkpoint, main_.consistency};
}

void LedgerServer::publish(Branch& branch, std::uint64_t new_version) {
  const SignedCheckpoint prev = branch.checkpoint;
  const std::uint64_t new_size = branch.log.size();
  SignedCheckpoint next = make_checkpoint(
      options_.ledger_id, new_version, new_size, branch.log.root(),
      options_.mode == LedgerMode::kLogBackedMap
          ? std::optional<Hash>(branch.map.root())
          : std::nullopt,
      options_.clock(), options_.keys.secret);
  ConsistencyProof proof;
  if (prev.tree_size <= new_size) {
    proof = branch.log.consistency_proof(prev.tree_size, new_size);
  } else {
    // After a truncation no honest proof exists from the larger published
    // tree to the smaller one; this server publishes an empty claim.
    proof = ConsistencyProof{prev.tree_size, new_size, {}};
  }
  branch.journal->append(HistoryRecord{next, prev.version, proof});
  branch.checkpoint = std::move(next);
  branch.consistency = std::move(proof);
  if (options_.mode == LedgerMode::kLogBackedMap) {
    branch.published_map = branch.map.clone();
  }
}

void LedgerServer::rebuild_map_from_log(Branch& branch) const {
  branch.map = SparseMap{};
  for (std::uint64_t i = 0; i < branch.log.size(); ++i) {
    const Bytes& bytes = branch.log.entry(i);
    auto op = EditOp::parse(std::string_view(
        reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    if (!op) continue;  // tampered op bytes: nothing sane to replay
    apply_op(branch.map, *op);
  }
}

void LedgerServer::create_fork_branch() {
  const std::uint64_t fork_version = *pending_fork_version_;
  pending_fork_version_.reset();

  std::vector<HistoryRecord> prefix;
  for (auto& record : main_.journal->read_all(options_.ledger_id)) {
    if (record.checkpoint.version < fork_version) {
      prefix.push_back(std::move(record));
    }
  }
  if (prefix.empty()) {
    throw std::logic_error("fork branch requires a published prefix");
  }

  auto branch = std::make_unique<Branch>();
  branch->journal_file = main_.journal_file;
  branch->journal_file += ".fork";
  std::filesystem::remove(branch->journal_file);
  branch->journal = std::make_unique<Journal>(branch->journal_file);
  for (const auto& record : prefix) branch->journal->append(record);

  branch->log = main_.log;
  branch->log.tamper_rewrite(
      fork_version - 1,
      perturb_entry(branch->log.entry(fork_version - 1), options_.mode));
  branch->version = fork_version;
  branch->checkpoint = prefix.back().checkpoint;
  if (options_.mode == LedgerMode::kLogBackedMap) {
    rebuild_map_from_log(*branch);
  }
  fork_ = std::move(branch);
  publish(*fork_, fork_version);
}

void LedgerServer::set_adversary(const AdversaryMode& mode) {
  std::unique_lock lock(mutex_);
  if (std::holds_alternative<AdversaryNone>(mode)) {
    fork_.reset();
    pending_fork_version_.reset();
    return;
  }
  if (const auto* rewrite = std::get_if<AdversaryRewriteLeaf>(&mode)) {
    if (rewrite->index >= main_.log.size()) {
      throw std::invalid_argument("rewrite index out of range");
    }
    main_.log.tamper_rewrite(rewrite->index, rewrite->entry);
    rewrite_entries_file();
    return;
  }
  if (const auto* truncate = std::get_if<AdversaryTruncate>(&mode)) {
    if (truncate->size > main_.log.size()) {
      throw std::invalid_argument("truncate size exceeds the log");
    }
    main_.log.tamper_truncate(truncate->size);
    rewrite_entries_file();
    if (options_.mode == LedgerMode::kLogBackedMap) {
      rebuild_map_from_log(main_);
    }
    return;
  }
  const auto& fork = std::get<AdversaryForkAfter>(mode);
  if (fork.version < 1) {
    throw std::invalid_argument("fork version must be >= 1");
  }
  if (fork.version < main_.version) {
    throw std::invalid_argument("fork point already passed");
  }
  pending_fork_version_ = fork.version;
  if (main_.version == fork.version) create_fork_branch();
}

const LedgerServer::Branch& LedgerServer::branch_for(
    std::string_view session) const {
  if (fork_ && session_routes_to_fork(session)) return *fork_;
  return main_;
}

QueryResponse LedgerServer::handle_query_index(std::uint64_t index,
                                               std::string_view session) const {
  std::shared_lock lock(mutex_);
  const Branch& branch = branch_for(session);
  const SignedCheckpoint& checkpoint = branch.checkpoint;
  if (index >= checkpoint.tree_size) {
    throw std::out_of_range("index is past the published snapshot");
  }
  if (checkpoint.tree_size > branch.log.size()) {
    throw std::runtime_error("published snapshot is not servable");
  }
  QueryResponse out;
  out.entry = branch.log.entry(index);
  out.inclusion = branch.log.inclusion_proof(index, checkpoint.tree_size);
  out.checkpoint = checkpoint;
  return out;
}

QueryResponse LedgerServer::handle_query_key(ByteSpan key,
                                             std::string_view session) const {
  if (options_.mode != LedgerMode::kLogBackedMap) {
    throw std::invalid_argument("key queries are log-backed-map mode only");
  }
  std::shared_lock lock(mutex_);
  const Branch& branch = branch_for(session);
  auto [value, proof] = branch.published_map.get_with_proof(key);
  QueryResponse out;
  out.value = std::move(value);
  out.map_proof = std::move(proof);
  out.checkpoint = branch.checkpoint;
  return out;
}

SignedCheckpoint LedgerServer::handle_checkpoint(
    std::string_view session) const {
  std::shared_lock lock(mutex_);
  return branch_for(session).checkpoint;
}

std::uint64_t LedgerServer::version() const {
  std::shared_lock lock(mutex_);
  return main_.version;
}

std::filesystem::path LedgerServer::journal_path(
    std::string_view session) const {
  std::shared_lock lock(mutex_);
  return branch_for(session).journal_file;
}

std::optional<HistoryRecord> LedgerServer::journal_latest(
    std::string_view session) const {
  std::shared_lock lock(mutex_);
  return branch_for(session).journal->latest(options_.ledger_id);
}

bool LedgerServer::fork_active() const {
  std::shared_lock lock(mutex_);
  return fork_ != nullptr;
}

void LedgerServer::set_after_publish_hook(
    std::function<void(std::uint64_t)> hook) {
  std::unique_lock lock(mutex_);
  after_publish_hook_ = std::move(hook);
}

}  // namespace eads
