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
#include <optional>
#include <string>
#include <vector>

#include "eads/merkle_log.hpp"
#include "eads/signature.hpp"

namespace eads {

// One published data structure version: root hash, sizes, timestamp and the
// source's signature over the canonical byte template. The canonical bytes
// are the only signed payload, so JSON re-encoding cannot break
// verification.
struct SignedCheckpoint {
  std::string ledger_id;
  std::uint64_t version = 0;    // monotone edit counter
  std::uint64_t tree_size = 0;  // log size at publication
  Hash root{};
  std::optional<Hash> map_root;  // present in log-backed-map mode
  std::int64_t timestamp_ms = 0;
  Signature signature;

  friend bool operator==(const SignedCheckpoint&, const SignedCheckpoint&) =
      default;

  std::string to_json() const;
  static std::optional<SignedCheckpoint> from_json(std::string_view text);
};

// The newline-delimited payload the checkpoint signature covers.
Bytes canonical_checkpoint_bytes(const std::string& ledger_id,
                                 std::uint64_t version,
                                 std::uint64_t tree_size, const Hash& root,
                                 const std::optional<Hash>& map_root,
                                 std::int64_t timestamp_ms);

SignedCheckpoint make_checkpoint(const std::string& ledger_id,
                                 std::uint64_t version,
                                 std::uint64_t tree_size, const Hash& root,
                                 const std::optional<Hash>& map_root,
                                 std::int64_t timestamp_ms, ByteSpan secret,
                                 const SignatureScheme& scheme = ed25519());

bool verify_checkpoint(const SignedCheckpoint& checkpoint, ByteSpan public_key,
                       const SignatureScheme& scheme = ed25519());

// One trusted-storage entry: a checkpoint plus the consistency proof from
// the previously published one. Data-devoid by construction -- hashes,
// sizes, ids, timestamps and a signature; never entry bytes.
struct HistoryRecord {
  SignedCheckpoint checkpoint;
  std::optional<std::uint64_t> prev_version;  // absent only for genesis
  std::optional<ConsistencyProof> consistency;

  friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;

  std::string to_json() const;
  static std::optional<HistoryRecord> from_json(std::string_view text);
};

enum class LinkVerdict {
  kOk,
  kBadSignature,
  kSizeRegression,
  kProofInvalid,
  kVersionGap,
  kDecodeError,
};

std::string to_string(LinkVerdict verdict);

struct LinkResult {
  std::uint64_t from_version = 0;
  std::uint64_t to_version = 0;
  LinkVerdict verdict = LinkVerdict::kOk;
  std::string detail;
};

// Two validly signed checkpoints that claim the same version (or the same
// tree size) with different roots: cryptographic evidence of a rewritten
// history.
struct ForkEvidence {
  SignedCheckpoint first;
  SignedCheckpoint second;
};

enum class AuditOutcome { kConsistent, kInconsistent, kForked };

std::string to_string(AuditOutcome outcome);

struct AuditReport {
  std::string ledger_id;
  std::uint64_t records_checked = 0;
  bool genesis_ok = true;
  std::string genesis_detail;
  std::vector<LinkResult> links;  // one verdict per adjacent record pair
  std::optional<ForkEvidence> fork_evidence;
  AuditOutcome overall = AuditOutcome::kConsistent;
};

// Checks every adjacent pair of records: checkpoint signatures, version and
// size monotonicity, record linkage, and the consistency proof between the
// two roots. Adjacent consistency extends to every version pair by
// transitivity. An empty record list is vacuously consistent.
AuditReport verify_chain(const std::vector<HistoryRecord>& records,
                         ByteSpan public_key,
                         const SignatureScheme& scheme = ed25519());

// Compares two individually chain-valid record lists for the same ledger
// and returns the earliest conflicting checkpoint pair, or nullopt when one
// list is a prefix-consistent extension of the other. Throws
// std::invalid_argument on ledger id mismatch.
std::optional<ForkEvidence> detect_fork(
    const std::vector<HistoryRecord>& records_a,
    const std::vector<HistoryRecord>& records_b);

}  // namespace eads
