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
#include "eads/sparse_map.hpp"

namespace eads {

// One map edit. Canonical serialization is JSON with the fields in the
// fixed order kind, key, value (hex-encoded bytes, empty value for DELETE),
// so the logged bytes are deterministic across encoders.
struct EditOp {
  enum class Kind { kPut, kDelete };

  Kind kind = Kind::kPut;
  Bytes key;
  Bytes value;  // empty for DELETE

  static EditOp put(ByteSpan key, ByteSpan value);
  static EditOp del(ByteSpan key);

  friend bool operator==(const EditOp&, const EditOp&) = default;

  Bytes canonical_bytes() const;
  static std::optional<EditOp> parse(std::string_view text);
};

// Couples the edit log version with the map state it produces. map_root is
// the root of the map obtained by replaying the first log_size ops onto an
// empty map.
struct CombinedDigest {
  std::uint64_t log_size = 0;
  Hash log_root{};
  Hash map_root{};

  friend bool operator==(const CombinedDigest&, const CombinedDigest&) =
      default;
};

// Verifiable map whose every edit is first recorded in a verifiable log.
// The log gives order-sensitive, consistency-provable history; the map
// gives keyed lookups with (non-)inclusion proofs; the combined digest
// binds the two at the same version.
class LogBackedMap {
 public:
  LogBackedMap() = default;

  CombinedDigest apply_edit(const EditOp& op);
  CombinedDigest digest() const;

  const VerifiableLog& log() const { return log_; }
  VerifiableLog& log() { return log_; }
  const SparseMap& map() const { return map_; }

 private:
  VerifiableLog log_;
  SparseMap map_;
};

// Data-exposing internal audit: rebuilds log and map from the op plaintext
// and compares against the claimed digest. The external audit path never
// sees ops; it relies on the log's consistency proofs instead.
bool replay_verify(const std::vector<EditOp>& ops,
                   const CombinedDigest& claimed);

// Parses a JSON Lines edit script (one canonical op per line). Returns
// nullopt if any line fails to parse.
std::optional<std::vector<EditOp>> parse_edit_script(std::string_view text);

}  // namespace eads
