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
#include <optional>
#include <string>
#include <vector>

#include "eads/hash.hpp"

namespace eads {

// Hash path from a leaf to the root of a tree snapshot. Carries hashes
// only -- never entry bytes.
struct InclusionProof {
  std::uint64_t leaf_index = 0;
  std::uint64_t tree_size = 0;
  std::vector<Hash> path;  // leaf-adjacent sibling first

  friend bool operator==(const InclusionProof&, const InclusionProof&) =
      default;

  std::string to_json() const;
  static std::optional<InclusionProof> from_json(std::string_view text);
};

// Proof that the size-new_size tree extends the size-old_size tree.
// Empty node list iff old_size == new_size or old_size == 0.
struct ConsistencyProof {
  std::uint64_t old_size = 0;
  std::uint64_t new_size = 0;
  std::vector<Hash> nodes;

  friend bool operator==(const ConsistencyProof&, const ConsistencyProof&) =
      default;

  std::string to_json() const;
  static std::optional<ConsistencyProof> from_json(std::string_view text);
};

// Append-only Merkle tree over an ordered list of byte entries.
// Tree hashing follows the certificate-transparency construction:
//   MTH({})   = SHA-256("")
//   MTH({d})  = leaf_hash(d)
//   MTH(D[n]) = node_hash(MTH(D[0:k]), MTH(D[k:n])), k = largest power of
//               two strictly below n.
//
// Single writer, any number of concurrent readers. Every root a prefix ever
// had stays reachable through root_at().
class VerifiableLog {
 public:
  VerifiableLog() = default;

  std::uint64_t size() const { return entries_.size(); }

  // Returns (new size, new root).
  std::pair<std::uint64_t, Hash> append(ByteSpan entry);

  Hash root() const { return root_at(size()); }

  // Root of the first `size` entries. Throws std::out_of_range when size
  // exceeds the log.
  Hash root_at(std::uint64_t size) const;

  // Audit path for entry leaf_index within the size-tree_size snapshot.
  // Requires leaf_index < tree_size <= size().
  InclusionProof inclusion_proof(std::uint64_t leaf_index,
                                 std::uint64_t tree_size) const;

  // Proof that the snapshot at new_size extends the one at old_size.
  // Requires old_size <= new_size <= size().
  ConsistencyProof consistency_proof(std::uint64_t old_size,
                                     std::uint64_t new_size) const;

  const Bytes& entry(std::uint64_t index) const;

  // Test-harness hooks for the adversarial server: a real log never does
  // this. Both invalidate previously published roots.
  void tamper_rewrite(std::uint64_t index, ByteSpan entry);
  void tamper_truncate(std::uint64_t size);

  // Persistence: one lowercase-hex entry per line, append-only.
  static VerifiableLog load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

 private:
  Hash range_hash(std::uint64_t begin, std::uint64_t end) const;
  void path_nodes(std::uint64_t index, std::uint64_t begin, std::uint64_t end,
                  std::vector<Hash>& out) const;
  void subproof_nodes(std::uint64_t old_size, std::uint64_t begin,
                      std::uint64_t end, bool old_root_known,
                      std::vector<Hash>& out) const;
  void rebuild_levels();

  std::vector<Bytes> entries_;
  // levels_[0] holds leaf hashes; levels_[k] holds the complete interior
  // nodes of height k. Right-edge partial subtrees are computed on demand.
  std::vector<std::vector<Hash>> levels_;
};

// Stateless verification over untrusted inputs; malformed input yields
// false, never an exception.
bool verify_inclusion(const Hash& leaf, std::uint64_t leaf_index,
                      std::uint64_t tree_size, const InclusionProof& proof,
                      const Hash& root);

bool verify_consistency(std::uint64_t old_size, const Hash& old_root,
                        std::uint64_t new_size, const Hash& new_root,
                        const ConsistencyProof& proof);

// Root of the empty log; the version-0 digest.
Hash empty_log_root();

}  // namespace eads
