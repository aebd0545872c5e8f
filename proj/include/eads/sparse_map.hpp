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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eads/hash.hpp"

namespace eads {

inline constexpr unsigned kMapDepth = 256;

// Root of the all-default subtree of the given height:
//   D_0 = leaf_hash(""), D_h = node_hash(D_{h-1}, D_{h-1}).
// Throws std::out_of_range outside 0..256.
Hash default_subtree_root(unsigned height);

// Bit of the 256-bit key position at a given depth below the root.
// Depth 0 is the split directly under the root (MSB of the key hash);
// depth 255 selects the leaf (LSB).
inline bool key_bit(const Hash& key_hash, unsigned depth) {
  return (key_hash.bytes[depth / 8] >> (7 - depth % 8)) & 1;
}

// Inclusion or non-inclusion proof for one key position. Hashes only.
struct MapProof {
  Hash key_hash{};
  bool present = false;
  Hash value_leaf{};           // default leaf hash when absent
  std::vector<Hash> siblings;  // exactly 256, root-adjacent first

  friend bool operator==(const MapProof&, const MapProof&) = default;

  std::string to_json() const;
  static std::optional<MapProof> from_json(std::string_view text);
};

// Key-value map over the full 256-bit keyspace, realized as a fixed-depth
// sparse Merkle tree. Key position is SHA-256 of the user key; the leaf for
// a binding is leaf_hash(value); unbound positions hold the default leaf.
// The root is a pure function of the binding set.
//
// Single writer, concurrent readers; proof verification is stateless.
class SparseMap {
 public:
  SparseMap() = default;
  SparseMap(SparseMap&&) = default;
  SparseMap& operator=(SparseMap&&) = default;

  // Deep copy; the snapshot a server answers queries against.
  SparseMap clone() const;

  Hash root() const;
  std::uint64_t binding_count() const { return bindings_.size(); }

  Hash put(ByteSpan key, ByteSpan value);
  // Deleting an absent key is a no-op returning the unchanged root.
  Hash erase(ByteSpan key);
  std::pair<std::optional<Bytes>, MapProof> get_with_proof(ByteSpan key) const;

  // Key-hash-space variants; proofs live in this space, so tests can probe
  // positions (e.g. near misses) that no preimage is known for.
  Hash put_hashed(const Hash& key_hash, ByteSpan value);
  Hash erase_hashed(const Hash& key_hash);
  std::pair<std::optional<Bytes>, MapProof> get_with_proof_hashed(
      const Hash& key_hash) const;

  // Plain unverified dump of all bindings, ordered by key hash.
  const std::map<Hash, Bytes>& bindings() const { return bindings_; }

 private:
  struct Node {
    Hash hash{};
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
  };

  void update_path(std::unique_ptr<Node>& node, unsigned height,
                   const Hash& key_hash, const Hash* leaf);
  static std::unique_ptr<Node> clone_node(const Node* node);

  std::unique_ptr<Node> root_;         // null means all-default
  std::map<Hash, Bytes> bindings_;     // key hash -> value bytes
};

bool verify_map_proof(const Hash& root, ByteSpan key,
                      const std::optional<Bytes>& claimed_value,
                      const MapProof& proof);
bool verify_map_proof_hashed(const Hash& root, const Hash& key_hash,
                             const std::optional<Bytes>& claimed_value,
                             const MapProof& proof);

}  // namespace eads
