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

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "eads/sparse_map.hpp"
#include "reference_oracles.hpp"

namespace eads {
namespace {

TEST_CASE("default subtree roots follow the doubling recurrence") {
  CHECK(default_subtree_root(0) == leaf_hash(ByteSpan{}));
  CHECK(default_subtree_root(0).to_hex() ==
        "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
  CHECK(default_subtree_root(1).to_hex() ==
        "fe43d66afa4a9a5c4f9c9da89f4ffb52635c8f342e7ffb731d68e36c5982072a");
  for (unsigned h = 1; h <= kMapDepth; ++h) {
    CHECK(default_subtree_root(h) ==
          node_hash(default_subtree_root(h - 1), default_subtree_root(h - 1)));
  }
  CHECK_THROWS_AS((void)default_subtree_root(kMapDepth + 1),
                  std::out_of_range);
}

TEST_CASE("empty map root matches the frozen value") {
  SparseMap map;
  CHECK(map.root().to_hex() ==
        "c6689f10812a0980976d9533d83875282166159567ec35155716c1413af53d6a");
  CHECK(map.root() == default_subtree_root(kMapDepth));
  CHECK(map.binding_count() == 0);
}

TEST_CASE("small binding sets match the frozen roots") {
  SparseMap map;
  const Hash one = map.put(as_bytes("key"), as_bytes("value"));
  CHECK(one.to_hex() ==
        "ec32ac10a3f513a919c5d7ae72bd129d886f33cb2124d13abbc5b93eb0ae28d6");
  const Hash two = map.put(as_bytes("another"), as_bytes("thing"));
  CHECK(two.to_hex() ==
        "c0874c50e0cc56e49c7e236ad23a1f2584751f609f328743656d766ccf9972d4");

  SparseMap five;
  for (int i = 0; i < 5; ++i) {
    five.put(as_bytes("k" + std::to_string(i)),
             as_bytes("v" + std::to_string(i)));
  }
  CHECK(five.root().to_hex() ==
        "36e4a27fde4f91315bdfeb074af42fa2cdcee3ca1f56092c6531f14f7b9ef107");
}

TEST_CASE("map root agrees with the recursive reference implementation") {
  std::mt19937_64 rng(0xdecaf);
  SparseMap map;
  std::map<Hash, Bytes> model;
  for (int i = 0; i < 40; ++i) {
    const Bytes key = to_bytes("key-" + std::to_string(rng() % 24));
    const Bytes value = to_bytes("value-" + std::to_string(rng()));
    map.put(ByteSpan(key), ByteSpan(value));
    model[sha256(ByteSpan(key))] = value;
    CHECK(map.root() == reference::map_root(model));
  }
  // Interleave deletions, including misses.
  for (int i = 0; i < 30; ++i) {
    const Bytes key = to_bytes("key-" + std::to_string(rng() % 32));
    map.erase(ByteSpan(key));
    model.erase(sha256(ByteSpan(key)));
    CHECK(map.root() == reference::map_root(model));
  }
}

TEST_CASE("the root is a pure function of the binding set") {
  std::vector<std::pair<std::string, std::string>> bindings;
  for (int i = 0; i < 12; ++i) {
    bindings.emplace_back("user/" + std::to_string(i),
                          "payload-" + std::to_string(i * 7));
  }

  SparseMap forward;
  for (const auto& [k, v] : bindings) forward.put(as_bytes(k), as_bytes(v));

  std::mt19937_64 rng(99);
  std::shuffle(bindings.begin(), bindings.end(), rng);
  SparseMap shuffled;
  for (const auto& [k, v] : bindings) shuffled.put(as_bytes(k), as_bytes(v));
  CHECK(forward.root() == shuffled.root());

  // Insert-then-delete returns to the exact prior root (pruned defaults,
  // not a structurally different tree with the same bindings).
  const Hash before = forward.root();
  forward.put(as_bytes("ephemeral"), as_bytes("x"));
  CHECK(forward.root() != before);
  forward.erase(as_bytes("ephemeral"));
  CHECK(forward.root() == before);

  // Overwriting a key replaces the binding rather than layering it.
  forward.put(as_bytes("user/3"), as_bytes("new"));
  forward.put(as_bytes("user/3"), as_bytes("payload-21"));
  CHECK(forward.root() == before);
}

TEST_CASE("erase of an absent key is a no-op") {
  SparseMap map;
  map.put(as_bytes("present"), as_bytes("value"));
  const Hash before = map.root();
  CHECK(map.erase(as_bytes("never-bound")) == before);
  CHECK(map.root() == before);
  CHECK(map.binding_count() == 1);
}

TEST_CASE("inclusion proofs verify for every binding") {
  SparseMap map;
  for (int i = 0; i < 20; ++i) {
    map.put(as_bytes("k" + std::to_string(i)),
            as_bytes("v" + std::to_string(i)));
  }
  const Hash root = map.root();
  for (int i = 0; i < 20; ++i) {
    const std::string key = "k" + std::to_string(i);
    const auto [value, proof] = map.get_with_proof(as_bytes(key));
    REQUIRE(value.has_value());
    CHECK(*value == to_bytes("v" + std::to_string(i)));
    CHECK(proof.present);
    CHECK(proof.siblings.size() == kMapDepth);
    CHECK(verify_map_proof(root, as_bytes(key), value, proof));
    // The same proof must not vouch for a different value.
    CHECK_FALSE(
        verify_map_proof(root, as_bytes(key), to_bytes("other"), proof));
    // Nor for absence.
    CHECK_FALSE(verify_map_proof(root, as_bytes(key), std::nullopt, proof));
  }
}

TEST_CASE("non-inclusion proofs verify for absent keys") {
  SparseMap map;
  for (int i = 0; i < 20; ++i) {
    map.put(as_bytes("k" + std::to_string(i)),
            as_bytes("v" + std::to_string(i)));
  }
  const Hash root = map.root();
  for (int i = 0; i < 20; ++i) {
    const std::string key = "missing" + std::to_string(i);
    const auto [value, proof] = map.get_with_proof(as_bytes(key));
    CHECK_FALSE(value.has_value());
    CHECK_FALSE(proof.present);
    CHECK(verify_map_proof(root, as_bytes(key), std::nullopt, proof));
    // Absence proofs must not be convertible into presence claims.
    CHECK_FALSE(verify_map_proof(root, as_bytes(key), to_bytes("v"), proof));
  }
}

TEST_CASE("near-miss positions still prove absent") {
  // Probe the sibling positions of a real binding: key hashes that share
  // long prefixes with a bound position but differ in one late bit.
  SparseMap map;
  map.put(as_bytes("anchor"), as_bytes("value"));
  const Hash root = map.root();
  const Hash bound = sha256(as_bytes("anchor"));
  for (unsigned depth : {0u, 7u, 128u, 254u, 255u}) {
    Hash probe = bound;
    probe.bytes[depth / 8] ^= static_cast<std::uint8_t>(1u << (7 - depth % 8));
    const auto [value, proof] = map.get_with_proof_hashed(probe);
    CHECK_FALSE(value.has_value());
    CHECK(verify_map_proof_hashed(root, probe, std::nullopt, proof));
    CHECK_FALSE(verify_map_proof_hashed(root, probe,
                                        to_bytes("value"), proof));
  }
  // The bound position itself still proves present.
  const auto [value, proof] = map.get_with_proof_hashed(bound);
  REQUIRE(value.has_value());
  CHECK(verify_map_proof_hashed(root, bound, value, proof));
}

TEST_CASE("map proof verification rejects structural forgeries") {
  SparseMap map;
  map.put(as_bytes("key"), as_bytes("value"));
  const Hash root = map.root();
  auto [value, proof] = map.get_with_proof(as_bytes("key"));

  auto wrong_count = proof;
  wrong_count.siblings.pop_back();
  CHECK_FALSE(verify_map_proof(root, as_bytes("key"), value, wrong_count));

  auto flipped = proof;
  flipped.siblings[100].bytes[0] ^= 0x01;
  CHECK_FALSE(verify_map_proof(root, as_bytes("key"), value, flipped));

  auto moved = proof;
  moved.key_hash.bytes[31] ^= 0x01;
  CHECK_FALSE(verify_map_proof(root, as_bytes("key"), value, moved));

  // A proof for one key cannot vouch for another key.
  CHECK_FALSE(verify_map_proof(root, as_bytes("yek"), value, proof));
  // Nor against a different root.
  CHECK_FALSE(verify_map_proof(default_subtree_root(kMapDepth),
                               as_bytes("key"), value, proof));
}

TEST_CASE("map proof JSON round trip") {
  SparseMap map;
  map.put(as_bytes("key"), as_bytes("value"));
  const auto [value, proof] = map.get_with_proof(as_bytes("key"));
  const auto parsed = MapProof::from_json(proof.to_json());
  REQUIRE(parsed.has_value());
  CHECK(*parsed == proof);
  CHECK(verify_map_proof(map.root(), as_bytes("key"), value, *parsed));

  CHECK_FALSE(MapProof::from_json("").has_value());
  CHECK_FALSE(MapProof::from_json("{}").has_value());
  CHECK_FALSE(MapProof::from_json(R"({"key_hash":"00","present":true,)"
                                  R"("value_leaf":"00","siblings":[]})")
                  .has_value());
}

TEST_CASE("clone is a deep, independent snapshot") {
  SparseMap map;
  map.put(as_bytes("a"), as_bytes("1"));
  map.put(as_bytes("b"), as_bytes("2"));
  const Hash snapshot_root = map.root();

  const SparseMap snapshot = map.clone();
  map.put(as_bytes("c"), as_bytes("3"));
  map.erase(as_bytes("a"));

  CHECK(snapshot.root() == snapshot_root);
  CHECK(snapshot.binding_count() == 2);
  const auto [value, proof] = snapshot.get_with_proof(as_bytes("a"));
  REQUIRE(value.has_value());
  CHECK(verify_map_proof(snapshot_root, as_bytes("a"), value, proof));
}

}  // namespace
}  // namespace eads
