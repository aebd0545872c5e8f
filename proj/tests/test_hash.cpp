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

#include "eads/hash.hpp"

namespace eads {
namespace {

TEST_CASE("sha256 matches the published test vectors") {
  // FIPS 180-2 vectors.
  CHECK(sha256(ByteSpan{}).to_hex() ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256(as_bytes("abc")).to_hex() ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256(as_bytes("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnop"
                        "nopq"))
            .to_hex() ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("leaf hash of the empty string matches the known value") {
  // HASH(0x00) -- the canonical single-empty-leaf digest.
  CHECK(leaf_hash(ByteSpan{}).to_hex() ==
        "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
}

TEST_CASE("leaf and node hashing are domain separated") {
  const Bytes data = to_bytes("hello");
  CHECK(leaf_hash(ByteSpan(data)) != sha256(ByteSpan(data)));

  // node_hash must equal SHA-256 over the explicit 0x01-prefixed message,
  // and must differ from a leaf hash over the same 64 bytes.
  const Hash left = leaf_hash(as_bytes("l"));
  const Hash right = leaf_hash(as_bytes("r"));
  Bytes message;
  message.push_back(0x01);
  message.insert(message.end(), left.bytes.begin(), left.bytes.end());
  message.insert(message.end(), right.bytes.begin(), right.bytes.end());
  CHECK(node_hash(left, right) == sha256(ByteSpan(message)));

  Bytes concatenated(message.begin() + 1, message.end());
  CHECK(node_hash(left, right) != leaf_hash(ByteSpan(concatenated)));
  CHECK(node_hash(left, right) != node_hash(right, left));
}

TEST_CASE("hash hex round trip") {
  const Hash h = sha256(as_bytes("round trip"));
  const auto parsed = Hash::from_hex(h.to_hex());
  REQUIRE(parsed.has_value());
  CHECK(*parsed == h);
}

TEST_CASE("hash from_hex rejects malformed input") {
  CHECK_FALSE(Hash::from_hex("").has_value());
  CHECK_FALSE(Hash::from_hex("abc").has_value());
  // 63 and 65 characters.
  const std::string valid =
      "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
  CHECK_FALSE(Hash::from_hex(valid.substr(0, 63)).has_value());
  CHECK_FALSE(Hash::from_hex(valid + "0").has_value());
  // Non-hex character.
  std::string bad = valid;
  bad[10] = 'g';
  CHECK_FALSE(Hash::from_hex(bad).has_value());
}

TEST_CASE("byte-string hex helpers") {
  CHECK(to_hex(ByteSpan{}) == "");
  CHECK(to_hex(as_bytes("key")) == "6b6579");

  const auto bytes = from_hex("6b6579");
  REQUIRE(bytes.has_value());
  CHECK(*bytes == to_bytes("key"));

  const auto empty = from_hex("");
  REQUIRE(empty.has_value());
  CHECK(empty->empty());

  CHECK_FALSE(from_hex("abc").has_value());     // odd length
  CHECK_FALSE(from_hex("zz").has_value());      // non-hex
  CHECK_FALSE(from_hex("6B6579").has_value());  // uppercase is not canonical
}

TEST_CASE("hash ordering is byte-wise") {
  Hash a;
  Hash b;
  a.bytes[0] = 0x01;
  b.bytes[0] = 0x02;
  CHECK(a < b);
  b.bytes[0] = 0x01;
  CHECK(a == b);
}

}  // namespace
}  // namespace eads
