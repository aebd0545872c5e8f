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

#include "eads/hash.hpp"

#include <sodium.h>

namespace eads {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

// Strict lowercase hex; rejects uppercase so canonical encodings stay unique.
int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string Hash::to_hex() const {
  return eads::to_hex(ByteSpan(bytes.data(), bytes.size()));
}

std::optional<Hash> Hash::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kHashSize) return std::nullopt;
  Hash out;
  for (std::size_t i = 0; i < kHashSize; ++i) {
    int hi = hex_nibble(hex[2 * i]);
    int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Hash sha256(ByteSpan data) {
  Hash out;
  crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
  return out;
}

Hash leaf_hash(ByteSpan data) {
  static const std::uint8_t prefix = 0x00;
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  crypto_hash_sha256_update(&st, &prefix, 1);
  crypto_hash_sha256_update(&st, data.data(), data.size());
  Hash out;
  crypto_hash_sha256_final(&st, out.bytes.data());
  return out;
}

Hash node_hash(const Hash& left, const Hash& right) {
  static const std::uint8_t prefix = 0x01;
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  crypto_hash_sha256_update(&st, &prefix, 1);
  crypto_hash_sha256_update(&st, left.bytes.data(), left.bytes.size());
  crypto_hash_sha256_update(&st, right.bytes.data(), right.bytes.size());
  Hash out;
  crypto_hash_sha256_final(&st, out.bytes.data());
  return out;
}

std::string to_hex(ByteSpan data) {
  std::string out;
  out.resize(data.size() * 2);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[2 * i] = kHexDigits[data[i] >> 4];
    out[2 * i + 1] = kHexDigits[data[i] & 0x0f];
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace eads
