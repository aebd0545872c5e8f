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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eads {

inline constexpr std::size_t kHashSize = 32;

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

/// A 32-byte digest value. Equality is byte-wise.
struct Hash {
  std::array<std::uint8_t, kHashSize> bytes{};

  friend bool operator==(const Hash&, const Hash&) = default;
  auto operator<=>(const Hash&) const = default;

  std::string to_hex() const;
  // Accepts exactly 64 lowercase hex characters.
  static std::optional<Hash> from_hex(std::string_view hex);
};

// Raw SHA-256 over arbitrary bytes.
Hash sha256(ByteSpan data);

// Domain-separated tree hashing: HASH(0x00 || data) for leaves,
// HASH(0x01 || left || right) for interior nodes. The distinct prefixes
// keep leaf and node images disjoint.
Hash leaf_hash(ByteSpan data);
Hash node_hash(const Hash& left, const Hash& right);

// Lowercase hex helpers for general byte strings.
std::string to_hex(ByteSpan data);
std::optional<Bytes> from_hex(std::string_view hex);

inline ByteSpan as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

}  // namespace eads
