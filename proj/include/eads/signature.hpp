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

#include "eads/hash.hpp"

namespace eads {

using Signature = Bytes;

struct KeyPair {
  Bytes secret;      // signing key
  Bytes public_key;  // verification key
};

// Pluggable signature scheme. The deployment scheme is Ed25519; tests may
// substitute a deterministic stub. Verification must never throw on
// malformed keys or signatures -- it returns false instead, so a corrupt
// record cannot abort an audit.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  // Derives a key pair from a fixed-size seed. Seed length requirements are
  // scheme-specific; Ed25519 wants exactly 32 bytes.
  virtual KeyPair keypair_from_seed(ByteSpan seed) const = 0;
  virtual Signature sign(ByteSpan secret, ByteSpan message) const = 0;
  virtual bool verify(ByteSpan public_key, ByteSpan message,
                      ByteSpan signature) const = 0;
};

// Process-wide Ed25519 instance (libsodium-backed).
const SignatureScheme& ed25519();

// Fresh random key pair from the system RNG.
KeyPair generate_keypair();

// Cryptographically random bytes (key seeds, tokens).
Bytes random_bytes(std::size_t count);

}  // namespace eads
