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

#include "eads/signature.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace eads {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) {
      throw std::runtime_error("libsodium initialization failed");
    }
  });
}

class Ed25519Scheme final : public SignatureScheme {
 public:
  KeyPair keypair_from_seed(ByteSpan seed) const override {
    ensure_sodium();
    if (seed.size() != crypto_sign_SEEDBYTES) {
      throw std::invalid_argument("ed25519 seed must be 32 bytes");
    }
    KeyPair kp;
    kp.secret.resize(crypto_sign_SECRETKEYBYTES);
    kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
    crypto_sign_seed_keypair(kp.public_key.data(), kp.secret.data(),
                             seed.data());
    return kp;
  }

  Signature sign(ByteSpan secret, ByteSpan message) const override {
    ensure_sodium();
    if (secret.size() != crypto_sign_SECRETKEYBYTES) {
      throw std::invalid_argument("ed25519 secret key must be 64 bytes");
    }
    Signature sig(crypto_sign_BYTES);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                         secret.data());
    return sig;
  }

  bool verify(ByteSpan public_key, ByteSpan message,
              ByteSpan signature) const override {
    ensure_sodium();
    if (public_key.size() != crypto_sign_PUBLICKEYBYTES ||
        signature.size() != crypto_sign_BYTES) {
      return false;
    }
    return crypto_sign_verify_detached(signature.data(), message.data(),
                                       message.size(),
                                       public_key.data()) == 0;
  }
};

}  // namespace

const SignatureScheme& ed25519() {
  static const Ed25519Scheme scheme;
  return scheme;
}

KeyPair generate_keypair() {
  ensure_sodium();
  Bytes seed(crypto_sign_SEEDBYTES);
  randombytes_buf(seed.data(), seed.size());
  return ed25519().keypair_from_seed(seed);
}

Bytes random_bytes(std::size_t count) {
  ensure_sodium();
  Bytes out(count);
  randombytes_buf(out.data(), out.size());
  return out;
}

}  // namespace eads
