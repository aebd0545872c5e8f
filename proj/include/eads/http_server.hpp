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

#include <memory>
#include <string>

#include "eads/server.hpp"

namespace eads {

struct HttpFrontendOptions {
  std::string listen_address = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Static bearer token required on POST routes; empty disables the check.
  std::string token;
  // Enables POST /admin/adversary (test benches only).
  bool admin_enabled = false;
};

// HTTP/JSON transport over one LedgerServer.
//
//   POST /ledgers/{id}/entries          append (bearer auth)
//   GET  /ledgers/{id}/entries/{index}  entry + inclusion proof
//   GET  /ledgers/{id}/map/{key-hex}    map value + (non-)inclusion proof
//   GET  /ledgers/{id}/checkpoint       latest published checkpoint
//   GET  /journal/{id}                  raw journal bytes (storage read path)
//   GET  /journal/{id}/latest           latest history record
//   POST /admin/adversary               adversary switch (when enabled)
//
// Request bodies use the owning modules' JSON forms: log-mode appends send
// {"entry": "<hex>"}, map-mode appends send a canonical edit op. The
// optional X-EADS-Session header names the client session used for fork
// routing. Errors come back as {"error": "..."} with 400/401/404/409/500.
class HttpFrontend {
 public:
  HttpFrontend(LedgerServer& ledger, HttpFrontendOptions options);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Binds, then serves on a background thread. Returns the bound port.
  // Throws std::runtime_error when the address cannot be bound.
  int start();
  void stop();

  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eads
