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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eads/history.hpp"

namespace eads {

// Raised when a journal source cannot be read at all (missing file,
// unreachable URL). Distinct from content problems, which are audit
// findings, not errors.
class AuditIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The auditor's one and only input capability: raw trusted-storage bytes.
// The auditor never talks to the server; handing it a reader instead of a
// URL-or-socket keeps that property structural.
class JournalSource {
 public:
  virtual ~JournalSource() = default;
  // Entire journal, bit-exact. Throws AuditIoError when unreadable.
  virtual std::string read_all() = 0;
};

class FileJournalSource : public JournalSource {
 public:
  explicit FileJournalSource(std::filesystem::path path);
  std::string read_all() override;

 private:
  std::filesystem::path path_;
};

class MemoryJournalSource : public JournalSource {
 public:
  explicit MemoryJournalSource(std::string bytes) : bytes_(std::move(bytes)) {}
  std::string read_all() override { return bytes_; }

 private:
  std::string bytes_;
};

// Fetches the journal over HTTP (the storage read endpoint,
// /journal/{ledger_id}). The optional session token is forwarded so
// split-view experiments can place an auditor on either branch.
class HttpJournalSource : public JournalSource {
 public:
  explicit HttpJournalSource(std::string url, std::string session = {});
  std::string read_all() override;

 private:
  std::string url_;
  std::string session_;
};

// Verifies one ledger's history from trusted storage alone: decodes the
// journal, then delegates to verify_chain. Lines that fail to decode are
// reported as DECODE_ERROR links and make the outcome INCONSISTENT; they
// are never silently skipped.
AuditReport audit(JournalSource& source, const std::string& ledger_id,
                  ByteSpan public_key,
                  const SignatureScheme& scheme = ed25519());

// Compares the histories two storage sources hold for the same ledger and
// returns the earliest conflicting checkpoint pair, if any (split-view
// detection). Throws AuditIoError/JournalInputError when a source cannot
// be read or decoded.
std::optional<ForkEvidence> audit_cross(
    JournalSource& source_a, JournalSource& source_b,
    const std::string& ledger_id, ByteSpan public_key,
    const SignatureScheme& scheme = ed25519());

// True iff every record stays within the closed history schema: ids,
// integers, 32-byte hex digests, a signature hex string -- no free-form
// byte fields anywhere. This is the data-devoid check.
bool privacy_attest(const std::vector<HistoryRecord>& records);

// Same check applied to raw journal bytes, envelope included. This is the
// form the acceptance scan uses: nothing the auditor reads may carry
// payload bytes.
bool privacy_attest_journal(std::string_view journal_bytes);

// Report rendering for the CLI: a human-readable table and a
// machine-readable JSON document.
std::string render_report_text(const AuditReport& report);
std::string render_report_json(const AuditReport& report);
std::string render_fork_text(const std::optional<ForkEvidence>& evidence);
std::string render_fork_json(const std::optional<ForkEvidence>& evidence);

}  // namespace eads
