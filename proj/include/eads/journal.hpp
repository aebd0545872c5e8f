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
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "eads/history.hpp"

namespace eads {

// Raised when an append does not link to the ledger's latest version --
// the storage-level fork guard.
class JournalConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for records that do not decode, and for corrupt journal files.
class JournalInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Append-only trusted-storage journal: the file-backed stand-in for a
// public ledger. One JSON envelope per line, {"seq": n, "record": {...}},
// with seq assigned contiguously from 1. Existing lines are never modified.
//
// The journal trusts its writer for record content; it enforces only
// append-only-ness and prev_version linkage. What the file actually
// guarantees is an honest filesystem, documented rather than solved.
//
// One appender per instance; concurrent readers see a prefix of appends.
class Journal {
 public:
  // Opens or creates the journal file. Recovery rule: a final line that
  // fails to parse (torn write) is discarded; an unparseable line anywhere
  // else is corruption and throws JournalInputError.
  explicit Journal(std::filesystem::path path);

  // Durably appends (flushed before returning) and assigns the next
  // sequence number. Throws JournalConflictError when the record's
  // prev_version does not match the ledger's latest version.
  std::uint64_t append(const HistoryRecord& record);

  // Parses and appends; throws JournalInputError on malformed input.
  std::uint64_t append_json(std::string_view record_json);

  // Records for a ledger with version in [from_version, to_version],
  // in version order. Unknown ledger yields an empty list.
  std::vector<HistoryRecord> read(const std::string& ledger_id,
                                  std::uint64_t from_version,
                                  std::uint64_t to_version) const;
  std::vector<HistoryRecord> read_all(const std::string& ledger_id) const;

  std::optional<HistoryRecord> latest(const std::string& ledger_id) const;

  std::uint64_t sequence() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::uint64_t sequence_ = 0;
  std::map<std::string, std::vector<HistoryRecord>> by_ledger_;
  mutable std::shared_mutex mutex_;
};

}  // namespace eads
