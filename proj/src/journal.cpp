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

#include "eads/journal.hpp"

#include <limits>

#include <json.hpp>

namespace eads {

namespace {

using ordered_json = nlohmann::ordered_json;

struct ParsedLine {
  std::uint64_t seq;
  HistoryRecord record;
};

std::optional<ParsedLine> parse_envelope(std::string_view line) {
  auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || j.size() != 2) return std::nullopt;
  auto seq_it = j.find("seq");
  auto rec_it = j.find("record");
  if (seq_it == j.end() || !seq_it->is_number_unsigned() ||
      rec_it == j.end() || !rec_it->is_object()) {
    return std::nullopt;
  }
  auto record = HistoryRecord::from_json(rec_it->dump());
  if (!record) return std::nullopt;
  return ParsedLine{seq_it->get<std::uint64_t>(), std::move(*record)};
}

std::string envelope_line(std::uint64_t seq, const HistoryRecord& record) {
  // Assembled from the record's own canonical JSON so the stored bytes
  // match what HistoryRecord::to_json produces.
  std::string s = "{\"seq\":";
  s += std::to_string(seq);
  s += ",\"record\":";
  s += record.to_json();
  s += "}";
  return s;
}

}  // namespace

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {
  std::vector<std::string> lines;
  {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  bool drop_last = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) continue;
      throw JournalInputError("journal: empty line inside file");
    }
    auto parsed = parse_envelope(lines[i]);
    if (!parsed) {
      if (i + 1 == lines.size()) {
        drop_last = true;  // torn final write; discard on recovery
        break;
      }
      throw JournalInputError("journal: unparseable record line " +
                              std::to_string(i + 1));
    }
    if (parsed->seq != sequence_ + 1) {
      throw JournalInputError("journal: sequence discontinuity at line " +
                              std::to_string(i + 1));
    }
    sequence_ = parsed->seq;
    by_ledger_[parsed->record.checkpoint.ledger_id].push_back(
        std::move(parsed->record));
  }

  if (drop_last) {
    // Write back the original lines minus the torn one, byte-identical.
    std::ofstream rewrite(path_, std::ios::trunc);
    if (!rewrite) throw JournalInputError("journal: cannot rewrite file");
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
      rewrite << lines[i] << '\n';
    }
    rewrite.flush();
    if (!rewrite) throw JournalInputError("journal: recovery rewrite failed");
  }

  out_.open(path_, std::ios::app);
  if (!out_) throw JournalInputError("journal: cannot open for append");
}

std::uint64_t Journal::append(const HistoryRecord& record) {
  std::unique_lock lock(mutex_);
  auto& records = by_ledger_[record.checkpoint.ledger_id];
  if (records.empty()) {
    if (record.prev_version) {
      throw JournalConflictError(
          "journal: genesis record must not carry prev_version");
    }
  } else {
    const std::uint64_t latest_version = records.back().checkpoint.version;
    if (!record.prev_version || *record.prev_version != latest_version) {
      throw JournalConflictError(
          "journal: prev_version does not match latest version " +
          std::to_string(latest_version));
    }
  }

  const std::uint64_t seq = sequence_ + 1;
  out_ << envelope_line(seq, record) << '\n';
  out_.flush();
  if (!out_) throw JournalInputError("journal: append write failed");
  sequence_ = seq;
  records.push_back(record);
  return seq;
}

std::uint64_t Journal::append_json(std::string_view record_json) {
  auto record = HistoryRecord::from_json(record_json);
  if (!record) throw JournalInputError("journal: record does not decode");
  return append(*record);
}

std::vector<HistoryRecord> Journal::read(const std::string& ledger_id,
                                         std::uint64_t from_version,
                                         std::uint64_t to_version) const {
  std::shared_lock lock(mutex_);
  std::vector<HistoryRecord> out;
  auto it = by_ledger_.find(ledger_id);
  if (it == by_ledger_.end()) return out;
  for (const auto& record : it->second) {
    const auto v = record.checkpoint.version;
    if (v >= from_version && v <= to_version) out.push_back(record);
  }
  return out;
}

std::vector<HistoryRecord> Journal::read_all(
    const std::string& ledger_id) const {
  return read(ledger_id, 0, std::numeric_limits<std::uint64_t>::max());
}

std::optional<HistoryRecord> Journal::latest(
    const std::string& ledger_id) const {
  std::shared_lock lock(mutex_);
  auto it = by_ledger_.find(ledger_id);
  if (it == by_ledger_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::uint64_t Journal::sequence() const {
  std::shared_lock lock(mutex_);
  return sequence_;
}

}  // namespace eads
