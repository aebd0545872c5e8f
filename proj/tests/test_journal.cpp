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

#include <string>
#include <vector>

#include "eads/journal.hpp"
#include "eads/merkle_log.hpp"
#include "test_util.hpp"

namespace eads {
namespace {

KeyPair journal_keys() {
  const Hash seed = sha256(as_bytes("journal-test-seed"));
  return ed25519().keypair_from_seed(ByteSpan(seed.bytes));
}

// A minimal honest record stream for one ledger.
std::vector<HistoryRecord> make_records(const std::string& ledger_id,
                                        std::uint64_t count) {
  const KeyPair keys = journal_keys();
  std::vector<HistoryRecord> records;
  VerifiableLog log;
  HistoryRecord genesis;
  genesis.checkpoint = make_checkpoint(ledger_id, 0, 0, empty_log_root(),
                                       std::nullopt, 1000,
                                       ByteSpan(keys.secret));
  records.push_back(genesis);
  for (std::uint64_t v = 1; v <= count; ++v) {
    log.append(as_bytes(ledger_id + "-entry-" + std::to_string(v)));
    HistoryRecord rec;
    rec.checkpoint = make_checkpoint(
        ledger_id, v, v, log.root(), std::nullopt,
        1000 + static_cast<std::int64_t>(v), ByteSpan(keys.secret));
    rec.prev_version = v - 1;
    rec.consistency = log.consistency_proof(v - 1, v);
    records.push_back(std::move(rec));
  }
  return records;
}

TEST_CASE("journal assigns contiguous sequence numbers") {
  const auto dir = testutil::scratch_dir("journal-seq");
  Journal journal(dir / "ledger.jsonl");
  CHECK(journal.sequence() == 0);
  const auto records = make_records("ledger-1", 3);
  std::uint64_t expected = 1;
  for (const auto& rec : records) {
    CHECK(journal.append(rec) == expected++);
  }
  CHECK(journal.sequence() == 4);
}

TEST_CASE("journal read returns version ranges in order") {
  const auto dir = testutil::scratch_dir("journal-read");
  Journal journal(dir / "ledger.jsonl");
  const auto records = make_records("ledger-1", 6);
  for (const auto& rec : records) journal.append(rec);

  const auto all = journal.read_all("ledger-1");
  REQUIRE(all.size() == 7);
  CHECK(all == records);

  const auto window = journal.read("ledger-1", 2, 4);
  REQUIRE(window.size() == 3);
  CHECK(window.front().checkpoint.version == 2);
  CHECK(window.back().checkpoint.version == 4);

  CHECK(journal.read("ledger-1", 10, 20).empty());
  CHECK(journal.read_all("no-such-ledger").empty());

  const auto latest = journal.latest("ledger-1");
  REQUIRE(latest.has_value());
  CHECK(latest->checkpoint.version == 6);
  CHECK_FALSE(journal.latest("no-such-ledger").has_value());
}

TEST_CASE("journal keeps ledgers separate") {
  const auto dir = testutil::scratch_dir("journal-multi");
  Journal journal(dir / "shared.jsonl");
  const auto a = make_records("ledger-a", 2);
  const auto b = make_records("ledger-b", 3);
  // Interleave the two streams.
  journal.append(a[0]);
  journal.append(b[0]);
  journal.append(b[1]);
  journal.append(a[1]);
  journal.append(b[2]);
  journal.append(a[2]);
  journal.append(b[3]);

  CHECK(journal.read_all("ledger-a") ==
        std::vector<HistoryRecord>(a.begin(), a.begin() + 3));
  CHECK(journal.read_all("ledger-b") == b);
}

TEST_CASE("journal rejects appends that do not link") {
  const auto dir = testutil::scratch_dir("journal-conflict");
  Journal journal(dir / "ledger.jsonl");
  const auto records = make_records("ledger-1", 4);
  journal.append(records[0]);
  journal.append(records[1]);

  // Skipping version 2 breaks linkage.
  CHECK_THROWS_AS(journal.append(records[3]), JournalConflictError);
  // Re-publishing an old version conflicts too.
  CHECK_THROWS_AS(journal.append(records[1]), JournalConflictError);
  // A second genesis for an existing ledger conflicts.
  CHECK_THROWS_AS(journal.append(records[0]), JournalConflictError);

  // The failed appends left no trace.
  CHECK(journal.sequence() == 2);
  CHECK(journal.read_all("ledger-1").size() == 2);
  journal.append(records[2]);
  CHECK(journal.latest("ledger-1")->checkpoint.version == 2);
}

TEST_CASE("journal reopen restores state byte for byte") {
  const auto dir = testutil::scratch_dir("journal-reopen");
  const auto path = dir / "ledger.jsonl";
  const auto records = make_records("ledger-1", 5);
  {
    Journal journal(path);
    for (const auto& rec : records) journal.append(rec);
  }
  const std::string before = testutil::read_file(path);

  {
    Journal journal(path);
    CHECK(journal.sequence() == 6);
    CHECK(journal.read_all("ledger-1") == records);
    // Reopening alone must not rewrite anything.
    CHECK(testutil::read_file(path) == before);

    // Appends continue the sequence.
    const auto more = make_records("ledger-1", 6);
    CHECK(journal.append(more[6]) == 7);
  }
  {
    Journal journal(path);
    CHECK(journal.sequence() == 7);
    CHECK(journal.latest("ledger-1")->checkpoint.version == 6);
  }
}

TEST_CASE("journal drops a torn final line on recovery") {
  const auto dir = testutil::scratch_dir("journal-torn");
  const auto path = dir / "ledger.jsonl";
  const auto records = make_records("ledger-1", 3);
  {
    Journal journal(path);
    for (const auto& rec : records) journal.append(rec);
  }
  // Simulate a crash mid-write: append half a line.
  const std::string full = testutil::read_file(path);
  testutil::write_file(path, full + "{\"seq\":5,\"record\":{\"trunc");

  Journal journal(path);
  CHECK(journal.sequence() == 4);
  CHECK(journal.read_all("ledger-1") == records);

  // The torn bytes are gone; the next append lands on a clean line.
  const auto more = make_records("ledger-1", 4);
  journal.append(more[4]);
  Journal reread(path);
  CHECK(reread.sequence() == 5);
  CHECK(reread.latest("ledger-1")->checkpoint.version == 4);
}

TEST_CASE("journal refuses corruption before the final line") {
  const auto dir = testutil::scratch_dir("journal-corrupt");
  const auto path = dir / "ledger.jsonl";
  const auto records = make_records("ledger-1", 3);
  {
    Journal journal(path);
    for (const auto& rec : records) journal.append(rec);
  }
  // Damage the second line: mid-file corruption is not a torn write.
  std::string contents = testutil::read_file(path);
  const auto first_newline = contents.find('\n');
  contents[first_newline + 1] = '#';
  testutil::write_file(path, contents);

  CHECK_THROWS_AS(Journal{path}, JournalInputError);
}

TEST_CASE("journal append_json validates the record") {
  const auto dir = testutil::scratch_dir("journal-json");
  Journal journal(dir / "ledger.jsonl");
  const auto records = make_records("ledger-1", 1);
  CHECK(journal.append_json(records[0].to_json()) == 1);
  CHECK(journal.append_json(records[1].to_json()) == 2);
  CHECK_THROWS_AS(journal.append_json("not json"), JournalInputError);
  CHECK_THROWS_AS(journal.append_json("{}"), JournalInputError);
  CHECK(journal.sequence() == 2);
}

TEST_CASE("journal envelope format is one JSON object per line") {
  const auto dir = testutil::scratch_dir("journal-envelope");
  const auto path = dir / "ledger.jsonl";
  const auto records = make_records("ledger-1", 2);
  {
    Journal journal(path);
    for (const auto& rec : records) journal.append(rec);
  }
  const std::string contents = testutil::read_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    const auto next = contents.find('\n', pos);
    REQUIRE(next != std::string::npos);  // every line newline-terminated
    lines.push_back(contents.substr(pos, next - pos));
    pos = next + 1;
  }
  REQUIRE(lines.size() == 3);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CAPTURE(lines[i]);
    CHECK(lines[i].find("{\"seq\":" + std::to_string(i + 1) + ",\"record\":") ==
          0);
    // The payload round-trips to the record that was appended.
    const auto start = lines[i].find("\"record\":") + 9;
    const auto payload = lines[i].substr(start, lines[i].size() - start - 1);
    const auto parsed = HistoryRecord::from_json(payload);
    REQUIRE(parsed.has_value());
    CHECK(*parsed == records[i]);
  }
}

}  // namespace
}  // namespace eads
