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

#include "eads/auditor.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace eads {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct DecodedJournal {
  std::vector<HistoryRecord> records;  // this ledger's records, file order
  std::vector<LinkResult> decode_failures;
};

// Splits raw bytes into lines and decodes the {"seq": n, "record": {...}}
// envelopes. Anything that fails to decode -- bad JSON, bad schema, a
// sequence gap -- becomes a DECODE_ERROR finding; the auditor never
// silently drops storage content.
DecodedJournal decode_journal(std::string_view bytes,
                              const std::string& ledger_id) {
  DecodedJournal out;
  std::uint64_t expected_seq = 1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t eol = bytes.find('\n', pos);
    std::string_view line = bytes.substr(
        pos, eol == std::string_view::npos ? bytes.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
    ++line_no;

    const auto fail = [&](const std::string& why) {
      LinkResult result;
      result.verdict = LinkVerdict::kDecodeError;
      result.detail = "journal line " + std::to_string(line_no) + ": " + why;
      out.decode_failures.push_back(std::move(result));
    };

    const auto envelope = json::parse(line, nullptr, false);
    if (!envelope.is_object() || envelope.size() != 2 ||
        !envelope.contains("seq") || !envelope.contains("record") ||
        !envelope["seq"].is_number_unsigned() ||
        !envelope["record"].is_object()) {
      fail("not a journal envelope");
      continue;
    }
    if (envelope["seq"].get<std::uint64_t>() != expected_seq) {
      fail("sequence is " + envelope["seq"].dump() + ", expected " +
           std::to_string(expected_seq));
      expected_seq = envelope["seq"].get<std::uint64_t>();
    }
    ++expected_seq;

    auto record = HistoryRecord::from_json(envelope["record"].dump());
    if (!record) {
      fail("record does not decode");
      continue;
    }
    if (record->checkpoint.ledger_id == ledger_id) {
      out.records.push_back(std::move(*record));
    }
  }
  return out;
}

bool is_hex_of(const json& value, std::size_t digits) {
  if (!value.is_string()) return false;
  const auto& s = value.get_ref<const std::string&>();
  if (s.size() != digits) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

bool is_ledger_id(const json& value) {
  if (!value.is_string()) return false;
  const auto& s = value.get_ref<const std::string&>();
  if (s.empty() || s.size() > 64) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

// The closed record schema. Everything is an id, an integer, a 32-byte
// digest in hex, or the signature in hex; any extra field, renamed field
// or free-form string fails.
bool record_within_schema(const json& record) {
  if (!record.is_object() || record.size() != 3) return false;
  if (!record.contains("checkpoint") || !record.contains("prev_version") ||
      !record.contains("consistency")) {
    return false;
  }

  const auto& checkpoint = record["checkpoint"];
  if (!checkpoint.is_object() || checkpoint.size() != 7) return false;
  if (!checkpoint.contains("ledger_id") ||
      !is_ledger_id(checkpoint["ledger_id"])) {
    return false;
  }
  if (!checkpoint.contains("version") ||
      !checkpoint["version"].is_number_unsigned()) {
    return false;
  }
  if (!checkpoint.contains("tree_size") ||
      !checkpoint["tree_size"].is_number_unsigned()) {
    return false;
  }
  if (!checkpoint.contains("root") || !is_hex_of(checkpoint["root"], 64)) {
    return false;
  }
  if (!checkpoint.contains("map_root") ||
      (!checkpoint["map_root"].is_null() &&
       !is_hex_of(checkpoint["map_root"], 64))) {
    return false;
  }
  if (!checkpoint.contains("timestamp") ||
      !checkpoint["timestamp"].is_number_integer()) {
    return false;
  }
  if (!checkpoint.contains("signature") ||
      !is_hex_of(checkpoint["signature"], 128)) {
    return false;
  }

  const auto& prev = record["prev_version"];
  if (!prev.is_null() && !prev.is_number_unsigned()) return false;

  const auto& consistency = record["consistency"];
  if (!consistency.is_null()) {
    if (!consistency.is_object() || consistency.size() != 3) return false;
    if (!consistency.contains("old_size") ||
        !consistency["old_size"].is_number_unsigned()) {
      return false;
    }
    if (!consistency.contains("new_size") ||
        !consistency["new_size"].is_number_unsigned()) {
      return false;
    }
    if (!consistency.contains("nodes") || !consistency["nodes"].is_array()) {
      return false;
    }
    for (const auto& node : consistency["nodes"]) {
      if (!is_hex_of(node, 64)) return false;
    }
  }
  return true;
}

std::string verdict_name(LinkVerdict verdict) { return to_string(verdict); }

}  // namespace

FileJournalSource::FileJournalSource(std::filesystem::path path)
    : path_(std::move(path)) {}

std::string FileJournalSource::read_all() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    throw AuditIoError("cannot read journal file " + path_.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

HttpJournalSource::HttpJournalSource(std::string url, std::string session)
    : url_(std::move(url)), session_(std::move(session)) {}

std::string HttpJournalSource::read_all() {
  const auto scheme_end = url_.find("://");
  if (scheme_end == std::string::npos) {
    throw AuditIoError("journal url must start with http://: " + url_);
  }
  const auto path_start = url_.find('/', scheme_end + 3);
  const std::string base =
      path_start == std::string::npos ? url_ : url_.substr(0, path_start);
  const std::string path =
      path_start == std::string::npos ? "/" : url_.substr(path_start);

  httplib::Client client(base);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(5, 0);
  httplib::Headers headers;
  if (!session_.empty()) headers.emplace("X-EADS-Session", session_);
  auto res = client.Get(path, headers);
  if (!res) {
    throw AuditIoError("cannot fetch journal from " + url_);
  }
  if (res->status != 200) {
    throw AuditIoError("journal fetch from " + url_ + " returned status " +
                       std::to_string(res->status));
  }
  return res->body;
}

AuditReport audit(JournalSource& source, const std::string& ledger_id,
                  ByteSpan public_key, const SignatureScheme& scheme) {
  const std::string bytes = source.read_all();
  DecodedJournal decoded = decode_journal(bytes, ledger_id);

  AuditReport report = verify_chain(decoded.records, public_key, scheme);
  report.ledger_id = ledger_id;
  for (auto& failure : decoded.decode_failures) {
    report.links.push_back(std::move(failure));
  }
  if (!decoded.decode_failures.empty() &&
      report.overall == AuditOutcome::kConsistent) {
    report.overall = AuditOutcome::kInconsistent;
  }
  return report;
}

std::optional<ForkEvidence> audit_cross(JournalSource& source_a,
                                        JournalSource& source_b,
                                        const std::string& ledger_id,
                                        ByteSpan public_key,
                                        const SignatureScheme& scheme) {
  const std::string bytes_a = source_a.read_all();
  const std::string bytes_b = source_b.read_all();
  DecodedJournal a = decode_journal(bytes_a, ledger_id);
  DecodedJournal b = decode_journal(bytes_b, ledger_id);
  // Only validly signed checkpoints count as fork evidence; strip records
  // an attacker could not have produced.
  const auto drop_unsigned = [&](std::vector<HistoryRecord>& records) {
    std::erase_if(records, [&](const HistoryRecord& record) {
      return !verify_checkpoint(record.checkpoint, public_key, scheme);
    });
  };
  drop_unsigned(a.records);
  drop_unsigned(b.records);
  return detect_fork(a.records, b.records);
}

bool privacy_attest(const std::vector<HistoryRecord>& records) {
  for (const auto& record : records) {
    const auto parsed = json::parse(record.to_json(), nullptr, false);
    if (!record_within_schema(parsed)) return false;
  }
  return true;
}

bool privacy_attest_journal(std::string_view journal_bytes) {
  std::size_t pos = 0;
  while (pos < journal_bytes.size()) {
    const std::size_t eol = journal_bytes.find('\n', pos);
    std::string_view line = journal_bytes.substr(
        pos, eol == std::string_view::npos ? journal_bytes.size() - pos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? journal_bytes.size() : eol + 1;
    if (line.empty()) return false;

    const auto envelope = json::parse(line, nullptr, false);
    if (!envelope.is_object() || envelope.size() != 2 ||
        !envelope.contains("seq") || !envelope.contains("record") ||
        !envelope["seq"].is_number_unsigned()) {
      return false;
    }
    if (!record_within_schema(envelope["record"])) return false;
  }
  return true;
}

std::string render_report_text(const AuditReport& report) {
  std::ostringstream out;
  out << "ledger:   " << report.ledger_id << '\n';
  out << "records:  " << report.records_checked << '\n';
  out << "genesis:  "
      << (report.genesis_ok ? "ok" : "FAILED (" + report.genesis_detail + ")")
      << '\n';
  out << "links:\n";
  if (report.links.empty()) {
    out << "  (none)\n";
  }
  for (const auto& link : report.links) {
    if (link.verdict == LinkVerdict::kDecodeError) {
      out << "  ?? -> ??          " << verdict_name(link.verdict);
    } else {
      out << "  " << link.from_version << " -> " << link.to_version << "    "
          << verdict_name(link.verdict);
    }
    if (!link.detail.empty()) out << "  (" << link.detail << ")";
    out << '\n';
  }
  if (report.fork_evidence) {
    out << "fork evidence at version "
        << report.fork_evidence->second.version << ":\n";
    out << "  first root:  " << report.fork_evidence->first.root.to_hex()
        << '\n';
    out << "  second root: " << report.fork_evidence->second.root.to_hex()
        << '\n';
  }
  out << "overall:  " << to_string(report.overall) << '\n';
  return out.str();
}

std::string render_report_json(const AuditReport& report) {
  ordered_json out;
  out["ledger_id"] = report.ledger_id;
  out["records_checked"] = report.records_checked;
  out["genesis_ok"] = report.genesis_ok;
  out["genesis_detail"] = report.genesis_detail;
  out["links"] = ordered_json::array();
  for (const auto& link : report.links) {
    ordered_json item;
    item["from_version"] = link.from_version;
    item["to_version"] = link.to_version;
    item["verdict"] = verdict_name(link.verdict);
    item["detail"] = link.detail;
    out["links"].push_back(std::move(item));
  }
  if (report.fork_evidence) {
    ordered_json evidence;
    evidence["first"] =
        ordered_json::parse(report.fork_evidence->first.to_json());
    evidence["second"] =
        ordered_json::parse(report.fork_evidence->second.to_json());
    out["fork_evidence"] = std::move(evidence);
  } else {
    out["fork_evidence"] = nullptr;
  }
  out["overall"] = to_string(report.overall);
  return out.dump();
}

std::string render_fork_text(const std::optional<ForkEvidence>& evidence) {
  std::ostringstream out;
  if (!evidence) {
    out << "no fork: one history is a prefix-consistent extension of the "
           "other\n";
    return out.str();
  }
  out << "FORK at version " << evidence->second.version << " (ledger "
      << evidence->first.ledger_id << ")\n";
  out << "  branch a: tree_size " << evidence->first.tree_size << ", root "
      << evidence->first.root.to_hex() << '\n';
  out << "  branch b: tree_size " << evidence->second.tree_size << ", root "
      << evidence->second.root.to_hex() << '\n';
  return out.str();
}

std::string render_fork_json(const std::optional<ForkEvidence>& evidence) {
  ordered_json out;
  if (!evidence) {
    out["forked"] = false;
    out["evidence"] = nullptr;
    return out.dump();
  }
  out["forked"] = true;
  ordered_json pair;
  pair["first"] = ordered_json::parse(evidence->first.to_json());
  pair["second"] = ordered_json::parse(evidence->second.to_json());
  out["evidence"] = std::move(pair);
  return out.dump();
}

}  // namespace eads
