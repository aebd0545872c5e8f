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

#include "eads/history.hpp"

#include <map>
#include <stdexcept>

#include <json.hpp>

namespace eads {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json checkpoint_to_json_value(const SignedCheckpoint& cp) {
  ordered_json j;
  j["ledger_id"] = cp.ledger_id;
  j["version"] = cp.version;
  j["tree_size"] = cp.tree_size;
  j["root"] = cp.root.to_hex();
  j["map_root"] = cp.map_root ? ordered_json(cp.map_root->to_hex())
                              : ordered_json(nullptr);
  j["timestamp"] = cp.timestamp_ms;
  j["signature"] = to_hex(cp.signature);
  return j;
}

std::optional<SignedCheckpoint> checkpoint_from_json_value(
    const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 7) return std::nullopt;
  SignedCheckpoint cp;
  auto id_it = j.find("ledger_id");
  auto ver_it = j.find("version");
  auto size_it = j.find("tree_size");
  auto root_it = j.find("root");
  auto map_it = j.find("map_root");
  auto ts_it = j.find("timestamp");
  auto sig_it = j.find("signature");
  if (id_it == j.end() || !id_it->is_string() || ver_it == j.end() ||
      !ver_it->is_number_unsigned() || size_it == j.end() ||
      !size_it->is_number_unsigned() || root_it == j.end() ||
      !root_it->is_string() || map_it == j.end() || ts_it == j.end() ||
      !ts_it->is_number_integer() || sig_it == j.end() ||
      !sig_it->is_string()) {
    return std::nullopt;
  }
  cp.ledger_id = id_it->get<std::string>();
  cp.version = ver_it->get<std::uint64_t>();
  cp.tree_size = size_it->get<std::uint64_t>();
  auto root = Hash::from_hex(root_it->get<std::string>());
  if (!root) return std::nullopt;
  cp.root = *root;
  if (map_it->is_null()) {
    cp.map_root = std::nullopt;
  } else if (map_it->is_string()) {
    auto mr = Hash::from_hex(map_it->get<std::string>());
    if (!mr) return std::nullopt;
    cp.map_root = *mr;
  } else {
    return std::nullopt;
  }
  cp.timestamp_ms = ts_it->get<std::int64_t>();
  auto sig = from_hex(sig_it->get<std::string>());
  if (!sig) return std::nullopt;
  cp.signature = std::move(*sig);
  return cp;
}

}  // namespace

Bytes canonical_checkpoint_bytes(const std::string& ledger_id,
                                 std::uint64_t version,
                                 std::uint64_t tree_size, const Hash& root,
                                 const std::optional<Hash>& map_root,
                                 std::int64_t timestamp_ms) {
  std::string s = "eads/v1\n";
  s += ledger_id;
  s += '\n';
  s += std::to_string(version);
  s += '\n';
  s += std::to_string(tree_size);
  s += '\n';
  s += root.to_hex();
  s += '\n';
  s += map_root ? map_root->to_hex() : "-";
  s += '\n';
  s += std::to_string(timestamp_ms);
  s += '\n';
  return to_bytes(s);
}

SignedCheckpoint make_checkpoint(const std::string& ledger_id,
                                 std::uint64_t version,
                                 std::uint64_t tree_size, const Hash& root,
                                 const std::optional<Hash>& map_root,
                                 std::int64_t timestamp_ms, ByteSpan secret,
                                 const SignatureScheme& scheme) {
  SignedCheckpoint cp;
  cp.ledger_id = ledger_id;
  cp.version = version;
  cp.tree_size = tree_size;
  cp.root = root;
  cp.map_root = map_root;
  cp.timestamp_ms = timestamp_ms;
  cp.signature = scheme.sign(
      secret, canonical_checkpoint_bytes(ledger_id, version, tree_size, root,
                                         map_root, timestamp_ms));
  return cp;
}

bool verify_checkpoint(const SignedCheckpoint& cp, ByteSpan public_key,
                       const SignatureScheme& scheme) {
  return scheme.verify(
      public_key,
      canonical_checkpoint_bytes(cp.ledger_id, cp.version, cp.tree_size,
                                 cp.root, cp.map_root, cp.timestamp_ms),
      cp.signature);
}

std::string SignedCheckpoint::to_json() const {
  return checkpoint_to_json_value(*this).dump();
}

std::optional<SignedCheckpoint> SignedCheckpoint::from_json(
    std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::nullopt;
  return checkpoint_from_json_value(j);
}

std::string HistoryRecord::to_json() const {
  ordered_json j;
  j["checkpoint"] = checkpoint_to_json_value(checkpoint);
  j["prev_version"] =
      prev_version ? ordered_json(*prev_version) : ordered_json(nullptr);
  if (consistency) {
    ordered_json cj;
    cj["old_size"] = consistency->old_size;
    cj["new_size"] = consistency->new_size;
    cj["nodes"] = ordered_json::array();
    for (const auto& h : consistency->nodes) cj["nodes"].push_back(h.to_hex());
    j["consistency"] = std::move(cj);
  } else {
    j["consistency"] = nullptr;
  }
  return j.dump();
}

std::optional<HistoryRecord> HistoryRecord::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || j.size() != 3) return std::nullopt;
  auto cp_it = j.find("checkpoint");
  auto prev_it = j.find("prev_version");
  auto cons_it = j.find("consistency");
  if (cp_it == j.end() || prev_it == j.end() || cons_it == j.end()) {
    return std::nullopt;
  }
  HistoryRecord rec;
  auto cp = checkpoint_from_json_value(*cp_it);
  if (!cp) return std::nullopt;
  rec.checkpoint = std::move(*cp);
  if (prev_it->is_null()) {
    rec.prev_version = std::nullopt;
  } else if (prev_it->is_number_unsigned()) {
    rec.prev_version = prev_it->get<std::uint64_t>();
  } else {
    return std::nullopt;
  }
  if (cons_it->is_null()) {
    rec.consistency = std::nullopt;
  } else if (cons_it->is_object()) {
    auto proof = ConsistencyProof::from_json(cons_it->dump());
    if (!proof) return std::nullopt;
    rec.consistency = std::move(*proof);
  } else {
    return std::nullopt;
  }
  return rec;
}

std::string to_string(LinkVerdict verdict) {
  switch (verdict) {
    case LinkVerdict::kOk:
      return "OK";
    case LinkVerdict::kBadSignature:
      return "BAD_SIGNATURE";
    case LinkVerdict::kSizeRegression:
      return "SIZE_REGRESSION";
    case LinkVerdict::kProofInvalid:
      return "PROOF_INVALID";
    case LinkVerdict::kVersionGap:
      return "VERSION_GAP";
    case LinkVerdict::kDecodeError:
      return "DECODE_ERROR";
  }
  return "UNKNOWN";
}

std::string to_string(AuditOutcome outcome) {
  switch (outcome) {
    case AuditOutcome::kConsistent:
      return "CONSISTENT";
    case AuditOutcome::kInconsistent:
      return "INCONSISTENT";
    case AuditOutcome::kForked:
      return "FORKED";
  }
  return "UNKNOWN";
}

AuditReport verify_chain(const std::vector<HistoryRecord>& records,
                         ByteSpan public_key, const SignatureScheme& scheme) {
  AuditReport report;
  report.records_checked = records.size();
  if (records.empty()) {
    report.overall = AuditOutcome::kConsistent;  // vacuous
    return report;
  }

  report.ledger_id = records.front().checkpoint.ledger_id;

  const auto& genesis = records.front();
  if (!verify_checkpoint(genesis.checkpoint, public_key, scheme)) {
    report.genesis_ok = false;
    report.genesis_detail = "genesis checkpoint signature invalid";
  } else if (genesis.prev_version || genesis.consistency) {
    report.genesis_ok = false;
    report.genesis_detail = "first record is not genesis-shaped";
  }

  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& prev = records[i - 1].checkpoint;
    const auto& rec = records[i];
    const auto& cur = rec.checkpoint;
    LinkResult link;
    link.from_version = prev.version;
    link.to_version = cur.version;
    link.verdict = LinkVerdict::kOk;

    if (!verify_checkpoint(cur, public_key, scheme)) {
      link.verdict = LinkVerdict::kBadSignature;
      link.detail = "checkpoint signature invalid";
    } else if (cur.ledger_id != prev.ledger_id) {
      link.verdict = LinkVerdict::kVersionGap;
      link.detail = "ledger_id mismatch";
    } else if (cur.version == prev.version && cur.root != prev.root) {
      // Two validly signed checkpoints for the same version with different
      // roots: a rewritten history inside a single journal.
      link.verdict = LinkVerdict::kProofInvalid;
      link.detail = "conflicting roots for one version";
      if (!report.fork_evidence) report.fork_evidence = ForkEvidence{prev, cur};
    } else if (cur.version <= prev.version || cur.tree_size < prev.tree_size) {
      link.verdict = LinkVerdict::kSizeRegression;
      link.detail = "version or tree size regressed";
    } else if (!cur.map_root && cur.version != cur.tree_size) {
      // For a bare log the version counts appended entries.
      link.verdict = LinkVerdict::kSizeRegression;
      link.detail = "log version does not match tree size";
    } else if (!rec.prev_version || *rec.prev_version != prev.version) {
      link.verdict = LinkVerdict::kVersionGap;
      link.detail = "record does not link to the previous version";
    } else if (!rec.consistency) {
      link.verdict = LinkVerdict::kProofInvalid;
      link.detail = "missing consistency proof";
    } else if (!verify_consistency(prev.tree_size, prev.root, cur.tree_size,
                                   cur.root, *rec.consistency)) {
      link.verdict = LinkVerdict::kProofInvalid;
      link.detail = "consistency proof does not verify";
    }
    report.links.push_back(std::move(link));
  }

  bool all_ok = report.genesis_ok;
  for (const auto& link : report.links) {
    all_ok = all_ok && link.verdict == LinkVerdict::kOk;
  }
  if (report.fork_evidence) {
    report.overall = AuditOutcome::kForked;
  } else {
    report.overall =
        all_ok ? AuditOutcome::kConsistent : AuditOutcome::kInconsistent;
  }
  return report;
}

std::optional<ForkEvidence> detect_fork(
    const std::vector<HistoryRecord>& records_a,
    const std::vector<HistoryRecord>& records_b) {
  if (!records_a.empty() && !records_b.empty() &&
      records_a.front().checkpoint.ledger_id !=
          records_b.front().checkpoint.ledger_id) {
    throw std::invalid_argument("detect_fork: ledger_id mismatch");
  }

  std::map<std::uint64_t, const SignedCheckpoint*> by_version;
  std::map<std::uint64_t, const SignedCheckpoint*> by_size;
  for (const auto& rec : records_a) {
    by_version.emplace(rec.checkpoint.version, &rec.checkpoint);
    by_size.emplace(rec.checkpoint.tree_size, &rec.checkpoint);
  }

  std::optional<ForkEvidence> earliest;
  auto consider = [&](const SignedCheckpoint& a, const SignedCheckpoint& b) {
    if (a.root == b.root && a.tree_size == b.tree_size &&
        a.map_root == b.map_root) {
      return;
    }
    if (!earliest || b.version < earliest->second.version) {
      earliest = ForkEvidence{a, b};
    }
  };

  for (const auto& rec : records_b) {
    const auto& cp = rec.checkpoint;
    if (auto it = by_version.find(cp.version); it != by_version.end()) {
      consider(*it->second, cp);
    }
    if (auto it = by_size.find(cp.tree_size);
        it != by_size.end() && it->second->root != cp.root) {
      consider(*it->second, cp);
    }
  }
  return earliest;
}

}  // namespace eads
