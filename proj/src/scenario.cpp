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

#include "eads/scenario.hpp"

#include <random>
#include <stdexcept>

#include "eads/clock.hpp"
#include "eads/server.hpp"

namespace eads {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kHonest:
      return "honest";
    case ScenarioKind::kRewrite:
      return "rewrite";
    case ScenarioKind::kFork:
      return "fork";
    case ScenarioKind::kTruncate:
      return "truncate";
  }
  return "unknown";
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name) {
  if (name == "honest") return ScenarioKind::kHonest;
  if (name == "rewrite") return ScenarioKind::kRewrite;
  if (name == "fork") return ScenarioKind::kFork;
  if (name == "truncate") return ScenarioKind::kTruncate;
  return std::nullopt;
}

bool ScenarioResult::flagged_correctly() const {
  switch (kind) {
    case ScenarioKind::kHonest:
      return observed == AuditOutcome::kConsistent;
    case ScenarioKind::kRewrite:
    case ScenarioKind::kTruncate:
      return observed != AuditOutcome::kConsistent;
    case ScenarioKind::kFork:
      return observed == AuditOutcome::kForked && fork_evidence &&
             adversary_version &&
             fork_evidence->second.version == *adversary_version;
  }
  return false;
}

ScenarioResult run_scenario(ScenarioKind kind, std::uint64_t seed,
                            std::uint64_t ops,
                            const std::filesystem::path& workdir) {
  if (ops < 2) {
    throw std::invalid_argument("a scenario needs at least 2 ops");
  }
  std::filesystem::remove_all(workdir);
  std::filesystem::create_directories(workdir);

  ScenarioResult result;
  result.kind = kind;
  result.seed = seed;

  // Everything below is a pure function of the seed: key, timestamps and
  // workload all derive from it, so reruns produce identical journals.
  const std::string key_material = "scenario-key:" + std::to_string(seed);
  const Hash key_seed = sha256(as_bytes(key_material));
  const KeyPair keys = ed25519().keypair_from_seed(
      ByteSpan(key_seed.bytes.data(), key_seed.bytes.size()));

  ServerOptions options;
  options.ledger_id = "scenario-" + to_string(kind);
  options.mode = LedgerMode::kLog;
  options.data_dir = workdir;
  options.checkpoint_every_n_edits = 1;
  options.keys = keys;
  options.clock = fixed_step_clock(
      1'754'000'000'000 + static_cast<std::int64_t>(seed % 1'000'000) * 131,
      250);
  LedgerServer server(options);

  std::mt19937_64 rng(seed);
  const auto random_entry = [&rng] {
    // 16..64 bytes so secrecy scans have unmistakable payloads to hunt.
    const std::size_t length = 16 + static_cast<std::size_t>(rng() % 49);
    Bytes entry(length);
    for (auto& byte : entry) byte = static_cast<std::uint8_t>(rng() & 0xff);
    return entry;
  };

  const std::uint64_t trigger = ops / 2;
  if (kind != ScenarioKind::kHonest) result.adversary_version = trigger;

  for (std::uint64_t version = 1; version <= ops; ++version) {
    const Bytes entry = random_entry();
    result.payloads.push_back(entry);
    server.handle_append(ByteSpan(entry));
    if (version == trigger) {
      switch (kind) {
        case ScenarioKind::kHonest:
          break;
        case ScenarioKind::kRewrite: {
          const std::uint64_t index = rng() % trigger;
          const Bytes replacement = random_entry();
          result.payloads.push_back(replacement);
          server.set_adversary(AdversaryRewriteLeaf{index, replacement});
          break;
        }
        case ScenarioKind::kFork:
          server.set_adversary(AdversaryForkAfter{trigger});
          break;
        case ScenarioKind::kTruncate:
          server.set_adversary(
              AdversaryTruncate{std::max<std::uint64_t>(1, trigger / 2)});
          break;
      }
    }
  }

  // The auditor works from captured storage bytes, so result.journal_bytes
  // is bit-exactly everything it saw.
  const std::string main_bytes =
      FileJournalSource(server.journal_path()).read_all();
  result.journal_bytes = main_bytes;
  MemoryJournalSource main_source(main_bytes);
  result.report =
      audit(main_source, options.ledger_id, ByteSpan(keys.public_key));
  result.observed = result.report.overall;

  if (kind == ScenarioKind::kFork) {
    // "observer-b" has an odd byte sum, so the server shows it the forked
    // branch's journal; "observer-a" would see the main one.
    const std::string fork_bytes =
        FileJournalSource(server.journal_path("observer-b")).read_all();
    result.journal_bytes += fork_bytes;
    MemoryJournalSource fork_source(fork_bytes);
    result.fork_branch_report =
        audit(fork_source, options.ledger_id, ByteSpan(keys.public_key));
    MemoryJournalSource cross_a(main_bytes);
    MemoryJournalSource cross_b(fork_bytes);
    result.fork_evidence = audit_cross(cross_a, cross_b, options.ledger_id,
                                       ByteSpan(keys.public_key));
    if (result.fork_evidence) result.observed = AuditOutcome::kForked;
  }

  switch (kind) {
    case ScenarioKind::kHonest:
      result.expected = AuditOutcome::kConsistent;
      break;
    case ScenarioKind::kRewrite:
    case ScenarioKind::kTruncate:
      result.expected = AuditOutcome::kInconsistent;
      break;
    case ScenarioKind::kFork:
      result.expected = AuditOutcome::kForked;
      break;
  }
  return result;
}

}  // namespace eads
