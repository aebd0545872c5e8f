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
#include <optional>
#include <string>
#include <vector>

#include "eads/auditor.hpp"
#include "eads/history.hpp"

namespace eads {

// Scripted end-to-end runs: a server executes a random edit workload,
// honestly or under one adversary mode, and the auditor then judges the
// published history. Every run is a soundness/completeness trial: honest
// runs must audit CONSISTENT, adversarial runs must be flagged.
enum class ScenarioKind { kHonest, kRewrite, kFork, kTruncate };

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name);

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::kHonest;
  std::uint64_t seed = 0;
  AuditOutcome expected = AuditOutcome::kConsistent;
  AuditOutcome observed = AuditOutcome::kConsistent;
  AuditReport report;  // audit of the main journal
  // Fork runs: audit of the second branch's journal (itself chain-valid;
  // only the cross-audit catches the split) and the cross-audit evidence.
  std::optional<AuditReport> fork_branch_report;
  std::optional<ForkEvidence> fork_evidence;
  // Version at which the adversary struck; what fork evidence must name.
  std::optional<std::uint64_t> adversary_version;
  // Everything the auditor read, for data-secrecy scans.
  std::string journal_bytes;
  // Every payload the workload appended, for data-secrecy scans.
  std::vector<Bytes> payloads;

  bool flagged_correctly() const;
};

// Runs `ops` edits (16..64-byte random entries) against a fresh log-mode
// ledger under `workdir`, applying the adversary for `kind` at the midpoint,
// and audits the result. Deterministic in `seed`: entries, timestamps, keys
// and therefore every journal byte reproduce exactly.
ScenarioResult run_scenario(ScenarioKind kind, std::uint64_t seed,
                            std::uint64_t ops,
                            const std::filesystem::path& workdir);

}  // namespace eads
