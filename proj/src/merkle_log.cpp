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

#include "eads/merkle_log.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace eads {

namespace {

using ordered_json = nlohmann::ordered_json;

// Largest power of two strictly below n; the split point of the tree-hash
// recursion. Requires n >= 2.
std::uint64_t split_point(std::uint64_t n) { return std::bit_floor(n - 1); }

std::optional<std::uint64_t> get_u64(const nlohmann::json& j,
                                     const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned()) return std::nullopt;
  return it->get<std::uint64_t>();
}

std::optional<std::vector<Hash>> get_hash_array(const nlohmann::json& j,
                                                const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) return std::nullopt;
  std::vector<Hash> out;
  out.reserve(it->size());
  for (const auto& elem : *it) {
    if (!elem.is_string()) return std::nullopt;
    auto h = Hash::from_hex(elem.get<std::string>());
    if (!h) return std::nullopt;
    out.push_back(*h);
  }
  return out;
}

}  // namespace

std::string InclusionProof::to_json() const {
  ordered_json j;
  j["leaf_index"] = leaf_index;
  j["tree_size"] = tree_size;
  j["path"] = ordered_json::array();
  for (const auto& h : path) j["path"].push_back(h.to_hex());
  return j.dump();
}

std::optional<InclusionProof> InclusionProof::from_json(
    std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || j.size() != 3) return std::nullopt;
  auto leaf_index = get_u64(j, "leaf_index");
  auto tree_size = get_u64(j, "tree_size");
  auto path = get_hash_array(j, "path");
  if (!leaf_index || !tree_size || !path) return std::nullopt;
  return InclusionProof{*leaf_index, *tree_size, std::move(*path)};
}

std::string ConsistencyProof::to_json() const {
  ordered_json j;
  j["old_size"] = old_size;
  j["new_size"] = new_size;
  j["nodes"] = ordered_json::array();
  for (const auto& h : nodes) j["nodes"].push_back(h.to_hex());
  return j.dump();
}

std::optional<ConsistencyProof> ConsistencyProof::from_json(
    std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || j.size() != 3) return std::nullopt;
  auto old_size = get_u64(j, "old_size");
  auto new_size = get_u64(j, "new_size");
  auto nodes = get_hash_array(j, "nodes");
  if (!old_size || !new_size || !nodes) return std::nullopt;
  return ConsistencyProof{*old_size, *new_size, std::move(*nodes)};
}

Hash empty_log_root() { return sha256({}); }

std::pair<std::uint64_t, Hash> VerifiableLog::append(ByteSpan entry) {
  entries_.emplace_back(entry.begin(), entry.end());
  if (levels_.empty()) levels_.emplace_back();
  levels_[0].push_back(leaf_hash(entry));

  // Fill in the interior nodes that just became complete.
  for (std::size_t level = 1; (size() >> level) != 0; ++level) {
    if (level == levels_.size()) levels_.emplace_back();
    auto& row = levels_[level];
    const auto& below = levels_[level - 1];
    while (row.size() < (size() >> level)) {
      std::size_t i = row.size();
      row.push_back(node_hash(below[2 * i], below[2 * i + 1]));
    }
  }
  return {size(), root()};
}

Hash VerifiableLog::root_at(std::uint64_t size) const {
  if (size > this->size()) {
    throw std::out_of_range("root_at: size exceeds log size");
  }
  if (size == 0) return empty_log_root();
  return range_hash(0, size);
}

// MTH over leaves [begin, end). Complete aligned subtrees come straight from
// the level cache; only right-edge partial subtrees recurse.
Hash VerifiableLog::range_hash(std::uint64_t begin, std::uint64_t end) const {
  std::uint64_t n = end - begin;
  if (n == 1) return levels_[0][begin];
  if (std::has_single_bit(n) && begin % n == 0) {
    std::size_t level = static_cast<std::size_t>(std::countr_zero(n));
    std::uint64_t index = begin / n;
    if (level < levels_.size() && index < levels_[level].size()) {
      return levels_[level][index];
    }
  }
  std::uint64_t k = split_point(n);
  return node_hash(range_hash(begin, begin + k), range_hash(begin + k, end));
}

void VerifiableLog::path_nodes(std::uint64_t index, std::uint64_t begin,
                               std::uint64_t end,
                               std::vector<Hash>& out) const {
  std::uint64_t n = end - begin;
  if (n == 1) return;
  std::uint64_t k = split_point(n);
  if (index < k) {
    path_nodes(index, begin, begin + k, out);
    out.push_back(range_hash(begin + k, end));
  } else {
    path_nodes(index - k, begin + k, end, out);
    out.push_back(range_hash(begin, begin + k));
  }
}

InclusionProof VerifiableLog::inclusion_proof(std::uint64_t leaf_index,
                                              std::uint64_t tree_size) const {
  if (tree_size > size() || leaf_index >= tree_size) {
    throw std::out_of_range("inclusion_proof: leaf_index/tree_size invalid");
  }
  InclusionProof proof{leaf_index, tree_size, {}};
  path_nodes(leaf_index, 0, tree_size, proof.path);
  return proof;
}

// Subproof recursion from the certificate-transparency log design.
// old_root_known tracks whether the verifier can compute the old root
// without help; it stays true only while the old tree is a prefix of the
// current subtree, which is the case exactly until we descend right.
void VerifiableLog::subproof_nodes(std::uint64_t old_size,
                                   std::uint64_t begin, std::uint64_t end,
                                   bool old_root_known,
                                   std::vector<Hash>& out) const {
  std::uint64_t n = end - begin;
  if (old_size == n) {
    if (!old_root_known) out.push_back(range_hash(begin, end));
    return;
  }
  std::uint64_t k = split_point(n);
  if (old_size <= k) {
    subproof_nodes(old_size, begin, begin + k, old_root_known, out);
    out.push_back(range_hash(begin + k, end));
  } else {
    subproof_nodes(old_size - k, begin + k, end, false, out);
    out.push_back(range_hash(begin, begin + k));
  }
}

ConsistencyProof VerifiableLog::consistency_proof(
    std::uint64_t old_size, std::uint64_t new_size) const {
  if (new_size > size() || old_size > new_size) {
    throw std::out_of_range("consistency_proof: sizes invalid");
  }
  ConsistencyProof proof{old_size, new_size, {}};
  if (old_size == new_size || old_size == 0) return proof;
  subproof_nodes(old_size, 0, new_size, true, proof.nodes);
  return proof;
}

const Bytes& VerifiableLog::entry(std::uint64_t index) const {
  if (index >= size()) throw std::out_of_range("entry: index out of range");
  return entries_[index];
}

void VerifiableLog::tamper_rewrite(std::uint64_t index, ByteSpan entry) {
  if (index >= size()) throw std::out_of_range("tamper_rewrite: bad index");
  entries_[index].assign(entry.begin(), entry.end());
  rebuild_levels();
}

void VerifiableLog::tamper_truncate(std::uint64_t size) {
  if (size > this->size()) throw std::out_of_range("tamper_truncate: bad size");
  entries_.resize(size);
  rebuild_levels();
}

void VerifiableLog::rebuild_levels() {
  levels_.clear();
  auto entries = std::move(entries_);
  entries_.clear();
  for (const auto& e : entries) append(e);
}

VerifiableLog VerifiableLog::load(const std::filesystem::path& file) {
  VerifiableLog log;
  std::ifstream in(file);
  if (!in) return log;  // absent file means a fresh log
  // An empty line is the empty entry, so every line counts.
  std::string line;
  while (std::getline(in, line)) {
    auto bytes = from_hex(line);
    if (!bytes) throw std::runtime_error("log entry file: invalid hex line");
    log.append(*bytes);
  }
  return log;
}

void VerifiableLog::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("log entry file: cannot open for write");
  for (const auto& e : entries_) out << to_hex(e) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("log entry file: write failed");
}

bool verify_inclusion(const Hash& leaf, std::uint64_t leaf_index,
                      std::uint64_t tree_size, const InclusionProof& proof,
                      const Hash& root) {
  if (proof.leaf_index != leaf_index || proof.tree_size != tree_size) {
    return false;
  }
  if (tree_size == 0 || leaf_index >= tree_size) return false;

  std::uint64_t fn = leaf_index;
  std::uint64_t sn = tree_size - 1;
  Hash r = leaf;
  for (const Hash& p : proof.path) {
    if (sn == 0) return false;
    if ((fn & 1) != 0 || fn == sn) {
      r = node_hash(p, r);
      if ((fn & 1) == 0) {
        while (fn != 0 && (fn & 1) == 0) {
          fn >>= 1;
          sn >>= 1;
        }
      }
    } else {
      r = node_hash(r, p);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return sn == 0 && r == root;
}

bool verify_consistency(std::uint64_t old_size, const Hash& old_root,
                        std::uint64_t new_size, const Hash& new_root,
                        const ConsistencyProof& proof) {
  if (proof.old_size != old_size || proof.new_size != new_size) return false;
  if (old_size > new_size) return false;
  if (old_size == new_size) {
    return proof.nodes.empty() && old_root == new_root;
  }
  if (old_size == 0) return proof.nodes.empty();
  if (proof.nodes.empty()) return false;

  // When the old tree is a complete subtree its root is computable by the
  // verifier, so the proof omits it; account for that here.
  std::size_t next = 0;
  Hash first;
  if (std::has_single_bit(old_size)) {
    first = old_root;
  } else {
    first = proof.nodes[next++];
  }

  std::uint64_t fn = old_size - 1;
  std::uint64_t sn = new_size - 1;
  while ((fn & 1) != 0) {
    fn >>= 1;
    sn >>= 1;
  }

  Hash fr = first;
  Hash sr = first;
  for (; next < proof.nodes.size(); ++next) {
    const Hash& c = proof.nodes[next];
    if (sn == 0) return false;
    if ((fn & 1) != 0 || fn == sn) {
      fr = node_hash(c, fr);
      sr = node_hash(c, sr);
      if ((fn & 1) == 0) {
        while (fn != 0 && (fn & 1) == 0) {
          fn >>= 1;
          sn >>= 1;
        }
      }
    } else {
      sr = node_hash(sr, c);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return fr == old_root && sr == new_root && sn == 0;
}

}  // namespace eads
