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

#include "eads/sparse_map.hpp"

#include <array>
#include <stdexcept>

#include <json.hpp>

namespace eads {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::array<Hash, kMapDepth + 1>& default_table() {
  static const auto table = [] {
    std::array<Hash, kMapDepth + 1> t;
    t[0] = leaf_hash({});
    for (unsigned h = 1; h <= kMapDepth; ++h) {
      t[h] = node_hash(t[h - 1], t[h - 1]);
    }
    return t;
  }();
  return table;
}

}  // namespace

Hash default_subtree_root(unsigned height) {
  if (height > kMapDepth) {
    throw std::out_of_range("default_subtree_root: height must be <= 256");
  }
  return default_table()[height];
}

std::string MapProof::to_json() const {
  ordered_json j;
  j["key_hash"] = key_hash.to_hex();
  j["present"] = present;
  j["value_leaf"] = value_leaf.to_hex();
  j["siblings"] = ordered_json::array();
  for (const auto& h : siblings) j["siblings"].push_back(h.to_hex());
  return j.dump();
}

std::optional<MapProof> MapProof::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || j.size() != 4) return std::nullopt;
  auto kh_it = j.find("key_hash");
  auto pr_it = j.find("present");
  auto vl_it = j.find("value_leaf");
  auto sb_it = j.find("siblings");
  if (kh_it == j.end() || !kh_it->is_string() || pr_it == j.end() ||
      !pr_it->is_boolean() || vl_it == j.end() || !vl_it->is_string() ||
      sb_it == j.end() || !sb_it->is_array()) {
    return std::nullopt;
  }
  auto key_hash = Hash::from_hex(kh_it->get<std::string>());
  auto value_leaf = Hash::from_hex(vl_it->get<std::string>());
  if (!key_hash || !value_leaf) return std::nullopt;
  MapProof proof;
  proof.key_hash = *key_hash;
  proof.present = pr_it->get<bool>();
  proof.value_leaf = *value_leaf;
  proof.siblings.reserve(sb_it->size());
  for (const auto& elem : *sb_it) {
    if (!elem.is_string()) return std::nullopt;
    auto h = Hash::from_hex(elem.get<std::string>());
    if (!h) return std::nullopt;
    proof.siblings.push_back(*h);
  }
  if (proof.siblings.size() != kMapDepth) return std::nullopt;
  return proof;
}

Hash SparseMap::root() const {
  return root_ ? root_->hash : default_subtree_root(kMapDepth);
}

std::unique_ptr<SparseMap::Node> SparseMap::clone_node(const Node* node) {
  if (node == nullptr) return nullptr;
  auto copy = std::make_unique<Node>();
  copy->hash = node->hash;
  copy->left = clone_node(node->left.get());
  copy->right = clone_node(node->right.get());
  return copy;
}

SparseMap SparseMap::clone() const {
  SparseMap copy;
  copy.root_ = clone_node(root_.get());
  copy.bindings_ = bindings_;
  return copy;
}

// Rewrites the path for key_hash; leaf == nullptr clears the binding.
// Subtrees that fall back to all-default are pruned so the node structure
// stays canonical for the binding set.
void SparseMap::update_path(std::unique_ptr<Node>& node, unsigned height,
                            const Hash& key_hash, const Hash* leaf) {
  if (!node) {
    if (leaf == nullptr) return;  // clearing below an all-default subtree
    node = std::make_unique<Node>();
  }
  if (height == 0) {
    if (leaf == nullptr) {
      node.reset();
    } else {
      node->hash = *leaf;
    }
    return;
  }
  unsigned depth = kMapDepth - height;
  auto& child = key_bit(key_hash, depth) ? node->right : node->left;
  update_path(child, height - 1, key_hash, leaf);
  if (!node->left && !node->right) {
    node.reset();
    return;
  }
  const Hash left = node->left ? node->left->hash
                               : default_subtree_root(height - 1);
  const Hash right = node->right ? node->right->hash
                                 : default_subtree_root(height - 1);
  node->hash = node_hash(left, right);
}

Hash SparseMap::put(ByteSpan key, ByteSpan value) {
  return put_hashed(sha256(key), value);
}

Hash SparseMap::erase(ByteSpan key) { return erase_hashed(sha256(key)); }

std::pair<std::optional<Bytes>, MapProof> SparseMap::get_with_proof(
    ByteSpan key) const {
  return get_with_proof_hashed(sha256(key));
}

Hash SparseMap::put_hashed(const Hash& key_hash, ByteSpan value) {
  bindings_[key_hash] = Bytes(value.begin(), value.end());
  const Hash leaf = leaf_hash(value);
  update_path(root_, kMapDepth, key_hash, &leaf);
  return root();
}

Hash SparseMap::erase_hashed(const Hash& key_hash) {
  auto it = bindings_.find(key_hash);
  if (it == bindings_.end()) return root();
  bindings_.erase(it);
  update_path(root_, kMapDepth, key_hash, nullptr);
  return root();
}

std::pair<std::optional<Bytes>, MapProof> SparseMap::get_with_proof_hashed(
    const Hash& key_hash) const {
  MapProof proof;
  proof.key_hash = key_hash;
  proof.siblings.reserve(kMapDepth);

  const Node* node = root_.get();
  for (unsigned depth = 0; depth < kMapDepth; ++depth) {
    unsigned child_height = kMapDepth - depth - 1;
    if (node == nullptr) {
      proof.siblings.push_back(default_subtree_root(child_height));
      continue;
    }
    const Node* next = key_bit(key_hash, depth) ? node->right.get()
                                                : node->left.get();
    const Node* other = key_bit(key_hash, depth) ? node->left.get()
                                                 : node->right.get();
    proof.siblings.push_back(other ? other->hash
                                   : default_subtree_root(child_height));
    node = next;
  }

  auto it = bindings_.find(key_hash);
  if (it == bindings_.end()) {
    proof.present = false;
    proof.value_leaf = default_subtree_root(0);
    return {std::nullopt, std::move(proof)};
  }
  proof.present = true;
  proof.value_leaf = leaf_hash(it->second);
  return {it->second, std::move(proof)};
}

bool verify_map_proof(const Hash& root, ByteSpan key,
                      const std::optional<Bytes>& claimed_value,
                      const MapProof& proof) {
  return verify_map_proof_hashed(root, sha256(key), claimed_value, proof);
}

bool verify_map_proof_hashed(const Hash& root, const Hash& key_hash,
                             const std::optional<Bytes>& claimed_value,
                             const MapProof& proof) {
  if (proof.siblings.size() != kMapDepth) return false;
  if (proof.key_hash != key_hash) return false;
  if (proof.present != claimed_value.has_value()) return false;
  const Hash expected_leaf = claimed_value ? leaf_hash(*claimed_value)
                                           : default_subtree_root(0);
  if (proof.value_leaf != expected_leaf) return false;

  // Fold upward: the deepest sibling pairs with the leaf, the depth-0
  // sibling produces the root.
  Hash current = proof.value_leaf;
  for (unsigned step = 0; step < kMapDepth; ++step) {
    unsigned depth = kMapDepth - 1 - step;
    const Hash& sibling = proof.siblings[depth];
    current = key_bit(key_hash, depth) ? node_hash(sibling, current)
                                       : node_hash(current, sibling);
  }
  return current == root;
}

}  // namespace eads
