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

#include "eads/log_backed_map.hpp"

#include <json.hpp>

namespace eads {

EditOp EditOp::put(ByteSpan key, ByteSpan value) {
  return EditOp{Kind::kPut, Bytes(key.begin(), key.end()),
                Bytes(value.begin(), value.end())};
}

EditOp EditOp::del(ByteSpan key) {
  return EditOp{Kind::kDelete, Bytes(key.begin(), key.end()), {}};
}

// Built by hand rather than through a JSON library so the byte layout is
// pinned: no whitespace, fields exactly in the order kind, key, value.
Bytes EditOp::canonical_bytes() const {
  std::string s = "{\"kind\":\"";
  s += kind == Kind::kPut ? "PUT" : "DELETE";
  s += "\",\"key\":\"";
  s += to_hex(key);
  s += "\",\"value\":\"";
  s += to_hex(value);
  s += "\"}";
  return to_bytes(s);
}

std::optional<EditOp> EditOp::parse(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || j.size() != 3) return std::nullopt;
  auto kind_it = j.find("kind");
  auto key_it = j.find("key");
  auto value_it = j.find("value");
  if (kind_it == j.end() || !kind_it->is_string() || key_it == j.end() ||
      !key_it->is_string() || value_it == j.end() || !value_it->is_string()) {
    return std::nullopt;
  }
  EditOp op;
  const std::string kind = kind_it->get<std::string>();
  if (kind == "PUT") {
    op.kind = Kind::kPut;
  } else if (kind == "DELETE") {
    op.kind = Kind::kDelete;
  } else {
    return std::nullopt;
  }
  auto key = from_hex(key_it->get<std::string>());
  auto value = from_hex(value_it->get<std::string>());
  if (!key || !value) return std::nullopt;
  if (op.kind == Kind::kDelete && !value->empty()) return std::nullopt;
  op.key = std::move(*key);
  op.value = std::move(*value);
  return op;
}

CombinedDigest LogBackedMap::apply_edit(const EditOp& op) {
  log_.append(op.canonical_bytes());
  if (op.kind == EditOp::Kind::kPut) {
    map_.put(op.key, op.value);
  } else {
    map_.erase(op.key);
  }
  return digest();
}

CombinedDigest LogBackedMap::digest() const {
  return CombinedDigest{log_.size(), log_.root(), map_.root()};
}

bool replay_verify(const std::vector<EditOp>& ops,
                   const CombinedDigest& claimed) {
  if (ops.size() != claimed.log_size) return false;
  LogBackedMap replayed;
  for (const auto& op : ops) replayed.apply_edit(op);
  return replayed.digest() == claimed;
}

std::optional<std::vector<EditOp>> parse_edit_script(std::string_view text) {
  std::vector<EditOp> ops;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (line.empty()) continue;
    auto op = EditOp::parse(line);
    if (!op) return std::nullopt;
    ops.push_back(std::move(*op));
  }
  return ops;
}

}  // namespace eads
