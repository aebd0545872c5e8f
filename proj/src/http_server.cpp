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

#include "eads/http_server.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace eads {

namespace {

using nlohmann::json;

void send_error(httplib::Response& res, int status, const std::string& what) {
  json body;
  body["error"] = what;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_json(httplib::Response& res, const std::string& body) {
  res.status = 200;
  res.set_content(body, "application/json");
}

// Translates the server's exception vocabulary onto HTTP statuses.
void handle_exceptions(httplib::Response& res,
                       const std::function<void()>& body) {
  try {
    body();
  } catch (const JournalConflictError& e) {
    send_error(res, 409, e.what());
  } catch (const std::invalid_argument& e) {
    send_error(res, 400, e.what());
  } catch (const std::out_of_range& e) {
    send_error(res, 404, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

struct HttpFrontend::Impl {
  LedgerServer& ledger;
  HttpFrontendOptions options;
  httplib::Server server;
  std::thread worker;
  int bound_port = 0;

  Impl(LedgerServer& ledger_in, HttpFrontendOptions options_in)
      : ledger(ledger_in), options(std::move(options_in)) {
    register_routes();
  }

  bool authorized(const httplib::Request& req) const {
    if (options.token.empty()) return true;
    return req.get_header_value("Authorization") == "Bearer " + options.token;
  }

  static std::string session_of(const httplib::Request& req) {
    return req.get_header_value("X-EADS-Session");
  }

  bool check_ledger(const httplib::Request& req, httplib::Response& res) {
    if (req.matches[1].str() != ledger.ledger_id()) {
      send_error(res, 404, "unknown ledger");
      return false;
    }
    return true;
  }

  void register_routes() {
    static const std::string kId = R"(([A-Za-z0-9._\-]+))";

    server.Post("/ledgers/" + kId + "/entries",
                [this](const httplib::Request& req, httplib::Response& res) {
                  if (!check_ledger(req, res)) return;
                  if (!authorized(req)) {
                    send_error(res, 401, "unauthorized");
                    return;
                  }
                  handle_exceptions(res, [&] {
                    AppendResponse response = do_append(req.body);
                    send_json(res, response.to_json());
                  });
                });

    server.Get("/ledgers/" + kId + R"(/entries/(\d+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 if (!check_ledger(req, res)) return;
                 handle_exceptions(res, [&] {
                   const std::uint64_t index =
                       std::stoull(req.matches[2].str());
                   send_json(res, ledger
                                      .handle_query_index(index,
                                                          session_of(req))
                                      .to_json());
                 });
               });

    server.Get("/ledgers/" + kId + "/map/" + R"(([0-9a-f]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 if (!check_ledger(req, res)) return;
                 handle_exceptions(res, [&] {
                   auto key = from_hex(req.matches[2].str());
                   if (!key) {
                     send_error(res, 400, "key must be lowercase hex");
                     return;
                   }
                   send_json(res, ledger
                                      .handle_query_key(ByteSpan(*key),
                                                        session_of(req))
                                      .to_json());
                 });
               });

    server.Get("/ledgers/" + kId + "/checkpoint",
               [this](const httplib::Request& req, httplib::Response& res) {
                 if (!check_ledger(req, res)) return;
                 handle_exceptions(res, [&] {
                   send_json(res,
                             ledger.handle_checkpoint(session_of(req))
                                 .to_json());
                 });
               });

    server.Get("/journal/" + kId + "/latest",
               [this](const httplib::Request& req, httplib::Response& res) {
                 if (!check_ledger(req, res)) return;
                 handle_exceptions(res, [&] {
                   auto latest = ledger.journal_latest(session_of(req));
                   if (!latest) {
                     send_error(res, 404, "journal is empty");
                     return;
                   }
                   send_json(res, latest->to_json());
                 });
               });

    server.Get("/journal/" + kId,
               [this](const httplib::Request& req, httplib::Response& res) {
                 if (!check_ledger(req, res)) return;
                 handle_exceptions(res, [&] {
                   const auto path = ledger.journal_path(session_of(req));
                   std::ifstream in(path, std::ios::binary);
                   if (!in) {
                     send_error(res, 500, "journal unreadable");
                     return;
                   }
                   std::ostringstream bytes;
                   bytes << in.rdbuf();
                   res.status = 200;
                   res.set_content(bytes.str(), "application/jsonl");
                 });
               });

    if (options.admin_enabled) {
      server.Post("/admin/adversary",
                  [this](const httplib::Request& req, httplib::Response& res) {
                    if (!authorized(req)) {
                      send_error(res, 401, "unauthorized");
                      return;
                    }
                    handle_exceptions(res, [&] { do_set_adversary(req, res); });
                  });
    }
  }

  AppendResponse do_append(const std::string& body) {
    if (ledger.mode() == LedgerMode::kLog) {
      const auto parsed = json::parse(body, nullptr, false);
      if (!parsed.is_object() || parsed.size() != 1 ||
          !parsed.contains("entry") || !parsed["entry"].is_string()) {
        throw std::invalid_argument(
            "log-mode append body must be {\"entry\": \"<hex>\"}");
      }
      const auto entry = from_hex(parsed["entry"].get<std::string>());
      if (!entry) {
        throw std::invalid_argument("entry must be lowercase hex");
      }
      return ledger.handle_append(ByteSpan(*entry));
    }
    const auto op = EditOp::parse(body);
    if (!op) {
      throw std::invalid_argument(
          "map-mode append body must be a canonical edit op");
    }
    return ledger.handle_append(*op);
  }

  void do_set_adversary(const httplib::Request& req, httplib::Response& res) {
    const auto parsed = json::parse(req.body, nullptr, false);
    if (!parsed.is_object() || !parsed.contains("mode") ||
        !parsed["mode"].is_string()) {
      throw std::invalid_argument("adversary body must carry a mode");
    }
    const std::string mode = parsed["mode"].get<std::string>();
    if (mode == "NONE") {
      ledger.set_adversary(AdversaryNone{});
    } else if (mode == "REWRITE_LEAF") {
      if (!parsed.contains("index") ||
          !parsed["index"].is_number_unsigned() ||
          !parsed.contains("entry") || !parsed["entry"].is_string()) {
        throw std::invalid_argument("REWRITE_LEAF wants index and entry hex");
      }
      const auto entry = from_hex(parsed["entry"].get<std::string>());
      if (!entry) throw std::invalid_argument("entry must be lowercase hex");
      ledger.set_adversary(AdversaryRewriteLeaf{
          parsed["index"].get<std::uint64_t>(), *entry});
    } else if (mode == "FORK_AFTER") {
      if (!parsed.contains("version") ||
          !parsed["version"].is_number_unsigned()) {
        throw std::invalid_argument("FORK_AFTER wants a version");
      }
      ledger.set_adversary(
          AdversaryForkAfter{parsed["version"].get<std::uint64_t>()});
    } else if (mode == "TRUNCATE") {
      if (!parsed.contains("size") || !parsed["size"].is_number_unsigned()) {
        throw std::invalid_argument("TRUNCATE wants a size");
      }
      ledger.set_adversary(
          AdversaryTruncate{parsed["size"].get<std::uint64_t>()});
    } else {
      throw std::invalid_argument("unknown adversary mode " + mode);
    }
    json ack;
    ack["ok"] = true;
    send_json(res, ack.dump());
  }
};

HttpFrontend::HttpFrontend(LedgerServer& ledger, HttpFrontendOptions options)
    : impl_(std::make_unique<Impl>(ledger, std::move(options))) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::start() {
  auto& impl = *impl_;
  if (impl.options.port == 0) {
    impl.bound_port =
        impl.server.bind_to_any_port(impl.options.listen_address);
    if (impl.bound_port <= 0) {
      throw std::runtime_error("cannot bind " + impl.options.listen_address);
    }
  } else {
    if (!impl.server.bind_to_port(impl.options.listen_address,
                                  impl.options.port)) {
      throw std::runtime_error("cannot bind " + impl.options.listen_address +
                               ":" + std::to_string(impl.options.port));
    }
    impl.bound_port = impl.options.port;
  }
  impl.worker = std::thread([&impl] { impl.server.listen_after_bind(); });
  for (int i = 0; i < 5000 && !impl.server.is_running(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  if (!impl.server.is_running()) {
    stop();
    throw std::runtime_error("http server failed to start");
  }
  return impl.bound_port;
}

void HttpFrontend::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

int HttpFrontend::port() const { return impl_->bound_port; }

}  // namespace eads
