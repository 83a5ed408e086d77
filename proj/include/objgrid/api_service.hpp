/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include <httplib.h>

#include "objgrid/analytics.hpp"
#include "objgrid/gridviz.hpp"
#include "objgrid/json_io.hpp"
#include "objgrid/trace_model.hpp"

namespace objgrid {

struct StoredLog {
    std::string id;
    EventLog log;
    std::uint64_t created_count = 0;
};

/// In-memory map of immutable log snapshots. Readers hold a shared_ptr, so a
/// snapshot stays valid for as long as any request uses it.
class LogStore {
  public:
    using IdSource = std::function<std::string()>;

    LogStore() : next_id_(random_tokens()) {}
    explicit LogStore(IdSource ids) : next_id_(std::move(ids)) {}

    std::shared_ptr<const StoredLog> put(EventLog log) {
        auto stored = std::make_shared<StoredLog>();
        stored->log = std::move(log);
        for (const auto& ev : stored->log) {
            if (ev.kind == EventKind::Created) ++stored->created_count;
        }
        std::unique_lock lock(mutex_);
        do {
            stored->id = next_id_();
        } while (logs_.count(stored->id));
        logs_.emplace(stored->id, stored);
        return stored;
    }

    std::shared_ptr<const StoredLog> get(const std::string& id) const {
        std::shared_lock lock(mutex_);
        auto it = logs_.find(id);
        return it == logs_.end() ? nullptr : it->second;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return logs_.size();
    }

    /// Sequential ids "log-1", "log-2", ... for reproducible tests.
    static IdSource sequential_ids() {
        return [n = std::uint64_t{0}]() mutable { return "log-" + std::to_string(++n); };
    }

  private:
    static IdSource random_tokens() {
        return [rng = std::mt19937_64{std::random_device{}()}]() mutable {
            static constexpr char kHex[] = "0123456789abcdef";
            std::string token(12, '0');
            for (auto& c : token) c = kHex[rng() % 16];
            return token;
        };
    }

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const StoredLog>> logs_;
    IdSource next_id_;  // guarded by mutex_
};

struct ApiResponse {
    int status = 200;
    std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Request handlers, independent of the transport. mount() binds them to the
/// HTTP paths listed in docs/api.md.
class ApiService {
  public:
    static constexpr std::int64_t kDefaultWidth = 1024;
    static constexpr std::int64_t kDefaultHeight = 768;
    static constexpr std::size_t kDefaultTop = 10;

    explicit ApiService(LogStore& store) : store_(store) {}

    ApiResponse upload_log(std::string_view body, const QueryParams& params = {}) const {
        const auto name = param(params, "name").value_or("upload");
        EventLog log;
        try {
            log = parse_csv(body, name);
        } catch (const MalformedRow& e) {
            return {400, dump(Json{{"error", "malformed_row"}, {"line", e.line()}, {"reason", e.reason()}})};
        }
        const auto stored = store_.put(std::move(log));
        return {201, dump(handle_json(*stored))};
    }

    ApiResponse get_grid(const std::string& id, const QueryParams& params) const {
        const auto stored = store_.get(id);
        if (!stored) return unknown_log(id);
        auto key = SortKey::None;
        if (auto s = param(params, "sort"); s && !s->empty()) {
            auto parsed = parse_sort_key(*s);
            if (!parsed) return bad_request("invalid sort key '" + *s + "'");
            key = *parsed;
        }
        Viewport vp{kDefaultWidth, kDefaultHeight};
        for (auto [name, target] : {std::pair{"w", &vp.width}, std::pair{"h", &vp.height}}) {
            if (auto s = param(params, name)) {
                std::int64_t v = 0;
                if (!detail::parse_int(*s, v) || v < 1) {
                    return bad_request(std::string("parameter ") + name + " must be a positive integer");
                }
                *target = v;
            }
        }
        return {200, grid_json(stored->log, key, vp)};
    }

    ApiResponse get_object(const std::string& id, const std::string& object_id) const {
        const auto stored = store_.get(id);
        if (!stored) return unknown_log(id);
        auto detail = object_detail(stored->log, object_id);
        if (!detail) return {404, dump(Json{{"error", "unknown object id"}, {"object_id", object_id}})};
        return {200, dump(detail_json(*detail))};
    }

    ApiResponse get_stats(const std::string& id, const QueryParams& params) const {
        const auto stored = store_.get(id);
        if (!stored) return unknown_log(id);
        auto key = SortKey::Class;
        if (auto s = param(params, "by")) {
            auto parsed = parse_sort_key(*s);
            if (!parsed || *parsed == SortKey::None) return bad_request("invalid grouping key '" + *s + "'");
            key = *parsed;
        }
        std::size_t k = kDefaultTop;
        if (auto s = param(params, "k")) {
            if (!detail::parse_int(*s, k) || k < 1) return bad_request("parameter k must be a positive integer");
        }
        auto kind = EventKind::Created;
        if (auto s = param(params, "kind")) {
            if (*s == "created") {
                kind = EventKind::Created;
            } else if (*s == "destroyed") {
                kind = EventKind::Destroyed;
            } else {
                return bad_request("parameter kind must be 'created' or 'destroyed'");
            }
        }
        return {200, dump(ranked_json(key, kind, k, count_by(stored->log, key, kind)))};
    }

    ApiResponse get_threads(const std::string& id) const {
        const auto stored = store_.get(id);
        if (!stored) return unknown_log(id);
        return {200, dump(threads_json(thread_profile(stored->log)))};
    }

    void mount(httplib::Server& server) const {
        auto reply = [](httplib::Response& res, const ApiResponse& r) {
            res.status = r.status;
            res.set_content(r.body, "application/json");
        };
        server.Post("/logs", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, upload_log(req.body, req.params));
        });
        server.Get(R"(/logs/([^/]+)/grid)", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, get_grid(req.matches[1], req.params));
        });
        server.Get(R"(/logs/([^/]+)/objects/([^/]+))",
                   [this, reply](const httplib::Request& req, httplib::Response& res) {
                       reply(res, get_object(req.matches[1], req.matches[2]));
                   });
        server.Get(R"(/logs/([^/]+)/stats)", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, get_stats(req.matches[1], req.params));
        });
        server.Get(R"(/logs/([^/]+)/threads)", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, get_threads(req.matches[1]));
        });
    }

    static Json handle_json(const StoredLog& stored) {
        return Json{{"id", stored.id},
                    {"source_name", stored.log.source_name()},
                    {"event_count", stored.log.size()},
                    {"created_count", stored.created_count}};
    }

  private:
    static std::string dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

    static std::optional<std::string> param(const QueryParams& params, const std::string& name) {
        auto it = params.find(name);
        if (it == params.end()) return std::nullopt;
        return it->second;
    }

    static ApiResponse unknown_log(const std::string& id) {
        return {404, dump(Json{{"error", "unknown log id"}, {"id", id}})};
    }

    static ApiResponse bad_request(const std::string& message) { return {400, dump(Json{{"error", message}})}; }

    LogStore& store_;
};

}  // namespace objgrid
