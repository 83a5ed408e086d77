/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "objgrid/analytics.hpp"
#include "objgrid/gridviz.hpp"
#include "objgrid/trace_model.hpp"

// JSON shapes shared by the HTTP service and the CLI. Field names are listed
// in docs/api.md.
namespace objgrid {

using Json = nlohmann::json;

inline Json event_json(const ObjectEvent& ev, std::size_t index) {
    return Json{{"index", index},
                {"status", to_code(ev.kind)},
                {"kind", to_string(ev.kind)},
                {"thread", ev.thread},
                {"datetime", format_timestamp(ev.timestamp)},
                {"epoch", ev.timestamp},
                {"object_id", ev.object_id},
                {"type", ev.type_name},
                {"class", ev.site_class},
                {"method", ev.site_method},
                {"line", ev.line}};
}

inline Json detail_json(const ObjectDetail& d) {
    Json events = Json::array();
    for (std::size_t i = 0; i < d.events.size(); ++i) events.push_back(event_json(d.events[i], d.event_indices[i]));
    Json out{{"object_id", d.object_id},
             {"type", d.type_name},
             {"package", d.package},
             {"creating_thread", nullptr},
             {"created_at", nullptr},
             {"created_epoch", nullptr},
             {"destroyed", d.destroyed},
             {"events", std::move(events)}};
    if (d.creating_thread) out["creating_thread"] = *d.creating_thread;
    if (d.created_at) {
        out["created_at"] = format_timestamp(*d.created_at);
        out["created_epoch"] = *d.created_at;
    }
    return out;
}

inline Json ranked_json(SortKey key, EventKind kind, std::size_t k, const CountTable& table) {
    Json rows = Json::array();
    for (const auto& [value, count] : top_k(table, k)) rows.push_back({{"value", value}, {"count", count}});
    return Json{{"by", to_string(key)},
                {"kind", to_string(kind)},
                {"k", k},
                {"distinct", table.entries.size()},
                {"total", table.total()},
                {"rows", std::move(rows)}};
}

inline Json threads_json(const ThreadProfile& profile) {
    Json rows = Json::array();
    for (const auto& r : profile.rows) {
        rows.push_back({{"thread", r.thread}, {"created", r.created}, {"destroyed", r.destroyed}});
    }
    return Json{{"rows", std::move(rows)}};
}

inline Json layout_json(const GridLayout& layout) {
    return Json{{"width", layout.viewport.width},   {"height", layout.viewport.height},
                {"cell_side", layout.cell_side},    {"columns", layout.columns},
                {"rows", layout.rows},              {"count", layout.count},
                {"document_height", layout.document_height()}};
}

inline Json legend_json(const std::vector<LegendEntry>& entries) {
    Json out = Json::array();
    for (const auto& e : entries) out.push_back({{"value", e.value}, {"color", e.color.hex()}, {"count", e.count}});
    return out;
}

namespace detail {

inline void append_json_string(std::string& out, std::string_view s) {
    out += Json(s).dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace detail

/// Serialized grid response. Cells are written directly to text because a
/// full DOM for ~10^6 cells costs far more memory than the output itself.
inline std::string grid_json(const EventLog& log, SortKey key, const Viewport& vp) {
    const auto view = build_cells(log, key, vp);
    const auto entries = legend(log, key == SortKey::None ? SortKey::Type : key);

    std::string out;
    out.reserve(256 + view.cells.size() * 120);
    out += "{\"sort\":";
    detail::append_json_string(out, to_string(key));
    out += ",\"layout\":";
    out += layout_json(view.layout).dump();
    out += ",\"cells\":[";
    for (std::size_t i = 0; i < view.cells.size(); ++i) {
        const auto& c = view.cells[i];
        if (i) out += ',';
        out += "{\"index\":";
        out += std::to_string(c.index);
        out += ",\"x\":";
        out += std::to_string(c.position.x);
        out += ",\"y\":";
        out += std::to_string(c.position.y);
        out += ",\"color\":\"";
        out += c.color.hex();
        out += "\",\"object_id\":";
        detail::append_json_string(out, c.object_id);
        out += ",\"group_value\":";
        detail::append_json_string(out, c.group_value);
        out += '}';
    }
    out += "],\"legend\":";
    out += legend_json(entries).dump(-1, ' ', false, Json::error_handler_t::replace);
    out += '}';
    return out;
}

}  // namespace objgrid
