/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "objgrid/trace_model.hpp"

namespace objgrid {

enum class SortKey { None, Package, Class, Type, Thread, Method };

inline constexpr std::array<SortKey, 6> kAllSortKeys = {SortKey::None,  SortKey::Package, SortKey::Class,
                                                        SortKey::Type,  SortKey::Thread,  SortKey::Method};

inline std::string_view to_string(SortKey key) {
    switch (key) {
        case SortKey::None: return "none";
        case SortKey::Package: return "package";
        case SortKey::Class: return "class";
        case SortKey::Type: return "type";
        case SortKey::Thread: return "thread";
        case SortKey::Method: return "method";
    }
    return "none";
}

inline std::optional<SortKey> parse_sort_key(std::string_view s) {
    for (auto key : kAllSortKeys) {
        if (to_string(key) == s) return key;
    }
    return std::nullopt;
}

class KeyNone : public std::invalid_argument {
  public:
    KeyNone() : std::invalid_argument("sort key 'none' has no grouping attribute") {}
};

/// Grouping attribute of an event. SortKey::None throws KeyNone.
inline std::string attribute_of(const ObjectEvent& ev, SortKey key) {
    switch (key) {
        case SortKey::Package: return derive_package(ev.type_name);
        case SortKey::Class: return ev.site_class;
        case SortKey::Type: return ev.type_name;
        case SortKey::Thread: return ev.thread;
        case SortKey::Method: return ev.site_method;
        case SortKey::None: break;
    }
    throw KeyNone();
}

struct CountTable {
    SortKey key = SortKey::Type;
    std::map<std::string, std::uint64_t> entries;

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [value, count] : entries) sum += count;
        return sum;
    }
};

inline CountTable count_by(const EventLog& log, SortKey key, EventKind kind) {
    if (key == SortKey::None) throw KeyNone();
    CountTable table;
    table.key = key;
    for (const auto& ev : log) {
        if (ev.kind == kind) ++table.entries[attribute_of(ev, key)];
    }
    return table;
}

/// Raw per-kind totals; the only tally that includes method entries.
inline std::map<EventKind, std::uint64_t> kind_totals(const EventLog& log) {
    std::map<EventKind, std::uint64_t> totals{
        {EventKind::Created, 0}, {EventKind::MethodEntry, 0}, {EventKind::Destroyed, 0}};
    for (const auto& ev : log) ++totals[ev.kind];
    return totals;
}

using RankedEntry = std::pair<std::string, std::uint64_t>;

/// Count descending, value ascending; at most k entries.
inline std::vector<RankedEntry> top_k(const CountTable& table, std::size_t k) {
    std::vector<RankedEntry> ranked(table.entries.begin(), table.entries.end());
    auto by_count = [](const RankedEntry& a, const RankedEntry& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    };
    if (k < ranked.size()) {
        std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end(), by_count);
        ranked.resize(k);
    } else {
        std::sort(ranked.begin(), ranked.end(), by_count);
    }
    return ranked;
}

struct LiveObjects {
    std::map<std::string, std::int64_t> per_type;
    std::int64_t total = 0;
    std::uint64_t orphan_destroys = 0;
};

/// A destroy is matched when its id has an earlier create that no earlier
/// destroy has consumed; it then counts against the type of the oldest such
/// create. Unmatched destroys are tallied as orphans.
inline LiveObjects live_objects(const EventLog& log) {
    std::unordered_map<std::string_view, std::deque<const ObjectEvent*>> unconsumed;
    LiveObjects result;
    for (const auto& ev : log) {
        if (ev.kind == EventKind::Created) {
            unconsumed[ev.object_id].push_back(&ev);
            ++result.per_type[ev.type_name];
            ++result.total;
        } else if (ev.kind == EventKind::Destroyed) {
            auto it = unconsumed.find(ev.object_id);
            if (it == unconsumed.end() || it->second.empty()) {
                ++result.orphan_destroys;
                continue;
            }
            --result.per_type[it->second.front()->type_name];
            --result.total;
            it->second.pop_front();
        }
    }
    return result;
}

struct ThreadRow {
    std::string thread;
    std::uint64_t created = 0;
    std::uint64_t destroyed = 0;

    bool operator==(const ThreadRow&) const = default;
};

struct ThreadProfile {
    std::vector<ThreadRow> rows;
};

/// Rows ordered by created descending, then name ascending. Threads that only
/// carry method entries do not appear.
inline ThreadProfile thread_profile(const EventLog& log) {
    std::map<std::string, ThreadRow> by_name;
    for (const auto& ev : log) {
        if (ev.kind == EventKind::MethodEntry) continue;
        auto& row = by_name[ev.thread];
        row.thread = ev.thread;
        if (ev.kind == EventKind::Created) {
            ++row.created;
        } else {
            ++row.destroyed;
        }
    }
    ThreadProfile profile;
    for (auto& [name, row] : by_name) profile.rows.push_back(std::move(row));
    std::stable_sort(profile.rows.begin(), profile.rows.end(),
                     [](const ThreadRow& a, const ThreadRow& b) { return a.created > b.created; });
    return profile;
}

struct ObjectDetail {
    std::string object_id;
    std::vector<std::size_t> event_indices;  // file order
    std::vector<ObjectEvent> events;
    std::string type_name;
    std::string package;
    std::optional<std::string> creating_thread;
    std::optional<EpochSeconds> created_at;
    bool destroyed = false;
};

/// Every event carrying `object_id`, plus fields derived from its first create.
/// std::nullopt when the id never appears.
inline std::optional<ObjectDetail> object_detail(const EventLog& log, std::string_view object_id) {
    if (object_id.empty()) return std::nullopt;
    ObjectDetail detail;
    detail.object_id = std::string(object_id);
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& ev = log[i];
        if (ev.object_id != object_id) continue;
        detail.event_indices.push_back(i);
        detail.events.push_back(ev);
        if (ev.kind == EventKind::Created && !detail.creating_thread) {
            detail.creating_thread = ev.thread;
            detail.created_at = ev.timestamp;
            detail.type_name = ev.type_name;
        } else if (ev.kind == EventKind::Destroyed) {
            detail.destroyed = true;
        }
    }
    if (detail.events.empty()) return std::nullopt;
    if (!detail.creating_thread) detail.type_name = detail.events.front().type_name;
    detail.package = derive_package(detail.type_name);
    return detail;
}

}  // namespace objgrid
