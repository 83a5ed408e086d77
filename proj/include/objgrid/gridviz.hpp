/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "objgrid/analytics.hpp"
#include "objgrid/trace_model.hpp"

namespace objgrid {

struct Viewport {
    std::int64_t width = 1;
    std::int64_t height = 1;

    bool valid() const noexcept { return width >= 1 && height >= 1; }
};

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    bool operator==(const Point&) const = default;
};

struct GridLayout {
    Viewport viewport;
    std::int64_t cell_side = 0;
    std::int64_t columns = 0;
    std::int64_t rows = 0;
    std::size_t count = 0;
    std::vector<Point> positions;  // row-major, one per cell

    std::int64_t document_height() const noexcept { return rows * cell_side; }
};

inline Point cell_origin(std::size_t index, std::int64_t columns, std::int64_t cell_side) {
    const auto i = static_cast<std::int64_t>(index);
    return {(i % columns) * cell_side, (i / columns) * cell_side};
}

/// Number of cells of side `s` that fit the viewport without overflow.
inline std::int64_t capacity(const Viewport& vp, std::int64_t s) { return (vp.width / s) * (vp.height / s); }

/// Largest integer side s >= 1 with capacity(s) >= n. When even s = 1 does
/// not fit, the side clamps to 1 and rows run past the viewport height.
inline GridLayout compute_layout(std::size_t n, const Viewport& vp) {
    if (!vp.valid()) throw std::invalid_argument("viewport dimensions must be positive");
    GridLayout layout;
    layout.viewport = vp;
    layout.count = n;
    if (n == 0) return layout;

    const auto need = static_cast<std::int64_t>(n);
    // capacity() is nonincreasing in s, so the fitting sides form a prefix [1, best].
    std::int64_t lo = 1, hi = std::min(vp.width, vp.height);
    if (capacity(vp, 1) < need) {
        hi = 1;
    }
    while (lo < hi) {
        const auto mid = lo + (hi - lo + 1) / 2;
        if (capacity(vp, mid) >= need) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    layout.cell_side = lo;
    layout.columns = vp.width / lo;
    layout.rows = (need + layout.columns - 1) / layout.columns;
    layout.positions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) layout.positions.push_back(cell_origin(i, layout.columns, lo));
    return layout;
}

/// Indices (into the log) of created events, in display order. SortKey::None
/// keeps file order; otherwise groups run largest first, ties by value, and
/// each group keeps file order.
inline std::vector<std::size_t> sort_permutation(const EventLog& log, SortKey key) {
    std::vector<std::size_t> created;
    for (std::size_t i = 0; i < log.size(); ++i) {
        if (log[i].kind == EventKind::Created) created.push_back(i);
    }
    if (key == SortKey::None) return created;

    std::map<std::string, std::vector<std::size_t>> groups;
    for (auto i : created) groups[attribute_of(log[i], key)].push_back(i);

    std::vector<const std::vector<std::size_t>*> ordered;
    ordered.reserve(groups.size());
    for (const auto& [value, members] : groups) ordered.push_back(&members);
    // groups iterate in value order already; a stable sort on size keeps that as tie-break
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto* a, const auto* b) { return a->size() > b->size(); });

    std::vector<std::size_t> out;
    out.reserve(created.size());
    for (const auto* members : ordered) out.insert(out.end(), members->begin(), members->end());
    return out;
}

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;

    std::string hex() const {
        char buf[8];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return buf;
    }
};

inline constexpr std::uint32_t fnv1a32(std::string_view bytes) noexcept {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

struct Hsl {
    int hue = 0;         // degrees, [0, 360)
    int saturation = 0;  // percent
    int lightness = 0;   // percent
};

inline constexpr int kSaturations[] = {55, 65, 75, 85};
inline constexpr int kLightnesses[] = {40, 55, 70};

inline Hsl hsl_bucket(std::string_view value) noexcept {
    const std::uint32_t h = fnv1a32(value);
    return {static_cast<int>(h % 360), kSaturations[(h / 360) % 4], kLightnesses[(h / 1440) % 3]};
}

/// HSL to RGB in exact integer arithmetic over the common denominator
/// 1'200'000, rounding half up.
inline Rgb hsl_to_rgb(const Hsl& c) noexcept {
    constexpr std::int64_t kDen = 1'200'000;
    const std::int64_t s = c.saturation, l = c.lightness, h = c.hue;
    const std::int64_t chroma_num = (100 - std::abs(2 * l - 100)) * s;  // over 10'000
    const std::int64_t chroma = chroma_num * 120;
    const std::int64_t x = chroma_num * (60 - std::abs(h % 120 - 60)) * 2;
    const std::int64_t m = l * 12'000 - chroma_num * 60;

    std::int64_t r = 0, g = 0, b = 0;
    switch (h / 60) {
        case 0: r = chroma, g = x; break;
        case 1: r = x, g = chroma; break;
        case 2: g = chroma, b = x; break;
        case 3: g = x, b = chroma; break;
        case 4: r = x, b = chroma; break;
        default: r = chroma, b = x; break;
    }
    auto channel = [&](std::int64_t v) {
        return static_cast<std::uint8_t>(((v + m) * 255 * 2 + kDen) / (2 * kDen));
    };
    return {channel(r), channel(g), channel(b)};
}

inline Rgb color_of(std::string_view value) noexcept { return hsl_to_rgb(hsl_bucket(value)); }

struct CellView {
    std::size_t index = 0;
    Point position;
    Rgb color;
    std::string object_id;
    std::string group_value;
};

struct GridView {
    GridLayout layout;
    std::vector<CellView> cells;
};

/// Layout plus one cell per created event in sort order. Under SortKey::None
/// cells are grouped and colored by type name.
inline GridView build_cells(const EventLog& log, SortKey key, const Viewport& vp) {
    const auto order = sort_permutation(log, key);
    GridView view{compute_layout(order.size(), vp), {}};
    view.cells.reserve(order.size());
    const SortKey color_key = key == SortKey::None ? SortKey::Type : key;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& ev = log[order[i]];
        CellView cell;
        cell.index = i;
        cell.position = view.layout.positions[i];
        cell.group_value = attribute_of(ev, color_key);
        cell.color = color_of(cell.group_value);
        cell.object_id = ev.object_id;
        view.cells.push_back(std::move(cell));
    }
    return view;
}

struct LegendEntry {
    std::string value;
    Rgb color;
    std::uint64_t count = 0;
};

/// Distinct attribute values among created events, in group display order.
inline std::vector<LegendEntry> legend(const EventLog& log, SortKey key) {
    if (key == SortKey::None) throw KeyNone();
    const auto ranked = top_k(count_by(log, key, EventKind::Created), static_cast<std::size_t>(-1));
    std::vector<LegendEntry> out;
    out.reserve(ranked.size());
    for (const auto& [value, count] : ranked) out.push_back({value, color_of(value), count});
    return out;
}

namespace detail {

inline void append_xml_escaped(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

}  // namespace detail

/// SVG 1.1 document: one square per cell, `data-oid` / `data-group` carry the
/// object id and group value. Height is rows * cell_side, so it can exceed
/// the viewport when the grid overflows.
inline std::string render_svg(const GridLayout& layout, const std::vector<CellView>& cells) {
    std::string out;
    out.reserve(256 + cells.size() * 160);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%lld\" height=\"%lld\">\n",
                  static_cast<long long>(layout.viewport.width), static_cast<long long>(layout.document_height()));
    out += buf;
    for (const auto& cell : cells) {
        std::snprintf(buf, sizeof buf, "<rect x=\"%lld\" y=\"%lld\" width=\"%lld\" height=\"%lld\" fill=\"%s\"",
                      static_cast<long long>(cell.position.x), static_cast<long long>(cell.position.y),
                      static_cast<long long>(layout.cell_side), static_cast<long long>(layout.cell_side),
                      cell.color.hex().c_str());
        out += buf;
        out += " data-oid=\"";
        detail::append_xml_escaped(out, cell.object_id);
        out += "\" data-group=\"";
        detail::append_xml_escaped(out, cell.group_value);
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

inline std::string render_svg(const GridView& view) { return render_svg(view.layout, view.cells); }

}  // namespace objgrid
