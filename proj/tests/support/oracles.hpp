/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

// Test-only reference implementations. Each one takes the slow, obvious
// route so it stays independent of the library code it checks.

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "objgrid/objgrid.hpp"

namespace objgrid::oracle {

inline std::string fixture_path(const std::string& name) { return std::string(OBJGRID_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }

/// Linear scan from the largest conceivable side down to 1.
inline std::int64_t brute_force_cell_side(std::int64_t n, std::int64_t w, std::int64_t h) {
    for (std::int64_t s = std::min(w, h); s >= 1; --s) {
        if ((w / s) * (h / s) >= n) return s;
    }
    return 1;
}

/// Live set replay: insert on create, erase on destroy when present.
struct ReplayResult {
    std::int64_t live = 0;
    std::uint64_t orphans = 0;
};

inline ReplayResult replay_live(const EventLog& log) {
    std::multiset<std::string> live;
    ReplayResult r;
    for (const auto& ev : log) {
        if (ev.kind == EventKind::Created) {
            live.insert(ev.object_id);
        } else if (ev.kind == EventKind::Destroyed) {
            auto it = live.find(ev.object_id);
            if (it == live.end()) {
                ++r.orphans;
            } else {
                live.erase(it);
            }
        }
    }
    r.live = static_cast<std::int64_t>(live.size());
    return r;
}

inline std::string attribute(const ObjectEvent& ev, SortKey key) {
    switch (key) {
        case SortKey::Class: return ev.site_class;
        case SortKey::Type:
        case SortKey::None: return ev.type_name;
        case SortKey::Thread: return ev.thread;
        case SortKey::Method: return ev.site_method;
        case SortKey::Package: {
            const auto& t = ev.type_name;
            auto dot = t.find_last_of('.');
            return dot == std::string::npos ? std::string() : t.substr(0, dot);
        }
    }
    return {};
}

/// Stable group sort by repeated selection: pick the largest remaining group
/// (smallest value on ties), emit its members in file order.
inline std::vector<std::size_t> brute_force_order(const EventLog& log, SortKey key) {
    std::vector<std::size_t> created;
    for (std::size_t i = 0; i < log.size(); ++i) {
        if (log[i].kind == EventKind::Created) created.push_back(i);
    }
    if (key == SortKey::None) return created;
    std::vector<std::size_t> out;
    std::set<std::string> done;
    while (out.size() < created.size()) {
        std::string best;
        std::size_t best_count = 0;
        bool have = false;
        for (auto i : created) {
            const auto v = attribute(log[i], key);
            if (done.count(v)) continue;
            std::size_t c = 0;
            for (auto j : created) c += attribute(log[j], key) == v;
            if (!have || c > best_count || (c == best_count && v < best)) {
                best = v;
                best_count = c;
                have = true;
            }
        }
        done.insert(best);
        for (auto i : created) {
            if (attribute(log[i], key) == best) out.push_back(i);
        }
    }
    return out;
}

/// Random log over small alphabets so that groups collide often. Ids may
/// repeat and destroys may be orphaned unless `sound` is set.
inline EventLog random_log(std::mt19937_64& rng, std::size_t max_events, bool sound = true) {
    static const std::vector<std::string> kTypes = {"java.util.Vector", "java.util.LinkedList", "Vector",
                                                    "org.gjt.sp.jedit.Buffer", "a.B", ""};
    static const std::vector<std::string> kThreads = {"main", "Thread-0", "AWT-EventQueue-0", "t"};
    static const std::vector<std::string> kSites = {"org.gjt.sp.jedit.GUIUtilities", "org.gjt.sp.jedit.jEdit",
                                                    "X"};
    static const std::vector<std::string> kMethods = {"", "<clinit>", "run", "paint"};
    auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };

    const std::size_t n = rng() % (max_events + 1);
    std::vector<ObjectEvent> events;
    std::vector<std::string> live;
    std::size_t next_id = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ObjectEvent ev;
        ev.thread = pick(kThreads);
        ev.timestamp = 1315936080 + static_cast<EpochSeconds>(i) * 60;
        ev.site_class = pick(kSites);
        ev.site_method = pick(kMethods);
        ev.line = static_cast<std::int64_t>(rng() % 5000);
        const auto roll = rng() % 10;
        if (roll < 2 && (!live.empty() || !sound)) {
            ev.kind = EventKind::Destroyed;
            if (sound || rng() % 2) {
                if (live.empty()) {
                    ev.object_id = "ghost-" + std::to_string(i);
                } else {
                    const auto slot = rng() % live.size();
                    ev.object_id = live[slot];
                    live.erase(live.begin() + static_cast<std::ptrdiff_t>(slot));
                }
            } else {
                ev.object_id = "obj-" + std::to_string(rng() % (next_id + 1));
            }
            ev.type_name = pick(kTypes);
        } else if (roll == 2) {
            ev.kind = EventKind::MethodEntry;
        } else {
            ev.kind = EventKind::Created;
            ev.type_name = pick(kTypes);
            if (ev.type_name.empty()) ev.type_name = "Object";
            ev.object_id = sound || rng() % 4 ? "obj-" + std::to_string(next_id++)
                                              : "obj-" + std::to_string(rng() % (next_id + 1));
            live.push_back(ev.object_id);
        }
        events.push_back(std::move(ev));
    }
    return EventLog(std::move(events));
}

/// Random valid generator config.
inline GenConfig random_config(std::mt19937_64& rng, std::uint64_t max_events) {
    GenConfig c;
    c.seed = rng();
    const auto threads = 1 + rng() % 4;
    for (std::uint64_t t = 0; t < threads; ++t) {
        c.threads.push_back({"T" + std::to_string(t), static_cast<double>(rng() % 5),
                             static_cast<double>(1 + rng() % 5)});
    }
    c.threads[rng() % threads].create_weight = 1 + static_cast<double>(rng() % 5);
    const auto classes = 1 + rng() % 6;
    for (std::uint64_t k = 0; k < classes; ++k) {
        c.classes.push_back({"pkg" + std::to_string(k % 2) + ".Type" + std::to_string(k),
                             0.5 + static_cast<double>(rng() % 10), "", ""});
    }
    c.event_count = 1 + rng() % max_events;
    c.destroy_fraction = static_cast<double>(rng() % 101) / 100.0;
    c.start_time = 1315936080 + static_cast<EpochSeconds>(rng() % 100000);
    c.time_step = static_cast<EpochSeconds>(rng() % 120);
    return c;
}

struct ColorFixtureRow {
    std::string value;
    std::uint32_t fnv = 0;
    int hue = 0, saturation = 0, lightness = 0;
    std::string hex;
};

inline std::string unescape_tsv(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            ++i;
            out += s[i] == 't' ? '\t' : s[i];
        } else {
            out += s[i];
        }
    }
    return out;
}

/// Rows of tests/fixtures/colors.tsv, produced by tests/oracles/color_fixture.py.
inline std::vector<ColorFixtureRow> load_color_fixture() {
    std::istringstream in(read_fixture("colors.tsv"));
    std::vector<ColorFixtureRow> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (auto pos = line.find('\t'); pos != std::string::npos; pos = line.find('\t', start)) {
            f.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        f.push_back(line.substr(start));
        if (f.size() != 6) throw std::runtime_error("bad colors.tsv row: " + line);
        rows.push_back({unescape_tsv(f[0]), static_cast<std::uint32_t>(std::stoul(f[1])), std::stoi(f[2]),
                        std::stoi(f[3]), std::stoi(f[4]), f[5]});
    }
    return rows;
}

/// Counts `<rect` elements and pulls out their x/y/width attributes.
struct SvgRect {
    std::int64_t x = 0, y = 0, width = 0, height = 0;
    std::string fill, oid, group;
};

inline std::string attr(const std::string& tag, const std::string& name) {
    const auto key = " " + name + "=\"";
    const auto pos = tag.find(key);
    if (pos == std::string::npos) return {};
    const auto start = pos + key.size();
    return tag.substr(start, tag.find('"', start) - start);
}

inline std::vector<SvgRect> parse_svg_rects(const std::string& svg) {
    std::vector<SvgRect> rects;
    for (auto pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) {
        const auto tag = svg.substr(pos, svg.find("/>", pos) - pos);
        rects.push_back({std::stoll(attr(tag, "x")), std::stoll(attr(tag, "y")), std::stoll(attr(tag, "width")),
                         std::stoll(attr(tag, "height")), attr(tag, "fill"), attr(tag, "data-oid"),
                         attr(tag, "data-group")});
    }
    return rects;
}

}  // namespace objgrid::oracle
