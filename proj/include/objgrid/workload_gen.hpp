/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "objgrid/trace_model.hpp"

namespace objgrid {

/// xoshiro256** seeded by four SplitMix64 outputs. The recurrence is written
/// out in docs/generator.md; ports must match it bit for bit.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// next() mod n; n must be non-zero.
    std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
};

struct ThreadSpec {
    std::string name;
    double create_weight = 0;
    double destroy_weight = 0;
};

struct ClassSpec {
    std::string type_name;
    double weight = 1;
    std::string site_class;  // empty: same as type_name
    std::string site_method;
};

struct GenConfig {
    std::uint64_t seed = 0;
    std::vector<ThreadSpec> threads;
    std::vector<ClassSpec> classes;
    std::uint64_t event_count = 0;
    double destroy_fraction = 0;
    EpochSeconds start_time = 0;
    EpochSeconds time_step = 60;
};

class InvalidConfig : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void check_config(const GenConfig& c) {
    if (c.event_count == 0) throw InvalidConfig("event_count must be positive");
    if (!(c.destroy_fraction >= 0 && c.destroy_fraction <= 1)) {
        throw InvalidConfig("destroy_fraction must lie in [0, 1]");
    }
    if (c.time_step < 0) throw InvalidConfig("time_step must be non-negative");
    if (c.classes.empty()) throw InvalidConfig("at least one class is required");
    double create_total = 0, destroy_total = 0;
    for (const auto& t : c.threads) {
        if (t.name.empty()) throw InvalidConfig("thread name must not be empty");
        if (!(t.create_weight >= 0) || !(t.destroy_weight >= 0) || !std::isfinite(t.create_weight) ||
            !std::isfinite(t.destroy_weight)) {
            throw InvalidConfig("thread weights must be finite and non-negative: " + t.name);
        }
        create_total += t.create_weight;
        destroy_total += t.destroy_weight;
    }
    if (!(create_total > 0)) throw InvalidConfig("at least one thread needs a positive create weight");
    if (c.destroy_fraction > 0 && !(destroy_total > 0)) {
        throw InvalidConfig("destroy_fraction > 0 needs a thread with a positive destroy weight");
    }
    for (const auto& k : c.classes) {
        if (k.type_name.empty()) throw InvalidConfig("class name must not be empty");
        if (!(k.weight > 0) || !std::isfinite(k.weight)) {
            throw InvalidConfig("class weight must be positive: " + k.type_name);
        }
    }
    // The CSV format has no quoting, so names must not carry separators.
    auto csv_safe = [](std::string_view s) {
        return s.find_first_of(",\"\r\n") == std::string_view::npos;
    };
    for (const auto& t : c.threads) {
        if (!csv_safe(t.name)) throw InvalidConfig("thread name not representable in CSV: " + t.name);
    }
    for (const auto& k : c.classes) {
        if (!csv_safe(k.type_name) || !csv_safe(k.site_class) || !csv_safe(k.site_method)) {
            throw InvalidConfig("class entry not representable in CSV: " + k.type_name);
        }
    }
}

namespace detail {

template <typename Weights>
std::size_t pick_weighted(Xoshiro256& rng, const Weights& weights) {
    double total = 0;
    for (double w : weights) total += w;
    const double r = rng.unit() * total;
    double cumulative = 0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) continue;
        cumulative += weights[i];
        last_positive = i;
        if (r < cumulative) return i;
    }
    return last_positive;
}

inline std::string uuid_text(std::uint64_t hi, std::uint64_t lo) {
    char hex[33];
    std::snprintf(hex, sizeof hex, "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    std::string out;
    out.reserve(36);
    out.append(hex, 8).push_back('-');
    out.append(hex + 8, 4).push_back('-');
    out.append(hex + 12, 4).push_back('-');
    out.append(hex + 16, 4).push_back('-');
    out.append(hex + 20, 12);
    return out;
}

}  // namespace detail

/// Per event i, in order:
///   u = unit(); destroy if u < destroy_fraction, the destroy budget
///   floor(destroy_fraction * event_count) is not spent and some object is live.
///   destroy: thread by destroy weight, victim = live[below(|live|)] (swap-remove),
///            site fields copied from the victim's creation record.
///   create:  thread by create weight, class by weight, id from two next() draws
///            (redrawn on collision), line = 1 + below(4096).
inline EventLog generate(const GenConfig& config) {
    check_config(config);

    Xoshiro256 rng(config.seed);
    std::vector<double> create_w, destroy_w, class_w;
    for (const auto& t : config.threads) {
        create_w.push_back(t.create_weight);
        destroy_w.push_back(t.destroy_weight);
    }
    for (const auto& k : config.classes) class_w.push_back(k.weight);

    const auto destroy_budget =
        static_cast<std::uint64_t>(std::floor(config.destroy_fraction * static_cast<double>(config.event_count)));

    std::vector<ObjectEvent> events;
    events.reserve(config.event_count);
    std::vector<std::size_t> live;  // indices of creation events
    std::unordered_set<std::string> ids;
    std::uint64_t destroyed = 0;

    for (std::uint64_t i = 0; i < config.event_count; ++i) {
        const EpochSeconds ts = config.start_time + static_cast<EpochSeconds>(i) * config.time_step;
        const double u = rng.unit();
        if (u < config.destroy_fraction && destroyed < destroy_budget && !live.empty()) {
            const auto thread = detail::pick_weighted(rng, destroy_w);
            const auto slot = static_cast<std::size_t>(rng.below(live.size()));
            const std::size_t victim = live[slot];
            live[slot] = live.back();
            live.pop_back();
            ObjectEvent ev = events[victim];
            ev.kind = EventKind::Destroyed;
            ev.thread = config.threads[thread].name;
            ev.timestamp = ts;
            events.push_back(std::move(ev));
            ++destroyed;
            continue;
        }

        const auto thread = detail::pick_weighted(rng, create_w);
        const auto& cls = config.classes[detail::pick_weighted(rng, class_w)];
        std::string id;
        do {
            const auto hi = rng.next();
            const auto lo = rng.next();
            id = detail::uuid_text(hi, lo);
        } while (!ids.insert(id).second);

        ObjectEvent ev;
        ev.kind = EventKind::Created;
        ev.thread = config.threads[thread].name;
        ev.timestamp = ts;
        ev.object_id = std::move(id);
        ev.type_name = cls.type_name;
        ev.site_class = cls.site_class.empty() ? cls.type_name : cls.site_class;
        ev.site_method = cls.site_method;
        ev.line = 1 + static_cast<std::int64_t>(rng.below(4096));
        live.push_back(events.size());
        events.push_back(std::move(ev));
    }
    return EventLog(std::move(events), "generated");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(std::move(w));
    return out;
}

inline double parse_real(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) throw InvalidConfig("line " + std::to_string(line) + ": not a number: " + s);
    return v;
}

template <typename Int>
Int parse_count(const std::string& s, std::size_t line) {
    Int v{};
    if (!parse_int(s, v)) throw InvalidConfig("line " + std::to_string(line) + ": not an integer: " + s);
    return v;
}

}  // namespace detail

/// Reads the flat `key = value` config format (see docs/generator.md).
/// `thread` and `class` may repeat; `#` starts a comment.
inline GenConfig parse_config(std::string_view text) {
    GenConfig c;
    bool have_count = false;
    const auto lines = detail::split(text, '\n');
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::size_t line_no = n + 1;
        auto line = lines[n];
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidConfig("line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        const auto parts = detail::words(value);
        auto expect_one = [&] {
            if (parts.size() != 1) {
                throw InvalidConfig("line " + std::to_string(line_no) + ": " + std::string(key) +
                                    " takes one value");
            }
            return parts[0];
        };
        if (key == "seed") {
            c.seed = detail::parse_count<std::uint64_t>(expect_one(), line_no);
        } else if (key == "event_count") {
            c.event_count = detail::parse_count<std::uint64_t>(expect_one(), line_no);
            have_count = true;
        } else if (key == "destroy_fraction") {
            c.destroy_fraction = detail::parse_real(expect_one(), line_no);
        } else if (key == "start_time") {
            std::int64_t epoch = 0;
            if (detail::parse_int(value, epoch)) {
                c.start_time = epoch;
            } else if (auto t = try_parse_timestamp(value)) {
                c.start_time = *t;
            } else {
                throw InvalidConfig("line " + std::to_string(line_no) + ": bad start_time");
            }
        } else if (key == "time_step") {
            c.time_step = detail::parse_count<EpochSeconds>(expect_one(), line_no);
        } else if (key == "thread") {
            if (parts.size() != 3) {
                throw InvalidConfig("line " + std::to_string(line_no) +
                                    ": thread = <name> <create weight> <destroy weight>");
            }
            c.threads.push_back({parts[0], detail::parse_real(parts[1], line_no),
                                 detail::parse_real(parts[2], line_no)});
        } else if (key == "class") {
            if (parts.size() < 2 || parts.size() > 4) {
                throw InvalidConfig("line " + std::to_string(line_no) +
                                    ": class = <type> <weight> [site class] [site method]");
            }
            ClassSpec k;
            k.type_name = parts[0];
            k.weight = detail::parse_real(parts[1], line_no);
            if (parts.size() > 2) k.site_class = parts[2];
            if (parts.size() > 3) k.site_method = parts[3];
            c.classes.push_back(std::move(k));
        } else {
            throw InvalidConfig("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_count) throw InvalidConfig("event_count is required");
    check_config(c);
    return c;
}

inline std::string format_config(const GenConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "seed = " << c.seed << '\n'
        << "event_count = " << c.event_count << '\n'
        << "destroy_fraction = " << c.destroy_fraction << '\n'
        << "start_time = " << c.start_time << '\n'
        << "time_step = " << c.time_step << '\n';
    for (const auto& t : c.threads) {
        out << "thread = " << t.name << ' ' << t.create_weight << ' ' << t.destroy_weight << '\n';
    }
    for (const auto& k : c.classes) {
        out << "class = " << k.type_name << ' ' << k.weight;
        if (!k.site_class.empty() || !k.site_method.empty()) {
            out << ' ' << (k.site_class.empty() ? k.type_name : k.site_class);
        }
        if (!k.site_method.empty()) out << ' ' << k.site_method;
        out << '\n';
    }
    return out.str();
}

}  // namespace objgrid
