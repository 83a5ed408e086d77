/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

namespace objgrid {

using EpochSeconds = std::int64_t;

enum class EventKind : std::uint8_t {
    Created = 1,
    MethodEntry = 2,
    Destroyed = 3,
};

inline constexpr int to_code(EventKind kind) { return static_cast<int>(kind); }

inline std::optional<EventKind> kind_from_code(long long code) {
    switch (code) {
        case 1: return EventKind::Created;
        case 2: return EventKind::MethodEntry;
        case 3: return EventKind::Destroyed;
        default: return std::nullopt;
    }
}

inline std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Created: return "created";
        case EventKind::MethodEntry: return "method_entry";
        case EventKind::Destroyed: return "destroyed";
    }
    return "unknown";
}

struct ObjectEvent {
    EventKind kind = EventKind::Created;
    std::string thread;
    EpochSeconds timestamp = 0;
    std::string object_id;
    std::string type_name;
    std::string site_class;
    std::string site_method;
    std::int64_t line = 0;

    bool operator==(const ObjectEvent&) const = default;
};

/// Immutable, file-ordered sequence of trace records. Every downstream view
/// is a list of indices into events().
class EventLog {
  public:
    EventLog() = default;
    explicit EventLog(std::vector<ObjectEvent> events, std::string source_name = "generated")
        : events_(std::move(events)), source_name_(std::move(source_name)) {}

    const std::vector<ObjectEvent>& events() const noexcept { return events_; }
    const ObjectEvent& operator[](std::size_t i) const { return events_[i]; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const std::string& source_name() const noexcept { return source_name_; }

    auto begin() const noexcept { return events_.begin(); }
    auto end() const noexcept { return events_.end(); }

    /// Field-for-field comparison of the records; the source name is metadata.
    bool same_events(const EventLog& other) const { return events_ == other.events_; }

  private:
    std::vector<ObjectEvent> events_;
    std::string source_name_ = "generated";
};

/// Parse failure pinned to a 1-based physical line of the input document.
class MalformedRow : public std::runtime_error {
  public:
    MalformedRow(std::size_t line, std::string reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason),
          line_(line),
          reason_(std::move(reason)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

  private:
    std::size_t line_;
    std::string reason_;
};

inline constexpr std::string_view kCsvHeader = "Status,thread,datetime,objectName,Type,Class,Method,linenum";
inline constexpr std::size_t kCsvColumns = 8;

namespace detail {

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// Unsigned decimal field of [min_len, max_len] digits.
inline bool parse_digits(std::string_view s, std::size_t min_len, std::size_t max_len, int& out) {
    if (s.size() < min_len || s.size() > max_len) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return parse_int(s, out);
}

inline std::optional<EpochSeconds> to_epoch(int y, int mo, int d, int h, int mi, int sec) {
    using namespace std::chrono;
    if (h > 23 || mi > 59 || sec > 59) return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
    return static_cast<EpochSeconds>(days_since_epoch) * 86400 + h * 3600 + mi * 60 + sec;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// "H:mm" or "H:mm:ss"
inline bool parse_clock(std::string_view s, int& h, int& mi, int& sec) {
    const auto parts = split(s, ':');
    if (parts.size() != 2 && parts.size() != 3) return false;
    sec = 0;
    return parse_digits(parts[0], 1, 2, h) && parse_digits(parts[1], 2, 2, mi) &&
           (parts.size() == 2 || parse_digits(parts[2], 2, 2, sec));
}

}  // namespace detail

/// Accepts the legacy trace form "M/D/YYYY H:mm" (month first) and ISO 8601
/// "YYYY-MM-DDTHH:MM[:SS][Z]". Both are read as UTC.
inline std::optional<EpochSeconds> try_parse_timestamp(std::string_view s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (s.find('/') != std::string_view::npos) {
        auto space = s.find(' ');
        if (space == std::string_view::npos) return std::nullopt;
        const auto date = detail::split(s.substr(0, space), '/');
        if (date.size() != 3 || !detail::parse_digits(date[0], 1, 2, mo) ||
            !detail::parse_digits(date[1], 1, 2, d) || !detail::parse_digits(date[2], 4, 4, y)) {
            return std::nullopt;
        }
        if (!detail::parse_clock(s.substr(space + 1), h, mi, sec)) return std::nullopt;
        return detail::to_epoch(y, mo, d, h, mi, sec);
    }
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    if (s.size() < 11 || (s[10] != 'T' && s[10] != ' ')) return std::nullopt;
    const auto date = detail::split(s.substr(0, 10), '-');
    if (date.size() != 3 || !detail::parse_digits(date[0], 4, 4, y) || !detail::parse_digits(date[1], 2, 2, mo) ||
        !detail::parse_digits(date[2], 2, 2, d)) {
        return std::nullopt;
    }
    const auto clock = s.substr(11);
    if (clock.size() < 5 || clock[0] == ':' || clock[2] != ':') return std::nullopt;
    if (!detail::parse_clock(clock, h, mi, sec)) return std::nullopt;
    return detail::to_epoch(y, mo, d, h, mi, sec);
}

/// Throws MalformedRow (line 0) when the text is not a recognised timestamp.
inline EpochSeconds parse_timestamp(std::string_view s) {
    if (auto t = try_parse_timestamp(s)) return *t;
    throw MalformedRow(0, "unparseable timestamp '" + std::string(s) + "'");
}

/// Canonical ISO 8601 form. Seconds are written only when non-zero so that
/// minute-precision traces keep their original width.
inline std::string format_timestamp(EpochSeconds t) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{t}};
    const auto day_point = floor<days>(tp);
    const year_month_day ymd{day_point};
    const hh_mm_ss<seconds> clock{tp - day_point};
    char buf[32];
    const int y = static_cast<int>(ymd.year());
    const auto mo = static_cast<unsigned>(ymd.month());
    const auto d = static_cast<unsigned>(ymd.day());
    const auto hh = static_cast<int>(clock.hours().count());
    const auto mm = static_cast<int>(clock.minutes().count());
    const auto ss = static_cast<int>(clock.seconds().count());
    if (ss == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", y, mo, d, hh, mm);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", y, mo, d, hh, mm, ss);
    }
    return buf;
}

/// Package of a fully-qualified name: everything before the last '.'.
inline std::string derive_package(std::string_view fq_name) {
    auto dot = fq_name.rfind('.');
    if (dot == std::string_view::npos) return {};
    return std::string(fq_name.substr(0, dot));
}

namespace detail {

inline ObjectEvent parse_row(std::string_view row, std::size_t line_no) {
    if (row.find('"') != std::string_view::npos) {
        throw MalformedRow(line_no, "quoted fields are not supported");
    }
    const auto fields = split(row, ',');
    if (fields.size() != kCsvColumns) {
        throw MalformedRow(line_no, "expected " + std::to_string(kCsvColumns) + " columns, found " +
                                        std::to_string(fields.size()));
    }
    ObjectEvent ev;
    long long status = 0;
    if (!parse_int(fields[0], status)) throw MalformedRow(line_no, "invalid status");
    auto kind = kind_from_code(status);
    if (!kind) throw MalformedRow(line_no, "unknown status");
    ev.kind = *kind;
    ev.thread = std::string(fields[1]);
    auto ts = try_parse_timestamp(fields[2]);
    if (!ts) throw MalformedRow(line_no, "unparseable timestamp");
    ev.timestamp = *ts;
    ev.object_id = std::string(fields[3]);
    ev.type_name = std::string(fields[4]);
    ev.site_class = std::string(fields[5]);
    ev.site_method = std::string(fields[6]);
    if (!parse_int(fields[7], ev.line)) throw MalformedRow(line_no, "invalid line number");
    if (ev.line < 0) throw MalformedRow(line_no, "negative line number");
    if (ev.kind != EventKind::MethodEntry && ev.object_id.empty()) {
        throw MalformedRow(line_no, "missing object id");
    }
    if (ev.kind == EventKind::Created && ev.type_name.empty()) {
        throw MalformedRow(line_no, "missing type");
    }
    return ev;
}

inline bool looks_like_header(std::string_view line) {
    auto first = line.substr(0, line.find(','));
    long long ignored = 0;
    return !parse_int(first, ignored);
}

}  // namespace detail

/// Parses a whole trace document. The first line is skipped when its first
/// field is not numeric; trailing blank lines are ignored; LF and CRLF are
/// both accepted.
inline EventLog parse_csv(std::string_view text, std::string source_name = "stdin") {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<std::string_view> lines = detail::split(text, '\n');
    for (auto& l : lines) {
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    std::vector<ObjectEvent> events;
    events.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i == 0 && detail::looks_like_header(lines[0])) continue;
        events.push_back(detail::parse_row(lines[i], i + 1));
    }
    return EventLog(std::move(events), std::move(source_name));
}

inline std::string emit_csv(const EventLog& log) {
    std::string out;
    out.reserve(64 + log.size() * 128);
    out.append(kCsvHeader).push_back('\n');
    for (const auto& ev : log) {
        out.append(std::to_string(to_code(ev.kind))).push_back(',');
        out.append(ev.thread).push_back(',');
        out.append(format_timestamp(ev.timestamp)).push_back(',');
        out.append(ev.object_id).push_back(',');
        out.append(ev.type_name).push_back(',');
        out.append(ev.site_class).push_back(',');
        out.append(ev.site_method).push_back(',');
        out.append(std::to_string(ev.line)).push_back('\n');
    }
    return out;
}

enum class Rule { DuplicateCreate, OrphanDestroy, DuplicateDestroy };

inline std::string_view rule_id(Rule r) {
    switch (r) {
        case Rule::DuplicateCreate: return "DUP_CREATE";
        case Rule::OrphanDestroy: return "ORPHAN_DESTROY";
        case Rule::DuplicateDestroy: return "DUP_DESTROY";
    }
    return "UNKNOWN";
}

struct Violation {
    std::size_t index;
    Rule rule;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Lifecycle checks per object id, in file order. A destroy that is both a
/// repeat and has no earlier create is reported under both rules.
inline ValidationReport validate(const EventLog& log) {
    struct Seen {
        bool created = false;
        bool destroyed = false;
    };
    std::unordered_map<std::string_view, Seen> seen;
    ValidationReport report;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& ev = log[i];
        if (ev.kind == EventKind::MethodEntry) continue;
        auto& s = seen[ev.object_id];
        if (ev.kind == EventKind::Created) {
            if (s.created) {
                report.violations.push_back({i, Rule::DuplicateCreate, "object " + ev.object_id + " created again"});
            }
            s.created = true;
        } else {
            if (!s.created) {
                report.violations.push_back(
                    {i, Rule::OrphanDestroy, "object " + ev.object_id + " destroyed before any create"});
            }
            if (s.destroyed) {
                report.violations.push_back(
                    {i, Rule::DuplicateDestroy, "object " + ev.object_id + " destroyed again"});
            }
            s.destroyed = true;
        }
    }
    return report;
}

}  // namespace objgrid
