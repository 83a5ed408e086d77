/*
 * Copyright The objgrid authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "objgrid/api_service.hpp"
#include "objgrid/objgrid.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 2;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path == "-") {
        std::cout.write(data.data(), static_cast<std::streamsize>(data.size()));
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw UsageError("write failed: " + path);
}

objgrid::EventLog load_log(const std::string& path) {
    return objgrid::parse_csv(read_input(path), path == "-" ? "stdin" : path);
}

objgrid::SortKey sort_key_arg(const std::string& text, bool allow_none) {
    auto key = objgrid::parse_sort_key(text);
    if (!key || (!allow_none && *key == objgrid::SortKey::None)) {
        throw UsageError("invalid sort key '" + text + "'");
    }
    return *key;
}

std::string display(const std::string& value) { return value.empty() ? "(empty)" : value; }

// Left-aligned first column, right-aligned numeric columns.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto pad = std::string(width[c] - cells[c].size(), ' ');
            if (c == 0) {
                s += cells[c] + pad;
            } else {
                s += "  " + pad + cells[c];
            }
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out << s << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

httplib::Server* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"objgrid: object lifecycle trace analytics and grid rendering"};
    app.require_subcommand(1);

    std::string gen_config, gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic trace from a config file");
    gen->add_option("config", gen_config, "Generator config (key = value)")->required();
    gen->add_option("out", gen_out, "Output CSV path, '-' for stdout")->required();

    std::string render_log, render_out, render_sort = "none";
    std::int64_t width = objgrid::ApiService::kDefaultWidth;
    std::int64_t height = objgrid::ApiService::kDefaultHeight;
    auto* render = app.add_subcommand("render", "Render the object grid of a trace as SVG");
    render->add_option("log", render_log, "Trace CSV, '-' for stdin")->required();
    render->add_option("out", render_out, "Output SVG path, '-' for stdout")->required();
    render->add_option("--sort", render_sort, "none|package|class|type|thread|method")->capture_default_str();
    render->add_option("--width", width, "Viewport width in pixels")->capture_default_str();
    render->add_option("--height", height, "Viewport height in pixels")->capture_default_str();

    std::string stats_log, stats_by = "class";
    std::size_t top = objgrid::ApiService::kDefaultTop;
    bool threads = false;
    auto* stats = app.add_subcommand("stats", "Print creation counts or the per-thread profile");
    stats->add_option("log", stats_log, "Trace CSV, '-' for stdin")->required();
    stats->add_option("--by", stats_by, "package|class|type|thread|method")->capture_default_str();
    stats->add_option("--top", top, "Number of rows")->capture_default_str();
    stats->add_flag("--threads", threads, "Print created/destroyed counts per thread");

    int port = 7070;
    std::string host = "127.0.0.1";
    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--port", port, "Listen port")->capture_default_str();
    serve->add_option("--host", host, "Listen address")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*gen) {
            const auto config = objgrid::parse_config(read_input(gen_config));
            write_output(gen_out, objgrid::emit_csv(objgrid::generate(config)));
        } else if (*render) {
            const auto key = sort_key_arg(render_sort, true);
            if (width < 1 || height < 1) throw UsageError("--width and --height must be positive");
            const auto log = load_log(render_log);
            write_output(render_out, objgrid::render_svg(objgrid::build_cells(log, key, {width, height})));
        } else if (*stats) {
            const auto log = load_log(stats_log);
            if (threads) {
                std::vector<std::vector<std::string>> rows;
                for (const auto& r : objgrid::thread_profile(log).rows) {
                    rows.push_back({display(r.thread), std::to_string(r.created), std::to_string(r.destroyed)});
                }
                print_table(std::cout, {"thread", "created", "destroyed"}, rows);
            } else {
                const auto key = sort_key_arg(stats_by, false);
                if (top < 1) throw UsageError("--top must be at least 1");
                std::vector<std::vector<std::string>> rows;
                for (const auto& [value, count] :
                     objgrid::top_k(objgrid::count_by(log, key, objgrid::EventKind::Created), top)) {
                    rows.push_back({display(value), std::to_string(count)});
                }
                print_table(std::cout, {std::string(objgrid::to_string(key)), "created"}, rows);
            }
        } else if (*serve) {
            objgrid::LogStore store;
            objgrid::ApiService api(store);
            httplib::Server server;
            api.mount(server);
            g_server = &server;
            std::signal(SIGINT, [](int) { g_server->stop(); });
            std::signal(SIGTERM, [](int) { g_server->stop(); });
            std::cerr << "listening on " << host << ':' << port << '\n';
            if (!server.listen(host, port)) {
                std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
                return kExitError;
            }
        }
    } catch (const objgrid::MalformedRow& e) {
        std::cerr << "error: malformed row at line " << e.line() << ": " << e.reason() << '\n';
        return kExitError;
    } catch (const objgrid::InvalidConfig& e) {
        std::cerr << "error: invalid config: " << e.what() << '\n';
        return kExitError;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}
