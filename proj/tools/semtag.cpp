// semtag command-line entry point: service, ingestion, export and statistics.

#include "semtag/api.hpp"
#include "semtag/config.hpp"
#include "semtag/error.hpp"
#include "semtag/geo.hpp"
#include "semtag/http_server.hpp"
#include "semtag/util.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

using namespace semtag;

namespace {

struct Common {
    std::string config_path;
    std::string data_dir;
};

ServiceConfig resolve_config(const Common& c) {
    ServiceConfig cfg = c.config_path.empty() ? ServiceConfig{} : load_config(c.config_path);
    apply_env_overrides(cfg, process_env());
    if (!c.data_dir.empty()) cfg.data_dir = c.data_dir;
    return cfg;
}

AnnotationStore open_store_for(const ServiceConfig& cfg) {
    validate_config(cfg);
    return AnnotationStore(StoreOptions{cfg.data_dir, cfg.effective_base_uri(), cfg.suggestion_cap, {}});
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return in;
}

int run_serve(const Common& c) {
    const auto cfg = resolve_config(c);
    validate_config(cfg);
    AnnotationStore store(StoreOptions{cfg.data_dir, cfg.effective_base_uri(), cfg.suggestion_cap, {}});
    Api api(store, make_providers(cfg), cfg.suggestion_cap);
    HttpServer server(api);

    // Route SIGINT/SIGTERM to a waiter thread so shutdown runs outside a signal handler.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    const int port = server.bind(cfg.listen_address, cfg.port);
    std::cout << "listening on http://" << cfg.listen_address << ':' << port << " (data "
              << cfg.data_dir.string() << ", base " << cfg.effective_base_uri() << ")" << std::endl;
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        server.stop();
    });
    server.serve();
    // serve() may also return on its own; wake the waiter in that case.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return 0;
}

int run_ingest_maps(const Common& c, const std::string& file) {
    auto store = open_store_for(resolve_config(c));
    auto in = open_input(file);
    std::size_t n = 0;
    for (auto& m : read_map_records(in)) {
        store.put_map(std::move(m));
        ++n;
    }
    std::cout << "ingested " << n << " maps\n";
    return 0;
}

int run_ingest_control_points(const Common& c, const std::string& file) {
    auto store = open_store_for(resolve_config(c));
    auto in = open_input(file);
    std::map<std::string, std::vector<geo::ControlPoint>> by_map;
    for (auto& r : geo::read_control_points(in)) by_map[r.map_id].push_back(std::move(r.point));
    for (auto& [map_id, points] : by_map) {
        store.add_control_points(map_id, points);
        std::cout << map_id << ": " << points.size() << " control points\n";
    }
    return 0;
}

int run_ingest_annotations(const Common& c, const std::string& file) {
    auto store = open_store_for(resolve_config(c));
    auto in = open_input(file);
    const auto s = ingest_annotation_records(store, in);
    std::cout << "ingested " << s.annotations << " annotations, " << s.accepted << " accepted and " << s.rejected
              << " rejected tags\n";
    return 0;
}

int run_export_judgments(const Common& c, const std::string& path) {
    auto store = open_store_for(resolve_config(c));
    std::ostringstream out;
    out << "concept\ttarget\tuser\tsign\n";
    for (const auto& j : store.graph().relevance_judgments()) {
        out << j.subject << '\t' << j.target << '\t' << j.user << '\t' << (j.sign > 0 ? "+1" : "-1") << '\n';
    }
    if (path == "-") {
        std::cout << out.str();
    } else {
        write_file_atomic(path, out.str());
    }
    return 0;
}

int run_stats(const Common& c, const std::string& report, const std::string& table_file) {
    ApiRequest req;
    req.path = "/stats/" + report;
    if (!table_file.empty()) {
        req.method = "POST";
        req.body = read_file(table_file);
        AnnotationStore scratch;
        Api api(scratch, Providers{});
        const auto resp = api.handle(req);
        std::cout << resp.body << '\n';
        return resp.status < 400 ? 0 : 1;
    }
    req.method = "GET";
    auto store = open_store_for(resolve_config(c));
    Api api(store, Providers{});
    const auto resp = api.handle(req);
    std::cout << resp.body << '\n';
    return resp.status < 400 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semtag: semantic map annotation service"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--data-dir", common.data_dir, "Data directory (overrides config and environment)");
    };

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    add_common(serve);

    std::string file;
    auto* ingest_maps = app.add_subcommand("ingest-maps", "Load map records (JSON lines)");
    ingest_maps->add_option("file", file)->required()->check(CLI::ExistingFile);
    add_common(ingest_maps);

    auto* ingest_cp = app.add_subcommand("ingest-control-points", "Load control points (JSON lines)");
    ingest_cp->add_option("file", file)->required()->check(CLI::ExistingFile);
    add_common(ingest_cp);

    auto* ingest_ann = app.add_subcommand("ingest-annotations", "Load annotation records (JSON lines)");
    ingest_ann->add_option("file", file)->required()->check(CLI::ExistingFile);
    add_common(ingest_ann);

    std::string out_path;
    auto* export_j = app.add_subcommand("export-judgments", "Write relevance judgments as TSV ('-' for stdout)");
    export_j->add_option("path", out_path)->required();
    add_common(export_j);

    std::string report, table;
    auto* stats = app.add_subcommand("stats", "Run a statistics report");
    stats->add_option("report", report, "chi-square | friedman | kappa | frequencies | means | evolution")
        ->required();
    stats->add_option("table-file", table, "Delimited table; omit to report on the data directory")
        ->check(CLI::ExistingFile);
    add_common(stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage problems share exit code 2 with runtime errors; --help stays 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*serve) return run_serve(common);
        if (*ingest_maps) return run_ingest_maps(common, file);
        if (*ingest_cp) return run_ingest_control_points(common, file);
        if (*ingest_ann) return run_ingest_annotations(common, file);
        if (*export_j) return run_export_judgments(common, out_path);
        if (*stats) return run_stats(common, report, table);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
