#include "semtag/config.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace semtag {

namespace {

ProviderMode parse_mode(const std::string& s) {
    if (s == "fixture") return ProviderMode::Fixture;
    if (s == "live") return ProviderMode::Live;
    throw Error(ErrorCode::Validation, "provider mode must be 'fixture' or 'live', got '" + s + "'");
}

long parse_long(const std::string& name, const std::string& s) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Validation, name + " must be an integer, got '" + s + "'");
    }
}

} // namespace

std::string ServiceConfig::effective_base_uri() const {
    if (!base_uri.empty()) return base_uri;
    return "http://" + listen_address + ":" + std::to_string(port);
}

ServiceConfig load_config(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Validation, path.string() + ": " + e.what());
    }
    ServiceConfig c;
    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };
    try {
        c.listen_address = j.value("listen_address", c.listen_address);
        c.port = j.value("port", c.port);
        if (j.contains("data_dir")) c.data_dir = resolve(j["data_dir"].get<std::string>());
        c.base_uri = j.value("base_uri", c.base_uri);
        if (j.contains("provider_mode")) c.provider_mode = parse_mode(j["provider_mode"].get<std::string>());
        if (j.contains("fixture_concepts")) c.fixture_concepts = resolve(j["fixture_concepts"].get<std::string>());
        c.entity_endpoint = j.value("entity_endpoint", c.entity_endpoint);
        c.gazetteer_endpoint = j.value("gazetteer_endpoint", c.gazetteer_endpoint);
        c.gazetteer_username = j.value("gazetteer_username", c.gazetteer_username);
        if (j.contains("suggestion_cap")) {
            const auto cap = j["suggestion_cap"].get<long>();
            if (cap < 0) throw Error(ErrorCode::Validation, "suggestion_cap must be >= 0");
            c.suggestion_cap = static_cast<std::size_t>(cap);
        }
        c.request_timeout_ms = j.value("request_timeout_ms", c.request_timeout_ms);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Validation, path.string() + ": " + e.what());
    }
    return c;
}

void apply_env_overrides(ServiceConfig& c, const EnvLookup& lookup) {
    if (auto v = lookup("SEMTAG_LISTEN_ADDRESS")) c.listen_address = *v;
    if (auto v = lookup("SEMTAG_PORT")) c.port = static_cast<int>(parse_long("SEMTAG_PORT", *v));
    if (auto v = lookup("SEMTAG_DATA_DIR")) c.data_dir = *v;
    if (auto v = lookup("SEMTAG_BASE_URI")) c.base_uri = *v;
    if (auto v = lookup("SEMTAG_PROVIDER_MODE")) c.provider_mode = parse_mode(*v);
    if (auto v = lookup("SEMTAG_FIXTURE_CONCEPTS")) c.fixture_concepts = *v;
    if (auto v = lookup("SEMTAG_ENTITY_ENDPOINT")) c.entity_endpoint = *v;
    if (auto v = lookup("SEMTAG_GAZETTEER_ENDPOINT")) c.gazetteer_endpoint = *v;
    if (auto v = lookup("SEMTAG_GAZETTEER_USERNAME")) c.gazetteer_username = *v;
    if (auto v = lookup("SEMTAG_SUGGESTION_CAP")) {
        const auto cap = parse_long("SEMTAG_SUGGESTION_CAP", *v);
        if (cap < 0) throw Error(ErrorCode::Validation, "SEMTAG_SUGGESTION_CAP must be >= 0");
        c.suggestion_cap = static_cast<std::size_t>(cap);
    }
    if (auto v = lookup("SEMTAG_REQUEST_TIMEOUT_MS")) {
        c.request_timeout_ms = static_cast<int>(parse_long("SEMTAG_REQUEST_TIMEOUT_MS", *v));
    }
}

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

void validate_config(const ServiceConfig& c) {
    if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::Validation, "port out of range");
    if (c.request_timeout_ms <= 0) throw Error(ErrorCode::Validation, "request_timeout_ms must be positive");
    if (c.provider_mode == ProviderMode::Live && c.entity_endpoint.empty() && c.gazetteer_endpoint.empty()) {
        throw Error(ErrorCode::Validation, "live mode needs at least one provider endpoint");
    }
    std::error_code ec;
    std::filesystem::create_directories(c.data_dir, ec);
    if (ec || !std::filesystem::is_directory(c.data_dir, ec)) {
        throw Error(ErrorCode::Io, "data directory " + c.data_dir.string() + " cannot be created");
    }
    const auto probe = c.data_dir / ".write-probe";
    try {
        write_file_atomic(probe, "ok");
        std::filesystem::remove(probe);
    } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "data directory " + c.data_dir.string() + " is not writable");
    }
}

} // namespace semtag
