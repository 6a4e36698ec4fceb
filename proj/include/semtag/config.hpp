#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace semtag {

enum class ProviderMode { Fixture, Live };

struct ServiceConfig {
    std::string listen_address = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "var/semtag";
    /// Prefix for minted URIs; defaults to http://{listen_address}:{port}.
    std::string base_uri;
    ProviderMode provider_mode = ProviderMode::Fixture;
    std::filesystem::path fixture_concepts = "data/fixtures/concepts.jsonl";
    std::string entity_endpoint;
    std::string gazetteer_endpoint;
    std::string gazetteer_username = "demo";
    std::size_t suggestion_cap = 15;
    int request_timeout_ms = 5000;

    std::string effective_base_uri() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads a JSON config file; missing keys keep their defaults.
ServiceConfig load_config(const std::filesystem::path& path);

/// Overrides fields from SEMTAG_* environment variables (see README).
void apply_env_overrides(ServiceConfig& config, const EnvLookup& lookup);
EnvLookup process_env();

/// Throws Validation for bad values and Io when the data directory is not writable.
void validate_config(const ServiceConfig& config);

} // namespace semtag
