#pragma once

#include "semtag/suggest.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace semtag::suggest {

/// Endpoint split into `scheme://host[:port]` and a path prefix.
struct HttpEndpoint {
    std::string origin;
    std::string path_prefix;

    static HttpEndpoint parse(std::string_view url);
};

/// Shared HTTP transport: per-request timeout, one retry, and a response cache.
class HttpFetcher {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    HttpFetcher(HttpEndpoint endpoint, std::chrono::milliseconds timeout,
                std::chrono::seconds cache_ttl = std::chrono::minutes(10), Clock clock = {});

    /// GET `path_and_query` below the endpoint prefix. Throws ProviderUnavailable
    /// when both attempts fail.
    std::string get(const std::string& path_and_query);

    std::size_t requests_sent() const;

private:
    struct Entry {
        std::string body;
        std::chrono::steady_clock::time_point stored;
    };

    HttpEndpoint endpoint_;
    std::chrono::milliseconds timeout_;
    std::chrono::seconds ttl_;
    Clock clock_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Entry> cache_;
    std::size_t sent_ = 0;
};

/// Entity recognition against a DBpedia-Spotlight-style `/annotate` endpoint.
class HttpEntityProvider final : public EntityProvider {
public:
    explicit HttpEntityProvider(std::shared_ptr<HttpFetcher> fetcher) : fetcher_(std::move(fetcher)) {}
    std::vector<ScoredConcept> recognize(std::string_view text) override;

private:
    std::shared_ptr<HttpFetcher> fetcher_;
};

/// Geo-tagged Wikipedia lookup against a GeoNames-style `/wikipediaBoundingBoxJSON` endpoint.
class HttpGazetteerProvider final : public GazetteerProvider {
public:
    HttpGazetteerProvider(std::shared_ptr<HttpFetcher> fetcher, std::string username)
        : fetcher_(std::move(fetcher)), username_(std::move(username)) {}
    std::vector<KnowledgeResource> within(const geo::GeoBBox& bbox, std::size_t limit) override;

private:
    std::shared_ptr<HttpFetcher> fetcher_;
    std::string username_;
};

/// Readable label from a Wikipedia-style URI: last path segment, underscores as spaces.
std::string label_from_uri(std::string_view uri);

} // namespace semtag::suggest
