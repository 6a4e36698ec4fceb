#pragma once

#include "semtag/annotation_store.hpp"
#include "semtag/config.hpp"
#include "semtag/error.hpp"
#include "semtag/suggest.hpp"

#include <map>
#include <memory>
#include <string>

namespace semtag {

struct ApiRequest {
    std::string method;
    std::string path;  // percent-decoded
    std::map<std::string, std::string> query;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::map<std::string, std::string> headers;
};

struct Providers {
    std::shared_ptr<suggest::EntityProvider> entity;
    std::shared_ptr<suggest::GazetteerProvider> gazetteer;
    std::shared_ptr<suggest::RelatedProvider> related;
};

/// Fixture providers from the concept file, or HTTP adapters for the configured
/// live endpoints (fixture data fills whatever has no endpoint).
Providers make_providers(const ServiceConfig& config);

int http_status(ErrorCode code);

/// Routes service requests onto the store, providers and statistics.
/// Transport-independent; HttpServer forwards httplib requests here. Routes are
/// listed in docs/api.md.
class Api {
public:
    Api(AnnotationStore& store, Providers providers, std::size_t suggestion_cap = suggest::kDefaultCap);

    ApiResponse handle(const ApiRequest& request);

private:
    ApiResponse route(const ApiRequest& request);
    ApiResponse suggest_text(const ApiRequest& request);
    ApiResponse suggest_region(const ApiRequest& request);
    ApiResponse finish_suggestions(const Annotation& a, std::vector<std::vector<suggest::Suggestion>> lists);
    ApiResponse stats_report(const std::string& report, const ApiRequest& request);

    AnnotationStore& store_;
    Providers providers_;
    std::size_t cap_;
};

} // namespace semtag
