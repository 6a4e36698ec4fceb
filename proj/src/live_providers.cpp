#include "semtag/live_providers.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>

namespace semtag::suggest {

HttpEndpoint HttpEndpoint::parse(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) throw Error(ErrorCode::Validation, "endpoint needs a scheme");
    const auto path_start = url.find('/', scheme_end + 3);
    HttpEndpoint ep;
    ep.origin = std::string(url.substr(0, path_start));
    if (path_start != std::string_view::npos) ep.path_prefix = std::string(url.substr(path_start));
    while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
    return ep;
}

HttpFetcher::HttpFetcher(HttpEndpoint endpoint, std::chrono::milliseconds timeout, std::chrono::seconds cache_ttl,
                         Clock clock)
    : endpoint_(std::move(endpoint)),
      timeout_(timeout),
      ttl_(cache_ttl),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::steady_clock::now(); })) {}

std::string HttpFetcher::get(const std::string& path_and_query) {
    const auto target = endpoint_.path_prefix + path_and_query;
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(target); it != cache_.end()) {
            if (clock_() - it->second.stored < ttl_) return it->second.body;
            cache_.erase(it);
        }
    }

    httplib::Client client(endpoint_.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());

    std::string failure;
    for (int attempt = 0; attempt < 2; ++attempt) {
        {
            std::lock_guard lock(mutex_);
            ++sent_;
        }
        auto res = client.Get(target, httplib::Headers{{"Accept", "application/json"}});
        if (res && res->status == 200) {
            std::lock_guard lock(mutex_);
            cache_[target] = Entry{res->body, clock_()};
            return res->body;
        }
        failure = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
        if (res && res->status >= 400 && res->status < 500) break;
    }
    throw Error(ErrorCode::ProviderUnavailable, endpoint_.origin + target + ": " + failure);
}

std::size_t HttpFetcher::requests_sent() const {
    std::lock_guard lock(mutex_);
    return sent_;
}

std::string label_from_uri(std::string_view uri) {
    auto slash = uri.find_last_of('/');
    auto seg = httplib::detail::decode_url(std::string(uri.substr(slash == std::string_view::npos ? 0 : slash + 1)), false);
    std::replace(seg.begin(), seg.end(), '_', ' ');
    return seg;
}

std::vector<ScoredConcept> HttpEntityProvider::recognize(std::string_view text) {
    const auto body = fetcher_->get("/annotate?confidence=0&text=" +
                                    httplib::detail::encode_query_param(std::string(text)));
    std::vector<ScoredConcept> out;
    try {
        const auto j = nlohmann::json::parse(body);
        if (!j.contains("Resources")) return out;
        for (const auto& r : j["Resources"]) {
            ScoredConcept sc;
            sc.resource.uri = r.at("@URI").get<std::string>();
            sc.resource.label = label_from_uri(sc.resource.uri);
            sc.resource.source = "entity-recognition";
            const auto& score = r.value("@similarityScore", nlohmann::json("0"));
            sc.score = score.is_string() ? std::stod(score.get<std::string>()) : score.get<double>();
            sc.score = std::clamp(sc.score, 0.0, 1.0);
            if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return o.resource.uri == sc.resource.uri; })) {
                out.push_back(std::move(sc));
            }
        }
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ProviderUnavailable, std::string("bad entity response: ") + e.what());
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    return out;
}

std::vector<KnowledgeResource> HttpGazetteerProvider::within(const geo::GeoBBox& bbox, std::size_t limit) {
    const auto query = "/wikipediaBoundingBoxJSON?north=" + format_double(bbox.max_lat) +
                       "&south=" + format_double(bbox.min_lat) + "&east=" + format_double(bbox.max_lon) +
                       "&west=" + format_double(bbox.min_lon) + "&maxRows=" + std::to_string(limit) +
                       "&username=" + httplib::detail::encode_query_param(username_);
    const auto body = fetcher_->get(query);
    std::vector<KnowledgeResource> out;
    try {
        const auto j = nlohmann::json::parse(body);
        if (!j.contains("geonames")) return out;
        for (const auto& g : j["geonames"]) {
            KnowledgeResource kr;
            auto url = g.value("wikipediaUrl", std::string{});
            if (url.empty()) continue;
            kr.uri = url.find("://") == std::string::npos ? "http://" + url : url;
            kr.label = g.value("title", label_from_uri(kr.uri));
            if (g.contains("summary")) kr.abstract = g["summary"].get<std::string>();
            kr.source = "gazetteer";
            kr.geo = geo::GeoPoint{g.at("lng").get<double>(), g.at("lat").get<double>()};
            out.push_back(std::move(kr));
            if (out.size() == limit) break;
        }
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ProviderUnavailable, std::string("bad gazetteer response: ") + e.what());
    }
    return out;
}

} // namespace semtag::suggest
