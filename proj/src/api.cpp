#include "semtag/api.hpp"
#include "semtag/error.hpp"
#include "semtag/fixture_context.hpp"
#include "semtag/live_providers.hpp"
#include "semtag/stats.hpp"
#include "semtag/util.hpp"

#include <json.hpp>

#include <sstream>

namespace semtag {

using nlohmann::json;

namespace {

ApiResponse json_response(int status, const json& body) {
    ApiResponse r;
    r.status = status;
    r.body = body.dump(2) + "\n";
    return r;
}

ApiResponse error_response(int status, std::string_view code, std::string_view message) {
    return json_response(status, {{"error", code}, {"message", message}});
}

// Splits "/a/b/c" into {"a", "b", "c"}; the last segment of a tag key may contain
// slashes, so callers that need it re-join the tail.
std::vector<std::string> segments(std::string_view path) {
    std::vector<std::string> out;
    for (auto& s : split(path, '/'))
        if (!s.empty()) out.push_back(std::move(s));
    return out;
}

json map_summary_json(const MapRecord& m) { return json::parse(map_to_json(m)); }

json transform_json(const geo::GeoTransform& t, std::size_t points) {
    return {{"a", t.a}, {"b", t.b}, {"c", t.c}, {"d", t.d}, {"e", t.e}, {"f", t.f},
            {"rms_residual", t.rms_residual}, {"control_points", points}};
}

json tag_state_json(const TagState& t, bool with_abstract) {
    json j{{"key", t.key},
           {"label", t.label},
           {"state", to_string(t.state)},
           {"origin", to_string(t.origin)},
           {"tag_id", t.relationship_id}};
    if (!t.subject.is_literal()) j["uri"] = t.subject.value();
    if (with_abstract && t.abstract) j["abstract"] = *t.abstract;
    return j;
}

json control_points_json(const std::vector<geo::ControlPoint>& pts) {
    json arr = json::array();
    for (const auto& cp : pts) {
        json j{{"px", cp.pixel.x}, {"py", cp.pixel.y}, {"lon", cp.geo.lon}, {"lat", cp.geo.lat}};
        if (cp.label) j["label"] = *cp.label;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<geo::ControlPoint> control_points_from_body(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Validation, std::string("body is not JSON: ") + e.what());
    }
    if (j.is_object()) j = json::array({j});
    std::vector<geo::ControlPoint> pts;
    try {
        for (const auto& p : j) {
            geo::ControlPoint cp;
            cp.pixel = {p.at("px").get<double>(), p.at("py").get<double>()};
            cp.geo = {p.at("lon").get<double>(), p.at("lat").get<double>()};
            if (p.contains("label") && p["label"].is_string()) cp.label = p["label"].get<std::string>();
            pts.push_back(cp);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Validation, std::string("bad control point: ") + e.what());
    }
    return pts;
}

json result_json(const stats::TestResult& r) {
    return {{"name", r.name}, {"statistic", r.statistic}, {"df", r.df}, {"p", r.p}};
}

std::vector<stats::AnnotationTally> tallies(const std::vector<Annotation>& annotations) {
    std::vector<stats::AnnotationTally> out;
    out.reserve(annotations.size());
    for (const auto& a : annotations) out.push_back({a.condition, a.count(Polarity::Accepted), a.count(Polarity::Rejected)});
    return out;
}

} // namespace

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Validation: return 400;
    case ErrorCode::InsufficientData:
    case ErrorCode::DegenerateGeometry:
    case ErrorCode::Conflict: return 409;
    case ErrorCode::OutOfRange:
    case ErrorCode::DegenerateTable:
    case ErrorCode::InvalidMatrix:
    case ErrorCode::Unsupported: return 422;
    case ErrorCode::ProviderUnavailable: return 502;
    case ErrorCode::Io: return 500;
    }
    return 500;
}

Providers make_providers(const ServiceConfig& config) {
    auto fixture = std::make_shared<suggest::FixtureKnowledgeContext>(
        std::filesystem::exists(config.fixture_concepts)
            ? suggest::FixtureKnowledgeContext::load_file(config.fixture_concepts)
            : suggest::FixtureKnowledgeContext{});
    Providers p{fixture, fixture, fixture};
    if (config.provider_mode == ProviderMode::Live) {
        const std::chrono::milliseconds timeout(config.request_timeout_ms);
        if (!config.entity_endpoint.empty()) {
            p.entity = std::make_shared<suggest::HttpEntityProvider>(std::make_shared<suggest::HttpFetcher>(
                suggest::HttpEndpoint::parse(config.entity_endpoint), timeout));
        }
        if (!config.gazetteer_endpoint.empty()) {
            p.gazetteer = std::make_shared<suggest::HttpGazetteerProvider>(
                std::make_shared<suggest::HttpFetcher>(suggest::HttpEndpoint::parse(config.gazetteer_endpoint), timeout),
                config.gazetteer_username);
        }
    }
    return p;
}

Api::Api(AnnotationStore& store, Providers providers, std::size_t suggestion_cap)
    : store_(store), providers_(std::move(providers)), cap_(suggestion_cap) {}

ApiResponse Api::handle(const ApiRequest& request) {
    try {
        return route(request);
    } catch (const Error& e) {
        return error_response(http_status(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return error_response(400, "validation", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

ApiResponse Api::route(const ApiRequest& req) {
    const auto seg = segments(req.path);
    const auto& m = req.method;
    const auto n = seg.size();
    auto is = [&](std::size_t i, std::string_view s) { return i < n && seg[i] == s; };

    if (n == 0) {
        return json_response(200, {{"service", "semtag"}, {"base_uri", store_.options().base_uri}});
    }

    if (is(0, "maps")) {
        if (n == 1 && m == "GET") {
            json arr = json::array();
            for (const auto& map : store_.maps()) arr.push_back(map_summary_json(map));
            return json_response(200, arr);
        }
        if (n == 1 && m == "POST") {
            auto rec = map_from_json(req.body);
            store_.put_map(rec);
            auto r = json_response(201, map_summary_json(store_.map(rec.id)));
            r.headers["Location"] = store_.map_uri(rec.id);
            return r;
        }
        if (n == 2 && m == "GET") return json_response(200, map_summary_json(store_.map(seg[1])));
        if (n == 3 && is(2, "control_points")) {
            if (m == "GET") return json_response(200, control_points_json(store_.map(seg[1]).control_points));
            if (m == "POST") {
                const auto pts = control_points_from_body(req.body);
                return json_response(201, control_points_json(store_.add_control_points(seg[1], pts)));
            }
        }
        if (n == 3 && is(2, "transform") && m == "GET") {
            const auto map = store_.map(seg[1]);
            return json_response(200, transform_json(geo::fit_transform(map.control_points), map.control_points.size()));
        }
        if (n == 3 && is(2, "annotations")) {
            if (m == "GET") {
                store_.map(seg[1]);
                json arr = json::array();
                for (const auto& a : store_.annotations())
                    if (a.map_id == seg[1]) arr.push_back({{"id", a.id}, {"uri", a.uri}});
                return json_response(200, arr);
            }
            if (m == "POST") {
                const auto body = json::parse(req.body);
                std::vector<geo::PixelPoint> shape;
                for (const auto& p : body.at("shape")) shape.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
                UserRef creator;
                const auto& c = body.at("creator");
                if (c.is_string()) {
                    creator = {c.get<std::string>(), c.get<std::string>()};
                } else {
                    creator = {c.at("id").get<std::string>(), c.value("name", c.at("id").get<std::string>())};
                }
                const auto condition = parse_condition(body.value("condition", std::string("SMT_CTX")));
                const auto a = store_.create_annotation(seg[1], std::move(shape), body.value("body", std::string{}),
                                                        creator, condition);
                auto r = json_response(201, {{"id", a.id}, {"uri", a.uri}});
                r.headers["Location"] = a.uri;
                return r;
            }
        }
    }

    if (is(0, "annotations") && n >= 2) {
        const auto& id = seg[1];
        if (n == 2 && m == "GET") {
            ApiResponse r;
            r.body = store_.serialize_open_annotation(id);
            return r;
        }
        if (n == 3 && is(2, "tags") && m == "GET") {
            const auto a = store_.annotation(id);
            json arr = json::array();
            for (const auto& t : a.tags) arr.push_back(tag_state_json(t, exposes_abstracts(a.condition)));
            return json_response(200, arr);
        }
        if (n == 3 && is(2, "labels") && m == "POST") {
            const auto body = json::parse(req.body);
            const auto added = store_.add_label_tags(id, body.at("tags").get<std::string>());
            json arr = json::array();
            for (const auto& t : added) arr.push_back(tag_state_json(t, false));
            return json_response(201, arr);
        }
        // /annotations/{id}/tags/{key...}/cycle, where the key may contain '/'.
        if (n >= 5 && is(2, "tags") && seg.back() == "cycle" && m == "POST") {
            const std::string prefix = "/annotations/" + id + "/tags/";
            const auto start = req.path.find(prefix);
            const auto end = req.path.rfind("/cycle");
            if (start == std::string::npos || end == std::string::npos || end <= start + prefix.size()) {
                throw Error(ErrorCode::NotFound, "malformed tag path");
            }
            auto key = req.path.substr(start + prefix.size(), end - start - prefix.size());
            // Accept the tag's relationship id as an alias for its key.
            const auto a = store_.annotation(id);
            if (!a.tag(key)) {
                for (const auto& t : a.tags)
                    if (t.relationship_id == key) key = t.key;
            }
            const auto state = store_.cycle_tag_state(id, key);
            return json_response(200, tag_state_json(state, exposes_abstracts(a.condition)));
        }
    }

    if (is(0, "suggest") && n == 2 && m == "GET") {
        if (seg[1] == "text") return suggest_text(req);
        if (seg[1] == "region") return suggest_region(req);
    }

    if (is(0, "search") && n == 1 && m == "GET") {
        auto q = req.query.find("q");
        json arr = json::array();
        if (q != req.query.end()) {
            for (const auto& h : store_.search(q->second))
                arr.push_back({{"kind", to_string(h.kind)}, {"id", h.id}, {"uri", h.uri}, {"matched", h.matched}});
        }
        return json_response(200, arr);
    }

    if (is(0, "judgments") && n == 1 && m == "GET") {
        json arr = json::array();
        for (const auto& j : store_.graph().relevance_judgments())
            arr.push_back({{"concept", j.subject}, {"target", j.target}, {"user", j.user}, {"sign", j.sign}});
        return json_response(200, arr);
    }

    if (is(0, "stats") && n == 2) return stats_report(seg[1], req);

    return error_response(404, "not-found", "no route for " + m + " " + req.path);
}

ApiResponse Api::finish_suggestions(const Annotation& a, std::vector<std::vector<suggest::Suggestion>> lists) {
    const auto merged = suggest::merge_suggestions(lists, cap_, store_.judged_keys(a.id));
    store_.attach_suggestions(a.id, merged);
    const auto current = store_.annotation(a.id);
    const bool abstracts = exposes_abstracts(a.condition);
    json arr = json::array();
    for (const auto& s : merged) {
        const auto* tag = current.tag(s.key());
        if (!tag) continue;  // did not fit under the display cap
        json j{{"key", s.key()},
               {"label", s.resource.label},
               {"score", s.score},
               {"origin", suggest::to_string(s.origin)},
               {"state", to_string(tag->state)},
               {"tag_id", tag->relationship_id}};
        if (!s.resource.uri.empty()) j["uri"] = s.resource.uri;
        if (abstracts && s.resource.abstract) j["abstract"] = *s.resource.abstract;
        arr.push_back(std::move(j));
    }
    return json_response(200, {{"annotation", a.id}, {"suggestions", std::move(arr)}, {"fallback", false}});
}

ApiResponse Api::suggest_text(const ApiRequest& req) {
    auto it = req.query.find("annotation");
    if (it == req.query.end()) throw Error(ErrorCode::Validation, "missing annotation parameter");
    const auto a = store_.annotation(it->second);
    const auto qit = req.query.find("q");
    const std::string text = qit == req.query.end() ? a.body_text : qit->second;

    if (a.condition == Condition::LT) {
        throw Error(ErrorCode::Conflict, "condition LT offers no suggestions");
    }
    if (a.condition == Condition::ST) {
        return finish_suggestions(a, {suggest::suggest_from_history(store_.graph(), fnv1a(a.id), cap_)});
    }
    std::vector<std::vector<suggest::Suggestion>> lists;
    try {
        lists.push_back(suggest::suggest_from_text(text, *providers_.entity, cap_));
        if (auto rel = req.query.find("related"); rel != req.query.end() && rel->second == "1") {
            for (const auto& s : std::vector(lists.front()))
                lists.push_back(suggest::expand_related(s.resource.uri, *providers_.related, cap_));
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ProviderUnavailable) throw;
        return json_response(502, {{"annotation", a.id}, {"suggestions", json::array()}, {"fallback", true},
                                   {"error", e.what()}});
    }
    return finish_suggestions(a, std::move(lists));
}

ApiResponse Api::suggest_region(const ApiRequest& req) {
    auto it = req.query.find("annotation");
    if (it == req.query.end()) throw Error(ErrorCode::Validation, "missing annotation parameter");
    const auto a = store_.annotation(it->second);
    if (a.condition != Condition::SMT && a.condition != Condition::SMT_CTX) {
        throw Error(ErrorCode::Conflict, std::string("condition ") + std::string(to_string(a.condition)) +
                                             " offers no region suggestions");
    }
    const auto bbox = store_.annotation_bbox(a.id);
    std::vector<suggest::Suggestion> hits;
    try {
        hits = suggest::suggest_from_region(bbox, *providers_.gazetteer, cap_);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ProviderUnavailable) throw;
        return json_response(502, {{"annotation", a.id}, {"suggestions", json::array()}, {"fallback", true},
                                   {"error", e.what()}});
    }
    auto r = finish_suggestions(a, {std::move(hits)});
    auto body = json::parse(r.body);
    body["bbox"] = {{"min_lon", bbox.min_lon}, {"min_lat", bbox.min_lat}, {"max_lon", bbox.max_lon}, {"max_lat", bbox.max_lat}};
    return json_response(r.status, body);
}

ApiResponse Api::stats_report(const std::string& report, const ApiRequest& req) {
    if (req.method == "POST") {
        std::istringstream in(req.body);
        if (report == "chi-square") return json_response(200, result_json(stats::chi_square(stats::parse_table(in))));
        if (report == "friedman") {
            return json_response(200, result_json(stats::friedman_from_rank_counts(stats::parse_rank_counts(in))));
        }
        if (report == "kappa") {
            const auto [a, b] = stats::parse_code_pairs(in);
            return json_response(200, {{"name", "kappa"}, {"statistic", stats::cohens_kappa(a, b)}, {"n", a.size()}});
        }
        return error_response(404, "not-found", "unknown report '" + report + "'");
    }
    if (req.method != "GET") return error_response(404, "not-found", "unknown report '" + report + "'");

    const auto annotations = store_.annotations();
    if (report == "frequencies") {
        json out = json::object();
        for (auto cond : kAllConditions) {
            std::vector<std::string> labels;
            for (const auto& a : annotations) {
                if (a.condition != cond) continue;
                for (const auto& t : a.tags)
                    if (t.state == Polarity::Accepted) labels.push_back(t.label);
            }
            json rows = json::array();
            for (const auto& [label, count] : stats::tag_frequency(labels)) rows.push_back({{"label", label}, {"count", count}});
            out[std::string(to_string(cond))] = std::move(rows);
        }
        return json_response(200, {{"name", "frequencies"}, {"conditions", std::move(out)}});
    }
    if (report == "means") {
        json rows = json::array();
        for (const auto& mrow : stats::mean_tags_per_condition(tallies(annotations))) {
            rows.push_back({{"condition", to_string(mrow.condition)},
                            {"annotations", mrow.annotations},
                            {"accepted", mrow.accepted ? json(*mrow.accepted) : json(nullptr)},
                            {"rejected", mrow.rejected ? json(*mrow.rejected) : json(nullptr)}});
        }
        return json_response(200, {{"name", "means"}, {"conditions", std::move(rows)}});
    }
    if (report == "evolution") {
        json out = json::object();
        for (const auto& [cond, series] : stats::cumulative_evolution(tallies(annotations))) {
            out[std::string(to_string(cond))] = series;
        }
        return json_response(200, {{"name", "evolution"}, {"series", std::move(out)}});
    }
    if (report == "chi-square") {
        const bool categories = req.query.contains("table") && req.query.at("table") == "categories";
        stats::ContingencyTable t;
        t.col_labels = categories ? std::vector<std::string>{"event", "location", "other", "people", "time"}
                                  : std::vector<std::string>{"factual", "personal"};
        for (auto cond : kAllConditions) {
            std::vector<std::int64_t> row(t.col_labels.size(), 0);
            for (const auto& a : annotations) {
                if (a.condition != cond) continue;
                for (const auto& tag : a.tags) {
                    if (tag.state != Polarity::Accepted) continue;
                    const auto rel = store_.graph().find(tag.relationship_id);
                    if (!rel || !rel->coding) continue;
                    const auto code = categories ? std::string(to_string(rel->coding->category))
                                                 : std::string(to_string(rel->coding->type));
                    for (std::size_t c = 0; c < t.col_labels.size(); ++c)
                        if (t.col_labels[c] == code) ++row[c];
                }
            }
            t.row_labels.emplace_back(to_string(cond));
            t.counts.push_back(std::move(row));
        }
        return json_response(200, result_json(stats::chi_square(t)));
    }
    if (report == "friedman") {
        throw Error(ErrorCode::Conflict, "rank counts are not stored; POST a rank-count table to /stats/friedman");
    }
    return error_response(404, "not-found", "unknown report '" + report + "'");
}

} // namespace semtag
