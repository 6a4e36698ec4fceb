#include "semtag/open_annotation.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <json.hpp>

#include <charconv>

namespace semtag::oa {

namespace {

constexpr std::string_view kContext = "http://www.w3.org/ns/oa-context-20130208.json";
constexpr std::string_view kPolygonPrefix = "POLYGON((";

double parse_number(std::string_view s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw Error(ErrorCode::Validation, "bad WKT coordinate '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

std::string to_wkt_polygon(std::span<const geo::PixelPoint> shape) {
    std::string out(kPolygonPrefix);
    for (std::size_t i = 0; i <= shape.size(); ++i) {
        const auto& p = shape[i % shape.size()];
        if (i > 0) out += ", ";
        out += format_double(p.x);
        out += ' ';
        out += format_double(p.y);
    }
    out += "))";
    return out;
}

std::vector<geo::PixelPoint> parse_wkt_polygon(std::string_view wkt) {
    if (!wkt.starts_with(kPolygonPrefix) || !wkt.ends_with("))")) {
        throw Error(ErrorCode::Validation, "selector is not a WKT POLYGON");
    }
    const auto body = wkt.substr(kPolygonPrefix.size(), wkt.size() - kPolygonPrefix.size() - 2);
    std::vector<geo::PixelPoint> pts;
    for (const auto& pair : split(body, ',')) {
        const auto t = trim(pair);
        const auto sp = t.find(' ');
        if (sp == std::string::npos) throw Error(ErrorCode::Validation, "bad WKT vertex '" + t + "'");
        pts.push_back({parse_number(std::string_view(t).substr(0, sp)),
                       parse_number(trim(std::string_view(t).substr(sp + 1)))});
    }
    if (pts.size() < 2 || !(pts.front() == pts.back())) {
        throw Error(ErrorCode::Validation, "WKT polygon ring is not closed");
    }
    pts.pop_back();
    return pts;
}

std::string render(const Document& doc) {
    using nlohmann::json;
    json bodies = json::array();
    bodies.push_back({{"@type", "cnt:ContentAsText"}, {"chars", doc.text}, {"format", "text/plain"}});
    for (const auto& t : doc.tags) {
        json body{{"@id", t.tag_uri},
                  {"@type", t.concept_uri ? "oa:SemanticTag" : "oa:Tag"},
                  {"label", t.label},
                  {"polarity", to_string(t.polarity)},
                  {"annotatedBy", t.creator},
                  {"annotatedAt", t.created_at}};
        if (t.concept_uri) body["concept"] = *t.concept_uri;
        bodies.push_back(std::move(body));
    }
    json motivations = json::array({"oa:commenting"});
    if (!doc.tags.empty()) motivations.push_back("oa:tagging");

    json j{{"@context", kContext},
           {"@id", doc.uri},
           {"@type", "oa:Annotation"},
           {"motivatedBy", std::move(motivations)},
           {"annotatedBy", {{"id", doc.creator.id}, {"name", doc.creator.display_name}}},
           {"annotatedAt", doc.created_at},
           {"condition", to_string(doc.condition)},
           {"hasTarget",
            {{"@type", "oa:SpecificResource"},
             {"hasSource", doc.map_uri},
             {"hasSelector", {{"@type", "oa:WktSelector"}, {"crs", "pixel"}, {"value", to_wkt_polygon(doc.shape)}}}}},
           {"hasBody", std::move(bodies)}};
    return j.dump(2) + "\n";
}

Document parse(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        Document doc;
        doc.uri = j.at("@id").get<std::string>();
        doc.created_at = j.at("annotatedAt").get<std::string>();
        doc.creator = {j.at("annotatedBy").at("id").get<std::string>(),
                       j.at("annotatedBy").at("name").get<std::string>()};
        doc.condition = parse_condition(j.at("condition").get<std::string>());
        const auto& target = j.at("hasTarget");
        doc.map_uri = target.at("hasSource").get<std::string>();
        doc.shape = parse_wkt_polygon(target.at("hasSelector").at("value").get<std::string>());

        bool have_text = false;
        for (const auto& b : j.at("hasBody")) {
            const auto type = b.at("@type").get<std::string>();
            if (type == "cnt:ContentAsText") {
                if (have_text) throw Error(ErrorCode::Validation, "more than one text body");
                doc.text = b.at("chars").get<std::string>();
                have_text = true;
                continue;
            }
            if (type != "oa:SemanticTag" && type != "oa:Tag") {
                throw Error(ErrorCode::Validation, "unknown body type '" + type + "'");
            }
            TagBody t;
            t.tag_uri = b.at("@id").get<std::string>();
            t.label = b.at("label").get<std::string>();
            t.polarity = parse_polarity(b.at("polarity").get<std::string>());
            t.creator = b.at("annotatedBy").get<std::string>();
            t.created_at = b.at("annotatedAt").get<std::string>();
            if (type == "oa:SemanticTag") t.concept_uri = b.at("concept").get<std::string>();
            doc.tags.push_back(std::move(t));
        }
        if (!have_text) throw Error(ErrorCode::Validation, "annotation has no text body");
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Validation, std::string("malformed annotation document: ") + e.what());
    }
}

} // namespace semtag::oa
