#include "semtag/fixture_context.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>

namespace semtag::suggest {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Offset of the first whole-word occurrence of `needle` in `hay`, both lowercased.
std::size_t find_word(const std::string& hay, const std::string& needle) {
    if (needle.empty()) return std::string::npos;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
        const bool left_ok = pos == 0 || !is_word_char(hay[pos - 1]);
        const auto end = pos + needle.size();
        const bool right_ok = end == hay.size() || !is_word_char(hay[end]);
        if (left_ok && right_ok) return pos;
    }
    return std::string::npos;
}

FixtureConcept parse_concept(const nlohmann::json& j, const std::string& source) {
    FixtureConcept c;
    c.resource.uri = j.at("uri").get<std::string>();
    c.resource.label = j.at("label").get<std::string>();
    c.resource.source = j.value("source", source);
    if (j.contains("abstract") && j["abstract"].is_string()) c.resource.abstract = j["abstract"].get<std::string>();
    if (j.contains("lon") && j.contains("lat") && j["lon"].is_number() && j["lat"].is_number()) {
        c.resource.geo = geo::GeoPoint{j["lon"].get<double>(), j["lat"].get<double>()};
    }
    c.links = j.value("links", std::vector<std::string>{});
    c.mentions = j.value("mentions", std::vector<std::string>{});
    c.prior = j.value("prior", 0.5);
    if (c.resource.label.empty()) throw Error(ErrorCode::Validation, "fixture concept without label");
    if (!is_absolute_uri(c.resource.uri)) throw Error(ErrorCode::Validation, "fixture concept URI not absolute");
    if (c.prior < 0.0 || c.prior > 1.0) throw Error(ErrorCode::Validation, "fixture prior outside [0,1]");
    return c;
}

} // namespace

FixtureKnowledgeContext::FixtureKnowledgeContext(std::vector<FixtureConcept> concepts)
    : concepts_(std::move(concepts)) {}

FixtureKnowledgeContext FixtureKnowledgeContext::load(std::istream& in, std::string source) {
    std::vector<FixtureConcept> concepts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        try {
            concepts.push_back(parse_concept(nlohmann::json::parse(t), source));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Validation, "concept line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return FixtureKnowledgeContext(std::move(concepts));
}

FixtureKnowledgeContext FixtureKnowledgeContext::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return load(in, path.stem().string());
}

const FixtureConcept* FixtureKnowledgeContext::find(std::string_view uri) const {
    auto it = std::find_if(concepts_.begin(), concepts_.end(),
                           [&](const FixtureConcept& c) { return c.resource.uri == uri; });
    return it == concepts_.end() ? nullptr : &*it;
}

std::vector<ScoredConcept> FixtureKnowledgeContext::recognize(std::string_view text) {
    const auto hay = to_lower(text);
    struct Hit {
        const FixtureConcept* entry;
        std::size_t offset;
    };
    std::vector<Hit> hits;
    for (const auto& c : concepts_) {
        auto best = std::numeric_limits<std::size_t>::max();
        best = std::min(best, find_word(hay, to_lower(c.resource.label)));
        for (const auto& m : c.mentions) best = std::min(best, find_word(hay, to_lower(m)));
        if (best != std::string::npos) hits.push_back({&c, best});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.entry->prior != b.entry->prior) return a.entry->prior > b.entry->prior;
        if (a.offset != b.offset) return a.offset < b.offset;
        return a.entry->resource.label < b.entry->resource.label;
    });
    std::vector<ScoredConcept> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back({h.entry->resource, h.entry->prior});
    return out;
}

std::vector<KnowledgeResource> FixtureKnowledgeContext::within(const geo::GeoBBox& bbox, std::size_t limit) {
    std::vector<KnowledgeResource> out;
    for (const auto& c : concepts_) {
        if (out.size() == limit) break;
        if (c.resource.geo && bbox.contains(*c.resource.geo)) out.push_back(c.resource);
    }
    return out;
}

std::vector<KnowledgeResource> FixtureKnowledgeContext::related(std::string_view concept_uri, std::size_t limit) {
    std::vector<KnowledgeResource> out;
    const auto* origin = find(concept_uri);
    if (!origin) return out;
    for (const auto& link : origin->links) {
        if (out.size() == limit) break;
        if (link == concept_uri) continue;
        if (const auto* target = find(link)) out.push_back(target->resource);
    }
    return out;
}

} // namespace semtag::suggest
