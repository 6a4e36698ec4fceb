#include "semtag/suggest.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace semtag::suggest {

namespace {

double clamp_score(double s) { return std::clamp(s, 0.0, 1.0); }

// Scores for providers that only return an order.
double rank_score(std::size_t rank) { return 1.0 / static_cast<double>(rank + 1); }

template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ProviderUnavailable) throw;
        throw Error(ErrorCode::ProviderUnavailable, e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ProviderUnavailable, e.what());
    }
}

// Unbiased index in [0, bound) from a 64-bit engine.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

} // namespace

std::string_view to_string(SuggestionOrigin o) {
    switch (o) {
    case SuggestionOrigin::Text: return "text";
    case SuggestionOrigin::Region: return "region";
    case SuggestionOrigin::History: return "history";
    case SuggestionOrigin::Related: return "related";
    }
    return "?";
}

SuggestionOrigin parse_suggestion_origin(std::string_view s) {
    for (auto o : {SuggestionOrigin::Text, SuggestionOrigin::Region, SuggestionOrigin::History,
                   SuggestionOrigin::Related})
        if (to_string(o) == s) return o;
    throw Error(ErrorCode::Validation, "unknown suggestion origin '" + std::string(s) + "'");
}

Origin to_tag_origin(SuggestionOrigin o) {
    switch (o) {
    case SuggestionOrigin::Text: return Origin::TextSuggestion;
    case SuggestionOrigin::Region: return Origin::RegionSuggestion;
    case SuggestionOrigin::History: return Origin::HistorySuggestion;
    // Related concepts are expansions of text/region hits.
    case SuggestionOrigin::Related: return Origin::TextSuggestion;
    }
    return Origin::Manual;
}

std::string Suggestion::key() const {
    return resource.uri.empty() ? "label:" + to_lower(resource.label) : resource.uri;
}

TagSubject Suggestion::subject() const {
    return resource.uri.empty() ? TagSubject::literal(resource.label) : TagSubject::resource(resource.uri);
}

std::vector<Suggestion> suggest_from_text(std::string_view text, EntityProvider& provider, std::size_t limit) {
    if (trim(text).empty() || limit == 0) return {};
    auto hits = guarded([&] { return provider.recognize(text); });
    std::vector<Suggestion> out;
    for (auto& h : hits) {
        if (out.size() == limit) break;
        if (h.resource.label.empty()) continue;
        out.push_back({std::move(h.resource), clamp_score(h.score), SuggestionOrigin::Text});
    }
    return out;
}

std::vector<Suggestion> suggest_from_region(const geo::GeoBBox& bbox, GazetteerProvider& provider,
                                            std::size_t limit) {
    if (bbox.min_lon > bbox.max_lon || bbox.min_lat > bbox.max_lat) {
        throw Error(ErrorCode::Validation, "bounding box min exceeds max");
    }
    if (limit == 0) return {};
    auto hits = guarded([&] { return provider.within(bbox, limit); });
    std::vector<Suggestion> out;
    for (auto& c : hits) {
        if (out.size() == limit) break;
        if (!c.geo || !bbox.contains(*c.geo) || c.label.empty()) continue;
        const double score = rank_score(out.size());
        out.push_back({std::move(c), score, SuggestionOrigin::Region});
    }
    return out;
}

std::vector<Suggestion> suggest_from_history(const TagGraph& graph, std::uint64_t seed, std::size_t limit) {
    std::map<std::string, TagSubject> distinct;
    for (const auto& rel : graph.relationships()) {
        if (rel.polarity == Polarity::Accepted) distinct.try_emplace(rel.subject.key(), rel.subject);
    }
    std::vector<TagSubject> pool;
    pool.reserve(distinct.size());
    for (auto& [_, s] : distinct) pool.push_back(s);

    std::mt19937_64 rng(seed);
    const std::size_t take = std::min(limit, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + static_cast<std::size_t>(bounded(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }

    std::vector<Suggestion> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const auto& s = pool[i];
        KnowledgeResource kr;
        if (s.is_literal()) {
            kr.label = s.value();
            kr.source = "history";
        } else if (auto known = graph.find_concept(s.value())) {
            kr = *known;
        } else {
            kr.uri = s.value();
            kr.label = s.value();
            kr.source = "history";
        }
        out.push_back({std::move(kr), kHistoryScore, SuggestionOrigin::History});
    }
    return out;
}

std::vector<Suggestion> expand_related(std::string_view concept_uri, RelatedProvider& provider, std::size_t limit) {
    if (limit == 0) return {};
    // Ask for one extra in case the provider echoes the input concept.
    auto hits = guarded([&] { return provider.related(concept_uri, limit + 1); });
    std::vector<Suggestion> out;
    for (auto& c : hits) {
        if (out.size() == limit) break;
        if (c.uri == concept_uri || c.label.empty()) continue;
        const double score = rank_score(out.size());
        out.push_back({std::move(c), score, SuggestionOrigin::Related});
    }
    return out;
}

std::vector<Suggestion> merge_suggestions(std::span<const std::vector<Suggestion>> lists, std::size_t cap,
                                          const std::set<std::string>& exclude_keys) {
    std::map<std::string, Suggestion> best;
    for (const auto& list : lists) {
        for (const auto& s : list) {
            auto key = s.key();
            if (exclude_keys.contains(key)) continue;
            auto [it, inserted] = best.try_emplace(std::move(key), s);
            if (!inserted && s.score > it->second.score) it->second = s;
        }
    }
    std::vector<std::pair<std::string, Suggestion>> ordered(best.begin(), best.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.second.score != b.second.score) return a.second.score > b.second.score;
        if (a.second.resource.label != b.second.resource.label) return a.second.resource.label < b.second.resource.label;
        return a.first < b.first;
    });
    std::vector<Suggestion> out;
    out.reserve(std::min(cap, ordered.size()));
    for (auto& [_, s] : ordered) {
        if (out.size() == cap) break;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace semtag::suggest
