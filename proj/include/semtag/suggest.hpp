#pragma once

#include "semtag/geo.hpp"
#include "semtag/tag_graph.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semtag::suggest {

/// Most tags shown for one annotation.
inline constexpr std::size_t kDefaultCap = 15;
/// Uniform score for history suggestions, which carry no ranking.
inline constexpr double kHistoryScore = 0.5;

enum class SuggestionOrigin { Text, Region, History, Related };
std::string_view to_string(SuggestionOrigin o);
SuggestionOrigin parse_suggestion_origin(std::string_view s);
Origin to_tag_origin(SuggestionOrigin o);

/// A candidate tag. `resource.uri` is empty for literal labels (history of label tags).
struct Suggestion {
    KnowledgeResource resource;
    double score = 0.0;
    SuggestionOrigin origin = SuggestionOrigin::Text;

    /// Dedupe key: the URI, or `label:` + lowercase label when there is no URI.
    std::string key() const;
    TagSubject subject() const;
};

struct ScoredConcept {
    KnowledgeResource resource;
    double score = 0.0;
};

class EntityProvider {
public:
    virtual ~EntityProvider() = default;
    /// Ranked concepts mentioned in `text`; scores in [0, 1], non-increasing.
    virtual std::vector<ScoredConcept> recognize(std::string_view text) = 0;
};

class GazetteerProvider {
public:
    virtual ~GazetteerProvider() = default;
    /// Geo-tagged concepts inside `bbox`.
    virtual std::vector<KnowledgeResource> within(const geo::GeoBBox& bbox, std::size_t limit) = 0;
};

class RelatedProvider {
public:
    virtual ~RelatedProvider() = default;
    virtual std::vector<KnowledgeResource> related(std::string_view concept_uri, std::size_t limit) = 0;
};

/// Provider failures surface as Error(ProviderUnavailable).
std::vector<Suggestion> suggest_from_text(std::string_view text, EntityProvider& provider, std::size_t limit);
std::vector<Suggestion> suggest_from_region(const geo::GeoBBox& bbox, GazetteerProvider& provider,
                                            std::size_t limit);

/// Seeded uniform sample without replacement from the distinct accepted subjects in `graph`.
std::vector<Suggestion> suggest_from_history(const TagGraph& graph, std::uint64_t seed, std::size_t limit);

std::vector<Suggestion> expand_related(std::string_view concept_uri, RelatedProvider& provider,
                                       std::size_t limit);

/// Dedupes by key keeping the highest score, drops `exclude_keys`, orders by
/// (score desc, label asc, key asc) and truncates to `cap`.
std::vector<Suggestion> merge_suggestions(std::span<const std::vector<Suggestion>> lists,
                                          std::size_t cap = kDefaultCap,
                                          const std::set<std::string>& exclude_keys = {});

} // namespace semtag::suggest
