#pragma once

#include "semtag/suggest.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace semtag::suggest {

/// One record of the fixture concept file.
struct FixtureConcept {
    KnowledgeResource resource;
    std::vector<std::string> links;     // related concept URIs
    std::vector<std::string> mentions;  // extra surface forms besides the label
    double prior = 0.5;
};

/// Offline knowledge context backed by a newline-delimited JSON concept file.
///
/// Entity recognition is whole-word, case-insensitive matching of labels and
/// mentions; hits are ranked by prior desc, first match offset asc, label asc.
/// Gazetteer lookups return geo-tagged concepts inside the box in file order.
class FixtureKnowledgeContext final : public EntityProvider,
                                      public GazetteerProvider,
                                      public RelatedProvider {
public:
    FixtureKnowledgeContext() = default;
    explicit FixtureKnowledgeContext(std::vector<FixtureConcept> concepts);

    static FixtureKnowledgeContext load(std::istream& in, std::string source = "fixture");
    static FixtureKnowledgeContext load_file(const std::filesystem::path& path);

    const std::vector<FixtureConcept>& concepts() const noexcept { return concepts_; }
    const FixtureConcept* find(std::string_view uri) const;

    std::vector<ScoredConcept> recognize(std::string_view text) override;
    std::vector<KnowledgeResource> within(const geo::GeoBBox& bbox, std::size_t limit) override;
    std::vector<KnowledgeResource> related(std::string_view concept_uri, std::size_t limit) override;

private:
    std::vector<FixtureConcept> concepts_;
};

} // namespace semtag::suggest
