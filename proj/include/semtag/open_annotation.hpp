#pragma once

#include "semtag/condition.hpp"
#include "semtag/geo.hpp"
#include "semtag/tag_graph.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semtag::oa {

/// One tag body: a semantic tag when `concept_uri` is set, otherwise a label tag.
struct TagBody {
    std::string tag_uri;
    std::optional<std::string> concept_uri;
    std::string label;
    Polarity polarity = Polarity::Accepted;
    std::string creator;
    std::string created_at;
    friend bool operator==(const TagBody&, const TagBody&) = default;
};

/// Everything an annotation exposes on the web. Layout is documented in
/// docs/annotation-format.md.
struct Document {
    std::string uri;
    std::string map_uri;
    std::vector<geo::PixelPoint> shape;
    std::string text;
    UserRef creator;
    std::string created_at;
    Condition condition = Condition::LT;
    std::vector<TagBody> tags;
    friend bool operator==(const Document&, const Document&) = default;
};

/// Canonical JSON rendering: sorted keys, two-space indent, trailing newline.
std::string render(const Document& doc);
/// Inverse of render; throws Validation on malformed documents.
Document parse(std::string_view json);

/// `POLYGON((x y, ..., x y))` with the ring closed; coordinates in pixels.
std::string to_wkt_polygon(std::span<const geo::PixelPoint> shape);
std::vector<geo::PixelPoint> parse_wkt_polygon(std::string_view wkt);

} // namespace semtag::oa
