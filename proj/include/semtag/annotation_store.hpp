#pragma once

#include "semtag/condition.hpp"
#include "semtag/geo.hpp"
#include "semtag/open_annotation.hpp"
#include "semtag/suggest.hpp"
#include "semtag/tag_graph.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace semtag {

struct MapRecord {
    std::string id;
    std::string title;
    std::string image_uri;
    int width = 0;
    int height = 0;
    std::map<std::string, std::string> metadata;
    std::vector<geo::ControlPoint> control_points;
    friend bool operator==(const MapRecord&, const MapRecord&) = default;
};

/// A tag shown on an annotation together with its tri-state.
struct TagState {
    std::string key;
    TagSubject subject = TagSubject::literal("?");
    std::string label;
    std::optional<std::string> abstract;
    Origin origin = Origin::Manual;
    Polarity state = Polarity::Neutral;
    std::string relationship_id;
    std::string created_at;
    friend bool operator==(const TagState& a, const TagState& b) {
        return a.key == b.key && a.subject.is_literal() == b.subject.is_literal() &&
               a.subject.value() == b.subject.value() && a.label == b.label && a.abstract == b.abstract &&
               a.origin == b.origin && a.state == b.state && a.relationship_id == b.relationship_id &&
               a.created_at == b.created_at;
    }
};

struct Annotation {
    std::string id;
    std::string uri;
    std::uint64_t sequence = 0;  // creation order
    std::string map_id;
    std::vector<geo::PixelPoint> shape;
    std::string body_text;
    UserRef creator;
    Condition condition = Condition::SMT_CTX;
    std::vector<TagState> tags;
    std::string created_at;

    std::size_t count(Polarity p) const;
    const TagState* tag(std::string_view key) const;
    friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class HitKind { Map, AnnotationBody, AnnotationTag };
std::string_view to_string(HitKind k);

struct SearchHit {
    HitKind kind = HitKind::Map;
    std::string id;
    std::string uri;
    std::string matched;  // the field value that matched
};

struct StoreOptions {
    /// Empty keeps everything in memory.
    std::filesystem::path data_dir;
    std::string base_uri = "http://localhost:8080";
    std::size_t display_cap = suggest::kDefaultCap;
    TagGraph::Clock clock;
};

/// neutral -> accepted -> rejected -> neutral; literal labels skip rejected.
Polarity next_state(Polarity current, bool literal);

/// Maps, annotations and their tags, backed by one JSON document per entity plus
/// the tag graph's edge log.
///
/// Every write holds the store lock, so a tag-state change and the matching graph
/// polarity change happen as one unit. On load, tag states are reconciled against
/// the replayed edge log, which is the authority for polarity.
class AnnotationStore {
public:
    explicit AnnotationStore(StoreOptions options = {});
    ~AnnotationStore();

    AnnotationStore(const AnnotationStore&) = delete;
    AnnotationStore& operator=(const AnnotationStore&) = delete;

    const StoreOptions& options() const noexcept { return options_; }

    // -- maps ---------------------------------------------------------------
    void put_map(MapRecord map);
    MapRecord map(std::string_view id) const;
    std::vector<MapRecord> maps() const;
    std::string map_uri(std::string_view id) const;

    /// Appends control points and returns the full list. Pixels must lie on the map.
    std::vector<geo::ControlPoint> add_control_points(std::string_view map_id,
                                                      std::span<const geo::ControlPoint> points);
    /// Throws InsufficientData below three control points.
    geo::GeoTransform transform(std::string_view map_id) const;

    // -- annotations --------------------------------------------------------
    Annotation create_annotation(std::string_view map_id, std::vector<geo::PixelPoint> shape,
                                 std::string body_text, const UserRef& creator, Condition condition,
                                 std::optional<std::string> created_at = {});
    Annotation annotation(std::string_view id) const;
    std::optional<Annotation> find_by_uri(std::string_view uri) const;
    /// All annotations in creation order.
    std::vector<Annotation> annotations() const;
    std::size_t annotation_count() const;

    TagState cycle_tag_state(std::string_view annotation_id, std::string_view tag_key);
    TagState set_tag_state(std::string_view annotation_id, std::string_view tag_key, Polarity state);

    /// Comma-separated labels become accepted literal tags. Only LT annotations accept manual entry.
    std::vector<TagState> add_label_tags(std::string_view annotation_id, std::string_view raw);

    /// Each new suggestion becomes a neutral tag; existing keys are skipped and the
    /// displayed total is capped. Origins must be enabled for the annotation's condition.
    std::vector<TagState> attach_suggestions(std::string_view annotation_id,
                                             std::span<const suggest::Suggestion> suggestions);

    /// Keys of tags currently accepted or rejected on the annotation.
    std::set<std::string> judged_keys(std::string_view annotation_id) const;

    geo::GeoBBox annotation_bbox(std::string_view annotation_id) const;

    oa::Document open_annotation(std::string_view annotation_id) const;
    std::string serialize_open_annotation(std::string_view annotation_id) const;

    /// Case-insensitive substring search over map titles and metadata, annotation
    /// bodies and accepted tag labels; ordered by (kind, id).
    std::vector<SearchHit> search(std::string_view query) const;

    TagGraph& graph() noexcept { return graph_; }
    const TagGraph& graph() const noexcept { return graph_; }

    std::string tag_uri(std::string_view relationship_id) const;

private:
    void load();
    void persist_map(const MapRecord& m) const;
    void persist_annotation(const Annotation& a) const;
    Annotation& annotation_mut(std::string_view id);
    TagState apply_state(Annotation& a, TagState& tag, Polarity state);
    static bool origin_allowed(Condition c, suggest::SuggestionOrigin o);

    StoreOptions options_;
    TagGraph graph_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, MapRecord, std::less<>> maps_;
    std::map<std::string, Annotation, std::less<>> annotations_;
    std::map<std::string, std::string, std::less<>> uri_index_;
    std::uint64_t next_sequence_ = 1;
    std::unique_ptr<std::ofstream> edge_log_;
};

/// JSON forms used for on-disk documents, ingestion and the HTTP API.
std::string map_to_json(const MapRecord& m);
MapRecord map_from_json(std::string_view json);
/// Reads newline-delimited map records {id, title, image_uri, width, height, metadata?}.
std::vector<MapRecord> read_map_records(std::istream& in);

/// Totals reported after ingesting the experiment fixture.
struct IngestSummary {
    std::size_t annotations = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Replays newline-delimited annotation records through the public store
/// operations. Record layout is documented in docs/fixtures.md.
IngestSummary ingest_annotation_records(AnnotationStore& store, std::istream& in);

} // namespace semtag
