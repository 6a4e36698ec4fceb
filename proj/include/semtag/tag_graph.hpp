#pragma once

#include "semtag/geo.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semtag {

enum class ResourceKind { Annotation, Map, Concept };
enum class Polarity { Neutral, Accepted, Rejected };
enum class Origin { Manual, TextSuggestion, RegionSuggestion, HistorySuggestion };

/// Human coding of a tag; data only.
enum class TagType { Factual, Personal, Other };
enum class TagCategory { Event, Location, Other, People, Time };

std::string_view to_string(ResourceKind k);
std::string_view to_string(Polarity p);
std::string_view to_string(Origin o);
std::string_view to_string(TagType t);
std::string_view to_string(TagCategory c);
Polarity parse_polarity(std::string_view s);
Origin parse_origin(std::string_view s);
TagType parse_tag_type(std::string_view s);
TagCategory parse_tag_category(std::string_view s);

struct TagCoding {
    TagType type = TagType::Other;
    TagCategory category = TagCategory::Other;
    friend bool operator==(const TagCoding&, const TagCoding&) = default;
};

struct UserRef {
    std::string id;
    std::string display_name;
    friend bool operator==(const UserRef&, const UserRef&) = default;
};

struct ResourceRef {
    std::string uri;
    ResourceKind kind = ResourceKind::Annotation;
    friend bool operator==(const ResourceRef&, const ResourceRef&) = default;
};

/// A concept from a knowledge context: what a semantic tag points at.
struct KnowledgeResource {
    std::string uri;
    std::string label;
    std::optional<std::string> abstract;
    std::string source;
    std::optional<geo::GeoPoint> geo;
    friend bool operator==(const KnowledgeResource&, const KnowledgeResource&) = default;
};

/// The tag side of a relationship: a concept URI or a literal label.
class TagSubject {
public:
    static TagSubject resource(std::string uri);
    static TagSubject literal(std::string label);

    bool is_literal() const noexcept { return literal_; }
    const std::string& value() const noexcept { return value_; }

    /// Identity key: the URI for concepts, `label:` + lowercase label for literals.
    std::string key() const;

    friend bool operator==(const TagSubject& a, const TagSubject& b) { return a.key() == b.key(); }

private:
    TagSubject(std::string v, bool lit) : value_(std::move(v)), literal_(lit) {}
    std::string value_;
    bool literal_ = false;
};

struct TagRelationship {
    std::string id;
    UserRef user;
    TagSubject subject = TagSubject::literal("?");
    ResourceRef target;
    Polarity polarity = Polarity::Neutral;
    Origin origin = Origin::Manual;
    std::string created_at;
    std::optional<TagCoding> coding;
};

/// One line of the append-only edge log: a full snapshot of a relationship after a change.
struct EdgeEvent {
    std::string id;
    std::string user;
    TagSubject subject = TagSubject::literal("?");
    std::string target_uri;
    Polarity polarity = Polarity::Neutral;
    Origin origin = Origin::Manual;
    std::string timestamp;
    std::optional<TagCoding> coding;
};

std::string to_json_line(const EdgeEvent& e);
EdgeEvent parse_event_line(std::string_view line);
std::vector<EdgeEvent> read_event_log(std::istream& in);

struct Judgment {
    std::string subject;  // URI, or the literal label
    std::string target;
    std::string user;
    int sign = 0;         // +1 accepted, -1 rejected
    friend bool operator==(const Judgment&, const Judgment&) = default;
};

struct RankedConcept {
    TagSubject subject = TagSubject::literal("?");
    std::string label;
    std::size_t count = 0;
};

/// Users, target resources and concepts joined by qualified tagging relationships.
///
/// Each (user, subject key, target) has exactly one current polarity; every change
/// is also appended to an event log from which the graph can be rebuilt. Readers
/// share a lock, writers are serialized.
class TagGraph {
public:
    using Clock = std::function<std::string()>;
    using EventSink = std::function<void(const EdgeEvent&)>;

    explicit TagGraph(Clock clock = {});

    void add_user(UserRef user);
    bool has_user(std::string_view id) const;

    void add_resource(ResourceRef resource);
    bool has_resource(std::string_view uri) const;

    void add_concept(KnowledgeResource kr);
    std::optional<KnowledgeResource> find_concept(std::string_view uri) const;

    /// Upserts the relationship for (user, subject, target).
    ///
    /// Throws NotFound for an unknown target and Validation when a literal label
    /// is given polarity rejected.
    TagRelationship record(const UserRef& user, const TagSubject& subject, std::string_view target_uri,
                           Polarity polarity, Origin origin);

    void set_coding(std::string_view relationship_id, TagCoding coding);

    std::optional<TagRelationship> find(std::string_view relationship_id) const;
    std::optional<TagRelationship> find(std::string_view user_id, std::string_view subject_key,
                                        std::string_view target_uri) const;

    /// Distinct accepted subjects on a target, ordered by key.
    std::vector<TagSubject> positive_set(std::string_view target_uri) const;
    std::vector<TagSubject> negative_set(std::string_view target_uri) const;
    /// Attributed view: one entry per (user, subject) edge.
    std::vector<TagRelationship> positive_edges(std::string_view target_uri) const;
    std::vector<TagRelationship> negative_edges(std::string_view target_uri) const;

    /// One row per non-neutral relationship, ordered by (target, concept, user).
    std::vector<Judgment> relevance_judgments() const;

    /// Subjects accepted by the user or anyone who tagged a target the user tagged,
    /// ranked by acceptance count desc, then label asc.
    std::vector<RankedConcept> cooccurring_concepts(std::string_view user_id, std::size_t limit) const;

    /// Current relationships ordered by (target, subject key, user).
    std::vector<TagRelationship> relationships() const;
    std::vector<EdgeEvent> events() const;
    std::size_t size() const;

    /// Applies logged snapshots in order. Unknown users and targets are registered
    /// on the fly (targets as annotations).
    void replay(std::span<const EdgeEvent> events);

    void set_event_sink(EventSink sink);

private:
    using EdgeKey = std::string;
    static EdgeKey edge_key(std::string_view user, std::string_view subject_key, std::string_view target);

    std::vector<TagRelationship> edges_with(std::string_view target_uri, Polarity p) const;
    std::string label_of(const TagSubject& s) const;
    void apply(const EdgeEvent& e);
    void emit(const EdgeEvent& e);

    mutable std::shared_mutex mutex_;
    Clock clock_;
    EventSink sink_;
    std::map<std::string, UserRef, std::less<>> users_;
    std::map<std::string, ResourceRef, std::less<>> resources_;
    std::map<std::string, KnowledgeResource, std::less<>> concepts_;
    std::map<EdgeKey, TagRelationship, std::less<>> edges_;
    std::unordered_map<std::string, EdgeKey> by_id_;
    std::vector<EdgeEvent> log_;
    std::uint64_t next_id_ = 1;
};

} // namespace semtag
