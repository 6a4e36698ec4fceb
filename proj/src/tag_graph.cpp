#include "semtag/tag_graph.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <istream>
#include <mutex>
#include <set>
#include <tuple>

namespace semtag {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<Enum, N>& values, std::string_view what) {
    for (auto v : values)
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::Validation, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr char kSep = '\x1f';

} // namespace

std::string_view to_string(ResourceKind k) {
    switch (k) {
    case ResourceKind::Annotation: return "annotation";
    case ResourceKind::Map: return "map";
    case ResourceKind::Concept: return "concept";
    }
    return "?";
}

std::string_view to_string(Polarity p) {
    switch (p) {
    case Polarity::Neutral: return "neutral";
    case Polarity::Accepted: return "accepted";
    case Polarity::Rejected: return "rejected";
    }
    return "?";
}

std::string_view to_string(Origin o) {
    switch (o) {
    case Origin::Manual: return "manual";
    case Origin::TextSuggestion: return "text-suggestion";
    case Origin::RegionSuggestion: return "region-suggestion";
    case Origin::HistorySuggestion: return "history-suggestion";
    }
    return "?";
}

std::string_view to_string(TagType t) {
    switch (t) {
    case TagType::Factual: return "factual";
    case TagType::Personal: return "personal";
    case TagType::Other: return "other";
    }
    return "?";
}

std::string_view to_string(TagCategory c) {
    switch (c) {
    case TagCategory::Event: return "event";
    case TagCategory::Location: return "location";
    case TagCategory::Other: return "other";
    case TagCategory::People: return "people";
    case TagCategory::Time: return "time";
    }
    return "?";
}

Polarity parse_polarity(std::string_view s) {
    return parse_enum(s, std::array{Polarity::Neutral, Polarity::Accepted, Polarity::Rejected}, "polarity");
}

Origin parse_origin(std::string_view s) {
    return parse_enum(s,
                      std::array{Origin::Manual, Origin::TextSuggestion, Origin::RegionSuggestion,
                                 Origin::HistorySuggestion},
                      "origin");
}

TagType parse_tag_type(std::string_view s) {
    return parse_enum(s, std::array{TagType::Factual, TagType::Personal, TagType::Other}, "tag type");
}

TagCategory parse_tag_category(std::string_view s) {
    return parse_enum(s,
                      std::array{TagCategory::Event, TagCategory::Location, TagCategory::Other,
                                 TagCategory::People, TagCategory::Time},
                      "tag category");
}

TagSubject TagSubject::resource(std::string uri) {
    if (!is_absolute_uri(uri)) throw Error(ErrorCode::Validation, "concept '" + uri + "' is not an absolute URI");
    return TagSubject(std::move(uri), false);
}

TagSubject TagSubject::literal(std::string label) {
    if (trim(label).empty()) throw Error(ErrorCode::Validation, "empty tag label");
    return TagSubject(std::move(label), true);
}

std::string TagSubject::key() const {
    return literal_ ? "label:" + to_lower(value_) : value_;
}

// -- event log ---------------------------------------------------------------

std::string to_json_line(const EdgeEvent& e) {
    nlohmann::json j{{"id", e.id},
                     {"user", e.user},
                     {"concept_uri_or_label", e.subject.value()},
                     {"target_uri", e.target_uri},
                     {"polarity", to_string(e.polarity)},
                     {"origin", to_string(e.origin)},
                     {"timestamp", e.timestamp}};
    if (e.subject.is_literal()) j["literal"] = true;
    if (e.coding) {
        j["coding"] = {{"type", to_string(e.coding->type)}, {"category", to_string(e.coding->category)}};
    }
    return j.dump();
}

EdgeEvent parse_event_line(std::string_view line) {
    try {
        const auto j = nlohmann::json::parse(line);
        EdgeEvent e;
        e.id = j.at("id").get<std::string>();
        e.user = j.at("user").get<std::string>();
        auto subject = j.at("concept_uri_or_label").get<std::string>();
        e.subject = j.value("literal", false) ? TagSubject::literal(std::move(subject))
                                               : TagSubject::resource(std::move(subject));
        e.target_uri = j.at("target_uri").get<std::string>();
        e.polarity = parse_polarity(j.at("polarity").get<std::string>());
        e.origin = parse_origin(j.at("origin").get<std::string>());
        e.timestamp = j.at("timestamp").get<std::string>();
        if (j.contains("coding")) {
            e.coding = TagCoding{parse_tag_type(j["coding"].at("type").get<std::string>()),
                                 parse_tag_category(j["coding"].at("category").get<std::string>())};
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::Validation, std::string("malformed edge event: ") + ex.what());
    }
}

std::vector<EdgeEvent> read_event_log(std::istream& in) {
    std::vector<EdgeEvent> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        out.push_back(parse_event_line(line));
    }
    return out;
}

// -- graph -------------------------------------------------------------------

TagGraph::TagGraph(Clock clock) : clock_(clock ? std::move(clock) : Clock(now_iso8601)) {}

TagGraph::EdgeKey TagGraph::edge_key(std::string_view user, std::string_view subject_key,
                                     std::string_view target) {
    std::string k;
    k.reserve(user.size() + subject_key.size() + target.size() + 2);
    k.append(target).push_back(kSep);
    k.append(subject_key).push_back(kSep);
    k.append(user);
    return k;
}

void TagGraph::add_user(UserRef user) {
    std::unique_lock lock(mutex_);
    users_.insert_or_assign(user.id, std::move(user));
}

bool TagGraph::has_user(std::string_view id) const {
    std::shared_lock lock(mutex_);
    return users_.find(id) != users_.end();
}

void TagGraph::add_resource(ResourceRef resource) {
    if (!is_absolute_uri(resource.uri)) {
        throw Error(ErrorCode::Validation, "resource '" + resource.uri + "' is not an absolute URI");
    }
    std::unique_lock lock(mutex_);
    resources_.insert_or_assign(resource.uri, std::move(resource));
}

bool TagGraph::has_resource(std::string_view uri) const {
    std::shared_lock lock(mutex_);
    return resources_.find(uri) != resources_.end();
}

void TagGraph::add_concept(KnowledgeResource kr) {
    if (kr.label.empty()) throw Error(ErrorCode::Validation, "concept label must be non-empty");
    if (!is_absolute_uri(kr.uri)) throw Error(ErrorCode::Validation, "concept URI is not absolute");
    std::unique_lock lock(mutex_);
    concepts_.insert_or_assign(kr.uri, std::move(kr));
}

std::optional<KnowledgeResource> TagGraph::find_concept(std::string_view uri) const {
    std::shared_lock lock(mutex_);
    if (auto it = concepts_.find(uri); it != concepts_.end()) return it->second;
    return std::nullopt;
}

TagRelationship TagGraph::record(const UserRef& user, const TagSubject& subject, std::string_view target_uri,
                                 Polarity polarity, Origin origin) {
    if (subject.is_literal() && polarity == Polarity::Rejected) {
        throw Error(ErrorCode::Validation, "literal label tags cannot be rejected");
    }
    std::unique_lock lock(mutex_);
    if (resources_.find(target_uri) == resources_.end()) {
        throw Error(ErrorCode::NotFound, "unknown target '" + std::string(target_uri) + "'");
    }
    if (users_.find(user.id) == users_.end()) users_.emplace(user.id, user);

    const auto key = edge_key(user.id, subject.key(), target_uri);
    EdgeEvent e;
    if (auto it = edges_.find(key); it != edges_.end()) {
        e.id = it->second.id;
        e.coding = it->second.coding;
    } else {
        e.id = "tag-" + std::to_string(next_id_);
    }
    e.user = user.id;
    e.subject = subject;
    e.target_uri = std::string(target_uri);
    e.polarity = polarity;
    e.origin = origin;
    e.timestamp = clock_();
    apply(e);
    emit(e);
    return edges_.at(key);
}

void TagGraph::set_coding(std::string_view relationship_id, TagCoding coding) {
    std::unique_lock lock(mutex_);
    auto it = by_id_.find(std::string(relationship_id));
    if (it == by_id_.end()) {
        throw Error(ErrorCode::NotFound, "unknown relationship '" + std::string(relationship_id) + "'");
    }
    const auto& rel = edges_.at(it->second);
    EdgeEvent e{rel.id, rel.user.id, rel.subject, rel.target.uri, rel.polarity, rel.origin, clock_(), coding};
    apply(e);
    emit(e);
}

void TagGraph::apply(const EdgeEvent& e) {
    if (users_.find(e.user) == users_.end()) users_.emplace(e.user, UserRef{e.user, e.user});
    if (resources_.find(e.target_uri) == resources_.end()) {
        resources_.emplace(e.target_uri, ResourceRef{e.target_uri, ResourceKind::Annotation});
    }
    const auto key = edge_key(e.user, e.subject.key(), e.target_uri);
    auto [it, inserted] = edges_.try_emplace(key);
    auto& rel = it->second;
    if (inserted) {
        rel.id = e.id;
        rel.created_at = e.timestamp;
        by_id_[e.id] = key;
    }
    rel.user = users_.at(e.user);
    rel.subject = e.subject;
    rel.target = resources_.at(e.target_uri);
    rel.polarity = e.polarity;
    rel.origin = e.origin;
    rel.coding = e.coding;
    log_.push_back(e);

    // Keep fresh ids ahead of any id seen so far, including replayed ones.
    if (e.id.starts_with("tag-")) {
        std::uint64_t n = 0;
        const auto* first = e.id.data() + 4;
        const auto* last = e.id.data() + e.id.size();
        if (auto [p, ec] = std::from_chars(first, last, n); ec == std::errc{} && p == last) {
            next_id_ = std::max(next_id_, n + 1);
        }
    }
}

void TagGraph::emit(const EdgeEvent& e) {
    if (sink_) sink_(e);
}

void TagGraph::set_event_sink(EventSink sink) {
    std::unique_lock lock(mutex_);
    sink_ = std::move(sink);
}

void TagGraph::replay(std::span<const EdgeEvent> events) {
    std::unique_lock lock(mutex_);
    for (const auto& e : events) {
        if (e.subject.is_literal() && e.polarity == Polarity::Rejected) {
            throw Error(ErrorCode::Validation, "event " + e.id + " rejects a literal label");
        }
        apply(e);
    }
}

std::optional<TagRelationship> TagGraph::find(std::string_view relationship_id) const {
    std::shared_lock lock(mutex_);
    auto it = by_id_.find(std::string(relationship_id));
    if (it == by_id_.end()) return std::nullopt;
    return edges_.at(it->second);
}

std::optional<TagRelationship> TagGraph::find(std::string_view user_id, std::string_view subject_key,
                                              std::string_view target_uri) const {
    std::shared_lock lock(mutex_);
    if (auto it = edges_.find(edge_key(user_id, subject_key, target_uri)); it != edges_.end()) return it->second;
    return std::nullopt;
}

std::vector<TagRelationship> TagGraph::edges_with(std::string_view target_uri, Polarity p) const {
    std::shared_lock lock(mutex_);
    if (resources_.find(target_uri) == resources_.end()) {
        throw Error(ErrorCode::NotFound, "unknown target '" + std::string(target_uri) + "'");
    }
    std::vector<TagRelationship> out;
    std::string prefix(target_uri);
    prefix.push_back(kSep);
    for (auto it = edges_.lower_bound(prefix); it != edges_.end() && it->first.starts_with(prefix); ++it) {
        if (it->second.polarity == p) out.push_back(it->second);
    }
    return out;
}

namespace {
std::vector<TagSubject> distinct_subjects(const std::vector<TagRelationship>& edges) {
    std::vector<TagSubject> out;
    for (const auto& e : edges) {
        if (out.empty() || !(out.back() == e.subject)) out.push_back(e.subject);
    }
    return out;
}
} // namespace

std::vector<TagSubject> TagGraph::positive_set(std::string_view target_uri) const {
    return distinct_subjects(edges_with(target_uri, Polarity::Accepted));
}

std::vector<TagSubject> TagGraph::negative_set(std::string_view target_uri) const {
    return distinct_subjects(edges_with(target_uri, Polarity::Rejected));
}

std::vector<TagRelationship> TagGraph::positive_edges(std::string_view target_uri) const {
    return edges_with(target_uri, Polarity::Accepted);
}

std::vector<TagRelationship> TagGraph::negative_edges(std::string_view target_uri) const {
    return edges_with(target_uri, Polarity::Rejected);
}

std::vector<Judgment> TagGraph::relevance_judgments() const {
    std::shared_lock lock(mutex_);
    std::vector<Judgment> out;
    for (const auto& [_, rel] : edges_) {
        if (rel.polarity == Polarity::Neutral) continue;
        out.push_back({rel.subject.value(), rel.target.uri, rel.user.id,
                       rel.polarity == Polarity::Accepted ? 1 : -1});
    }
    std::sort(out.begin(), out.end(), [](const Judgment& a, const Judgment& b) {
        return std::tie(a.target, a.subject, a.user) < std::tie(b.target, b.subject, b.user);
    });
    return out;
}

std::string TagGraph::label_of(const TagSubject& s) const {
    if (s.is_literal()) return s.value();
    if (auto it = concepts_.find(s.value()); it != concepts_.end()) return it->second.label;
    return s.value();
}

std::vector<RankedConcept> TagGraph::cooccurring_concepts(std::string_view user_id, std::size_t limit) const {
    std::shared_lock lock(mutex_);
    if (users_.find(user_id) == users_.end()) {
        throw Error(ErrorCode::NotFound, "unknown user '" + std::string(user_id) + "'");
    }
    std::set<std::string> my_targets;
    for (const auto& [_, rel] : edges_)
        if (rel.user.id == user_id) my_targets.insert(rel.target.uri);

    std::set<std::string, std::less<>> circle{std::string(user_id)};
    for (const auto& [_, rel] : edges_)
        if (my_targets.contains(rel.target.uri)) circle.insert(rel.user.id);

    std::map<std::string, RankedConcept> counts;
    for (const auto& [_, rel] : edges_) {
        if (rel.polarity != Polarity::Accepted || !circle.contains(rel.user.id)) continue;
        auto [it, inserted] = counts.try_emplace(rel.subject.key(), RankedConcept{rel.subject, label_of(rel.subject), 0});
        ++it->second.count;
    }
    std::vector<RankedConcept> out;
    out.reserve(counts.size());
    for (auto& [_, rc] : counts) out.push_back(std::move(rc));
    std::sort(out.begin(), out.end(), [](const RankedConcept& a, const RankedConcept& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.label != b.label) return a.label < b.label;
        return a.subject.key() < b.subject.key();
    });
    if (out.size() > limit) out.resize(limit);
    return out;
}

std::vector<TagRelationship> TagGraph::relationships() const {
    std::shared_lock lock(mutex_);
    std::vector<TagRelationship> out;
    out.reserve(edges_.size());
    for (const auto& [_, rel] : edges_) out.push_back(rel);
    return out;
}

std::vector<EdgeEvent> TagGraph::events() const {
    std::shared_lock lock(mutex_);
    return log_;
}

std::size_t TagGraph::size() const {
    std::shared_lock lock(mutex_);
    return edges_.size();
}

} // namespace semtag
