#include "semtag/annotation_store.hpp"
#include "semtag/error.hpp"
#include "semtag/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace semtag {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json control_point_json(const geo::ControlPoint& cp) {
    json j{{"px", cp.pixel.x}, {"py", cp.pixel.y}, {"lon", cp.geo.lon}, {"lat", cp.geo.lat}};
    if (cp.label) j["label"] = *cp.label;
    return j;
}

geo::ControlPoint control_point_from(const json& j) {
    geo::ControlPoint cp;
    cp.pixel = {j.at("px").get<double>(), j.at("py").get<double>()};
    cp.geo = {j.at("lon").get<double>(), j.at("lat").get<double>()};
    if (j.contains("label") && j["label"].is_string()) cp.label = j["label"].get<std::string>();
    return cp;
}

json map_json(const MapRecord& m) {
    json cps = json::array();
    for (const auto& cp : m.control_points) cps.push_back(control_point_json(cp));
    return {{"id", m.id},
            {"title", m.title},
            {"image_uri", m.image_uri},
            {"width", m.width},
            {"height", m.height},
            {"metadata", m.metadata},
            {"control_points", std::move(cps)}};
}

MapRecord map_from(const json& j) {
    MapRecord m;
    m.id = j.at("id").get<std::string>();
    m.title = j.value("title", std::string{});
    m.image_uri = j.value("image_uri", std::string{});
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    if (j.contains("metadata")) {
        for (const auto& [k, v] : j["metadata"].items()) m.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    if (j.contains("control_points")) {
        for (const auto& cp : j["control_points"]) m.control_points.push_back(control_point_from(cp));
    }
    return m;
}

json annotation_json(const Annotation& a) {
    json shape = json::array();
    for (const auto& p : a.shape) shape.push_back({p.x, p.y});
    json tags = json::array();
    for (const auto& t : a.tags) {
        json jt{{"key", t.key},
                {"subject", t.subject.value()},
                {"literal", t.subject.is_literal()},
                {"label", t.label},
                {"origin", to_string(t.origin)},
                {"state", to_string(t.state)},
                {"relationship_id", t.relationship_id},
                {"created_at", t.created_at}};
        if (t.abstract) jt["abstract"] = *t.abstract;
        tags.push_back(std::move(jt));
    }
    return {{"id", a.id},
            {"uri", a.uri},
            {"sequence", a.sequence},
            {"map_id", a.map_id},
            {"shape", std::move(shape)},
            {"body_text", a.body_text},
            {"creator", {{"id", a.creator.id}, {"name", a.creator.display_name}}},
            {"condition", to_string(a.condition)},
            {"created_at", a.created_at},
            {"tags", std::move(tags)}};
}

Annotation annotation_from(const json& j) {
    Annotation a;
    a.id = j.at("id").get<std::string>();
    a.uri = j.at("uri").get<std::string>();
    a.sequence = j.at("sequence").get<std::uint64_t>();
    a.map_id = j.at("map_id").get<std::string>();
    for (const auto& p : j.at("shape")) a.shape.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    a.body_text = j.at("body_text").get<std::string>();
    a.creator = {j.at("creator").at("id").get<std::string>(), j.at("creator").at("name").get<std::string>()};
    a.condition = parse_condition(j.at("condition").get<std::string>());
    a.created_at = j.at("created_at").get<std::string>();
    for (const auto& jt : j.at("tags")) {
        TagState t;
        t.key = jt.at("key").get<std::string>();
        auto subject = jt.at("subject").get<std::string>();
        t.subject = jt.at("literal").get<bool>() ? TagSubject::literal(std::move(subject))
                                                 : TagSubject::resource(std::move(subject));
        t.label = jt.at("label").get<std::string>();
        if (jt.contains("abstract")) t.abstract = jt["abstract"].get<std::string>();
        t.origin = parse_origin(jt.at("origin").get<std::string>());
        t.state = parse_polarity(jt.at("state").get<std::string>());
        t.relationship_id = jt.at("relationship_id").get<std::string>();
        t.created_at = jt.at("created_at").get<std::string>();
        a.tags.push_back(std::move(t));
    }
    return a;
}

bool contains_ci(const std::string& hay_lower, std::string_view hay) {
    return to_lower(hay).find(hay_lower) != std::string::npos;
}

} // namespace

std::string_view to_string(HitKind k) {
    switch (k) {
    case HitKind::Map: return "map";
    case HitKind::AnnotationBody: return "annotation-body";
    case HitKind::AnnotationTag: return "annotation-tag";
    }
    return "?";
}

std::size_t Annotation::count(Polarity p) const {
    return static_cast<std::size_t>(
        std::count_if(tags.begin(), tags.end(), [p](const TagState& t) { return t.state == p; }));
}

const TagState* Annotation::tag(std::string_view key) const {
    auto it = std::find_if(tags.begin(), tags.end(), [&](const TagState& t) { return t.key == key; });
    return it == tags.end() ? nullptr : &*it;
}

Polarity next_state(Polarity current, bool literal) {
    switch (current) {
    case Polarity::Neutral: return Polarity::Accepted;
    case Polarity::Accepted: return literal ? Polarity::Neutral : Polarity::Rejected;
    case Polarity::Rejected: return Polarity::Neutral;
    }
    return Polarity::Neutral;
}

std::string map_to_json(const MapRecord& m) { return map_json(m).dump(2) + "\n"; }

MapRecord map_from_json(std::string_view text) {
    try {
        return map_from(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Validation, std::string("malformed map record: ") + e.what());
    }
}

std::vector<MapRecord> read_map_records(std::istream& in) {
    std::vector<MapRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        out.push_back(map_from_json(t));
    }
    return out;
}

// -- store -------------------------------------------------------------------

AnnotationStore::AnnotationStore(StoreOptions options)
    : options_(std::move(options)), graph_(options_.clock) {
    while (!options_.base_uri.empty() && options_.base_uri.back() == '/') options_.base_uri.pop_back();
    if (!options_.data_dir.empty()) load();
}

AnnotationStore::~AnnotationStore() = default;

void AnnotationStore::load() {
    const auto& dir = options_.data_dir;
    fs::create_directories(dir / "maps");
    fs::create_directories(dir / "annotations");
    fs::create_directories(dir / "graph");

    for (const auto& entry : fs::directory_iterator(dir / "maps")) {
        if (entry.path().extension() != ".json") continue;
        auto m = map_from_json(read_file(entry.path()));
        graph_.add_resource({map_uri(m.id), ResourceKind::Map});
        maps_.insert_or_assign(m.id, std::move(m));
    }
    for (const auto& entry : fs::directory_iterator(dir / "annotations")) {
        if (entry.path().extension() != ".json") continue;
        Annotation a;
        try {
            a = annotation_from(json::parse(read_file(entry.path())));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Validation, entry.path().string() + ": " + e.what());
        }
        graph_.add_user(a.creator);
        graph_.add_resource({a.uri, ResourceKind::Annotation});
        next_sequence_ = std::max(next_sequence_, a.sequence + 1);
        uri_index_[a.uri] = a.id;
        annotations_.insert_or_assign(a.id, std::move(a));
    }

    const auto log_path = dir / "graph" / "edges.ndjson";
    if (fs::exists(log_path)) {
        std::ifstream in(log_path);
        const auto events = read_event_log(in);
        graph_.replay(events);
    }
    for (auto& [id, a] : annotations_) {
        bool changed = false;
        for (auto& t : a.tags) {
            auto rel = graph_.find(t.relationship_id);
            if (rel && rel->polarity != t.state) {
                t.state = rel->polarity;
                changed = true;
            }
        }
        if (changed) persist_annotation(a);
    }

    edge_log_ = std::make_unique<std::ofstream>(log_path, std::ios::app);
    if (!*edge_log_) throw Error(ErrorCode::Io, "cannot open " + log_path.string());
    graph_.set_event_sink([log = edge_log_.get()](const EdgeEvent& e) {
        *log << to_json_line(e) << '\n';
        log->flush();
        if (!*log) throw Error(ErrorCode::Io, "edge log write failed");
    });
}

void AnnotationStore::persist_map(const MapRecord& m) const {
    if (options_.data_dir.empty()) return;
    write_file_atomic(options_.data_dir / "maps" / (m.id + ".json"), map_to_json(m));
}

void AnnotationStore::persist_annotation(const Annotation& a) const {
    if (options_.data_dir.empty()) return;
    write_file_atomic(options_.data_dir / "annotations" / (a.id + ".json"), annotation_json(a).dump(2) + "\n");
}

std::string AnnotationStore::map_uri(std::string_view id) const {
    return options_.base_uri + "/maps/" + std::string(id);
}

std::string AnnotationStore::tag_uri(std::string_view relationship_id) const {
    return options_.base_uri + "/tags/" + std::string(relationship_id);
}

void AnnotationStore::put_map(MapRecord m) {
    if (m.id.empty() || m.id.find_first_of("/\\ ") != std::string::npos || m.id.starts_with(".")) {
        throw Error(ErrorCode::Validation, "map id must be a non-empty path-safe token");
    }
    if (m.width <= 0 || m.height <= 0) throw Error(ErrorCode::Validation, "map dimensions must be positive");
    std::unique_lock lock(mutex_);
    graph_.add_resource({map_uri(m.id), ResourceKind::Map});
    persist_map(m);
    maps_.insert_or_assign(m.id, std::move(m));
}

MapRecord AnnotationStore::map(std::string_view id) const {
    std::shared_lock lock(mutex_);
    auto it = maps_.find(id);
    if (it == maps_.end()) throw Error(ErrorCode::NotFound, "unknown map '" + std::string(id) + "'");
    return it->second;
}

std::vector<MapRecord> AnnotationStore::maps() const {
    std::shared_lock lock(mutex_);
    std::vector<MapRecord> out;
    for (const auto& [_, m] : maps_) out.push_back(m);
    return out;
}

std::vector<geo::ControlPoint> AnnotationStore::add_control_points(std::string_view map_id,
                                                                   std::span<const geo::ControlPoint> points) {
    std::unique_lock lock(mutex_);
    auto it = maps_.find(map_id);
    if (it == maps_.end()) throw Error(ErrorCode::NotFound, "unknown map '" + std::string(map_id) + "'");
    auto& m = it->second;
    for (const auto& cp : points) {
        if (!std::isfinite(cp.pixel.x) || !std::isfinite(cp.pixel.y) || cp.pixel.x < 0 || cp.pixel.y < 0 ||
            cp.pixel.x > m.width || cp.pixel.y > m.height) {
            throw Error(ErrorCode::Validation, "control point pixel outside the map");
        }
        if (std::abs(cp.geo.lon) > 180.0 || std::abs(cp.geo.lat) >= 90.0) {
            throw Error(ErrorCode::Validation, "control point coordinate out of range");
        }
    }
    auto updated = m;
    updated.control_points.insert(updated.control_points.end(), points.begin(), points.end());
    persist_map(updated);
    m = std::move(updated);
    return m.control_points;
}

geo::GeoTransform AnnotationStore::transform(std::string_view map_id) const {
    return geo::fit_transform(map(map_id).control_points);
}

Annotation AnnotationStore::create_annotation(std::string_view map_id, std::vector<geo::PixelPoint> shape,
                                              std::string body_text, const UserRef& creator, Condition condition,
                                              std::optional<std::string> created_at) {
    if (creator.id.empty()) throw Error(ErrorCode::Validation, "creator id is required");
    std::unique_lock lock(mutex_);
    auto mit = maps_.find(map_id);
    if (mit == maps_.end()) throw Error(ErrorCode::NotFound, "unknown map '" + std::string(map_id) + "'");
    const auto& m = mit->second;
    if (shape.size() < 3) throw Error(ErrorCode::Validation, "shape needs at least 3 vertices");
    for (const auto& p : shape) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0 || p.y < 0 || p.x > m.width || p.y > m.height) {
            throw Error(ErrorCode::Validation, "shape vertex outside the map bounds");
        }
    }
    if (geo::polygon_area(shape) <= 0.0) throw Error(ErrorCode::Validation, "shape encloses no area");

    Annotation a;
    a.id = make_uuid();
    a.uri = options_.base_uri + "/annotations/" + a.id;
    a.sequence = next_sequence_++;
    a.map_id = std::string(map_id);
    a.shape = std::move(shape);
    a.body_text = std::move(body_text);
    a.creator = creator;
    a.condition = condition;
    a.created_at = created_at ? *created_at : (options_.clock ? options_.clock() : now_iso8601());

    graph_.add_user(creator);
    graph_.add_resource({a.uri, ResourceKind::Annotation});
    persist_annotation(a);
    uri_index_[a.uri] = a.id;
    auto [it, _] = annotations_.emplace(a.id, std::move(a));
    return it->second;
}

Annotation AnnotationStore::annotation(std::string_view id) const {
    std::shared_lock lock(mutex_);
    auto it = annotations_.find(id);
    if (it == annotations_.end()) throw Error(ErrorCode::NotFound, "unknown annotation '" + std::string(id) + "'");
    return it->second;
}

Annotation& AnnotationStore::annotation_mut(std::string_view id) {
    auto it = annotations_.find(id);
    if (it == annotations_.end()) throw Error(ErrorCode::NotFound, "unknown annotation '" + std::string(id) + "'");
    return it->second;
}

std::optional<Annotation> AnnotationStore::find_by_uri(std::string_view uri) const {
    std::shared_lock lock(mutex_);
    auto it = uri_index_.find(uri);
    if (it == uri_index_.end()) return std::nullopt;
    return annotations_.at(it->second);
}

std::vector<Annotation> AnnotationStore::annotations() const {
    std::shared_lock lock(mutex_);
    std::vector<Annotation> out;
    out.reserve(annotations_.size());
    for (const auto& [_, a] : annotations_) out.push_back(a);
    std::sort(out.begin(), out.end(), [](const Annotation& x, const Annotation& y) { return x.sequence < y.sequence; });
    return out;
}

std::size_t AnnotationStore::annotation_count() const {
    std::shared_lock lock(mutex_);
    return annotations_.size();
}

TagState AnnotationStore::apply_state(Annotation& a, TagState& tag, Polarity state) {
    if (tag.subject.is_literal() && state == Polarity::Rejected) {
        throw Error(ErrorCode::Validation, "label tags cannot be rejected");
    }
    const auto rel = graph_.record(a.creator, tag.subject, a.uri, state, tag.origin);
    tag.state = state;
    tag.relationship_id = rel.id;
    tag.created_at = rel.created_at;
    persist_annotation(a);
    return tag;
}

TagState AnnotationStore::cycle_tag_state(std::string_view annotation_id, std::string_view tag_key) {
    std::unique_lock lock(mutex_);
    auto& a = annotation_mut(annotation_id);
    auto it = std::find_if(a.tags.begin(), a.tags.end(), [&](const TagState& t) { return t.key == tag_key; });
    if (it == a.tags.end()) throw Error(ErrorCode::NotFound, "no tag '" + std::string(tag_key) + "' on annotation");
    return apply_state(a, *it, next_state(it->state, it->subject.is_literal()));
}

TagState AnnotationStore::set_tag_state(std::string_view annotation_id, std::string_view tag_key, Polarity state) {
    std::unique_lock lock(mutex_);
    auto& a = annotation_mut(annotation_id);
    auto it = std::find_if(a.tags.begin(), a.tags.end(), [&](const TagState& t) { return t.key == tag_key; });
    if (it == a.tags.end()) throw Error(ErrorCode::NotFound, "no tag '" + std::string(tag_key) + "' on annotation");
    return apply_state(a, *it, state);
}

std::vector<TagState> AnnotationStore::add_label_tags(std::string_view annotation_id, std::string_view raw) {
    std::unique_lock lock(mutex_);
    auto& a = annotation_mut(annotation_id);
    if (!allows_manual_entry(a.condition)) {
        throw Error(ErrorCode::Conflict, std::string("condition ") + std::string(to_string(a.condition)) +
                                             " does not allow manual tag entry");
    }
    std::vector<TagState> added;
    for (const auto& part : split(raw, ',')) {
        auto label = trim(part);
        if (label.empty()) continue;
        auto subject = TagSubject::literal(label);
        const auto key = subject.key();
        if (a.tag(key)) continue;
        if (a.tags.size() >= options_.display_cap) break;
        TagState t;
        t.key = key;
        t.subject = std::move(subject);
        t.label = std::move(label);
        t.origin = Origin::Manual;
        a.tags.push_back(std::move(t));
        added.push_back(apply_state(a, a.tags.back(), Polarity::Accepted));
    }
    return added;
}

bool AnnotationStore::origin_allowed(Condition c, suggest::SuggestionOrigin o) {
    using suggest::SuggestionOrigin;
    switch (c) {
    case Condition::LT: return false;
    case Condition::ST: return o == SuggestionOrigin::History;
    case Condition::SMT:
    case Condition::SMT_CTX: return o != SuggestionOrigin::History;
    }
    return false;
}

std::vector<TagState> AnnotationStore::attach_suggestions(std::string_view annotation_id,
                                                          std::span<const suggest::Suggestion> suggestions) {
    std::unique_lock lock(mutex_);
    auto& a = annotation_mut(annotation_id);
    for (const auto& s : suggestions) {
        if (!origin_allowed(a.condition, s.origin)) {
            throw Error(ErrorCode::Conflict, std::string(suggest::to_string(s.origin)) +
                                                 " suggestions are not offered under condition " +
                                                 std::string(to_string(a.condition)));
        }
    }
    std::vector<TagState> added;
    for (const auto& s : suggestions) {
        if (a.tags.size() >= options_.display_cap) break;
        const auto key = s.key();
        if (a.tag(key)) continue;
        if (!s.resource.uri.empty()) graph_.add_concept(s.resource);
        TagState t;
        t.key = key;
        t.subject = s.subject();
        t.label = s.resource.label;
        t.abstract = s.resource.abstract;
        t.origin = suggest::to_tag_origin(s.origin);
        a.tags.push_back(std::move(t));
        added.push_back(apply_state(a, a.tags.back(), Polarity::Neutral));
    }
    return added;
}

std::set<std::string> AnnotationStore::judged_keys(std::string_view annotation_id) const {
    std::shared_lock lock(mutex_);
    auto it = annotations_.find(annotation_id);
    if (it == annotations_.end()) {
        throw Error(ErrorCode::NotFound, "unknown annotation '" + std::string(annotation_id) + "'");
    }
    std::set<std::string> keys;
    for (const auto& t : it->second.tags)
        if (t.state != Polarity::Neutral) keys.insert(t.key);
    return keys;
}

geo::GeoBBox AnnotationStore::annotation_bbox(std::string_view annotation_id) const {
    const auto a = annotation(annotation_id);
    return geo::shape_geo_bbox(a.shape, transform(a.map_id));
}

oa::Document AnnotationStore::open_annotation(std::string_view annotation_id) const {
    const auto a = annotation(annotation_id);
    oa::Document doc;
    doc.uri = a.uri;
    doc.map_uri = map_uri(a.map_id);
    doc.shape = a.shape;
    doc.text = a.body_text;
    doc.creator = a.creator;
    doc.created_at = a.created_at;
    doc.condition = a.condition;
    for (const auto& t : a.tags) {
        if (t.state == Polarity::Neutral) continue;
        oa::TagBody body;
        body.tag_uri = tag_uri(t.relationship_id);
        if (!t.subject.is_literal()) body.concept_uri = t.subject.value();
        body.label = t.label;
        body.polarity = t.state;
        body.creator = a.creator.id;
        body.created_at = t.created_at;
        doc.tags.push_back(std::move(body));
    }
    return doc;
}

std::string AnnotationStore::serialize_open_annotation(std::string_view annotation_id) const {
    return oa::render(open_annotation(annotation_id));
}

std::vector<SearchHit> AnnotationStore::search(std::string_view query) const {
    if (query.empty()) return {};
    const auto needle = to_lower(query);
    std::shared_lock lock(mutex_);
    std::vector<SearchHit> hits;
    for (const auto& [id, m] : maps_) {
        std::optional<std::string> matched;
        if (contains_ci(needle, m.title)) matched = m.title;
        for (const auto& [k, v] : m.metadata) {
            if (matched) break;
            if (contains_ci(needle, v)) matched = v;
        }
        if (matched) hits.push_back({HitKind::Map, id, map_uri(id), *matched});
    }
    for (const auto& [id, a] : annotations_) {
        if (contains_ci(needle, a.body_text)) {
            hits.push_back({HitKind::AnnotationBody, id, a.uri, a.body_text});
            continue;
        }
        for (const auto& t : a.tags) {
            if (t.state == Polarity::Accepted && contains_ci(needle, t.label)) {
                hits.push_back({HitKind::AnnotationTag, id, a.uri, t.label});
                break;
            }
        }
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& x, const SearchHit& y) {
        return std::tie(x.kind, x.id) < std::tie(y.kind, y.id);
    });
    return hits;
}

// -- ingestion -----------------------------------------------------------------

IngestSummary ingest_annotation_records(AnnotationStore& store, std::istream& in) {
    IngestSummary summary;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        json j;
        try {
            j = json::parse(t);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Validation, "annotation line " + std::to_string(lineno) + ": " + e.what());
        }
        const auto condition = parse_condition(j.at("condition").get<std::string>());
        std::vector<geo::PixelPoint> shape;
        for (const auto& p : j.at("shape")) shape.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        const UserRef creator{j.at("creator").get<std::string>(), j.value("creator_name", j.at("creator").get<std::string>())};
        std::optional<std::string> created_at;
        if (j.contains("created_at")) created_at = j["created_at"].get<std::string>();
        const auto a = store.create_annotation(j.at("map_id").get<std::string>(), std::move(shape),
                                               j.value("body", std::string{}), creator, condition, created_at);

        struct Wanted {
            std::string key;
            Polarity polarity;
            std::optional<TagCoding> coding;
        };
        std::vector<Wanted> wanted;
        std::vector<suggest::Suggestion> suggestions;
        std::string labels;
        for (const auto& jt : j.value("tags", json::array())) {
            suggest::Suggestion s;
            s.resource.uri = jt.value("uri", std::string{});
            s.resource.label = jt.at("label").get<std::string>();
            if (jt.contains("abstract")) s.resource.abstract = jt["abstract"].get<std::string>();
            s.resource.source = "experiment";
            s.score = suggest::kHistoryScore;
            s.origin = condition == Condition::ST ? suggest::SuggestionOrigin::History : suggest::SuggestionOrigin::Text;
            Wanted w{s.key(), parse_polarity(jt.value("polarity", std::string("accepted"))), std::nullopt};
            if (jt.contains("coding")) {
                w.coding = TagCoding{parse_tag_type(jt["coding"].at("type").get<std::string>()),
                                     parse_tag_category(jt["coding"].at("category").get<std::string>())};
            }
            wanted.push_back(std::move(w));
            if (condition == Condition::LT) {
                if (!labels.empty()) labels += ", ";
                labels += s.resource.label;
            } else {
                suggestions.push_back(std::move(s));
            }
        }
        if (condition == Condition::LT) {
            store.add_label_tags(a.id, labels);
        } else {
            store.attach_suggestions(a.id, suggestions);
        }
        for (const auto& w : wanted) {
            if (!store.annotation(a.id).tag(w.key)) {
                throw Error(ErrorCode::Validation, "annotation line " + std::to_string(lineno) +
                                                       ": tag '" + w.key + "' could not be attached");
            }
            const auto state = w.polarity == Polarity::Neutral ? store.annotation(a.id).tag(w.key)->state
                                                               : store.set_tag_state(a.id, w.key, w.polarity).state;
            if (w.coding) store.graph().set_coding(store.annotation(a.id).tag(w.key)->relationship_id, *w.coding);
            if (state == Polarity::Accepted) ++summary.accepted;
            if (state == Polarity::Rejected) ++summary.rejected;
        }
        ++summary.annotations;
    }
    return summary;
}

} // namespace semtag
