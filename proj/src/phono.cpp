#include "signpipe/phono.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "signpipe/docio.hpp"
#include "signpipe/errors.hpp"

namespace signpipe {

using nlohmann::json;

void PhonoConfig::validate(const RoleTable& roles) const {
    if (!(threshold_k > 0.0) || !std::isfinite(threshold_k))
        throw std::invalid_argument("threshold_k must be positive");
    const std::size_t hand_n = roles.size(Group::left_hand);
    for (std::size_t idx : {wrist_index, little_base_index, index_base_index, middle_base_index})
        if (idx >= hand_n) throw std::invalid_argument("hand landmark index out of range");
    const std::size_t face_n = roles.size(Group::face);
    for (std::size_t idx : {lip_upper_index, lip_lower_index, mouth_right_index, mouth_left_index})
        if (idx >= face_n) throw std::invalid_argument("face landmark index out of range");
}

Vector3 palm_normal(const Vector3& W, const Vector3& L, const Vector3& I, Hand side) {
    const Vector3 wl = L - W;
    const Vector3 wi = I - W;
    const Vector3 n = side == Hand::left ? cross_product(wi, wl) : cross_product(wl, wi);
    if (norm(n) < 1e-9)
        throw DegeneratePlane("palm landmarks are collinear or coincident");
    return n;
}

DirectionSet classify_direction(const Vector3& v, double k) {
    DirectionSet s;
    if (v.x < -k) s.set(Direction::right);
    if (v.x > k) s.set(Direction::left);
    if (v.y < -k) s.set(Direction::up);
    if (v.y > k) s.set(Direction::down);
    if (v.z < -k) s.set(Direction::body);
    if (v.z > k) s.set(Direction::front);
    return s;
}

Vector3 motion_vector(const Vector3& M_t, const Vector3& M_prev) {
    return M_t - M_prev;
}

std::vector<std::string> assign_handshapes(std::size_t n_frames, const std::string& initial,
                                           const std::string& final_code) {
    const std::size_t first_half = (n_frames + 1) / 2;  // ceil: initial gets the extra frame
    std::vector<std::string> out;
    out.reserve(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i)
        out.push_back(i < first_half ? initial : final_code);
    return out;
}

double mouth_opening(const Vector3& LS, const Vector3& LI, const Vector3& CH_r,
                     const Vector3& CH_l) {
    const double width = euclidean_distance(CH_r, CH_l);
    if (width < 1e-9) throw DegenerateMouth("mouth width is zero");
    return euclidean_distance(LS, LI) / width;
}

double attribute_score(std::span<const double> involved) {
    if (involved.empty()) return 0.0;
    double sum = 0.0;
    for (double s : involved) {
        if (s <= 0.0) return 0.0;  // a missing input makes the output untrusted
        sum += s;
    }
    return sum / static_cast<double>(involved.size());
}

// ---------------------------------------------------------------------------
// extract_phono
// ---------------------------------------------------------------------------

namespace {

AttributeValue orientation_attribute(const Joints& hand, Hand side, const PhonoConfig& cfg) {
    const double scores[] = {hand.score[cfg.wrist_index], hand.score[cfg.little_base_index],
                             hand.score[cfg.index_base_index]};
    for (double s : scores)
        if (s <= 0.0) return AttributeValue::text_value("none", 0.0);
    try {
        const Vector3 n = palm_normal(hand.position(cfg.wrist_index),
                                      hand.position(cfg.little_base_index),
                                      hand.position(cfg.index_base_index), side);
        return AttributeValue::text_value(classify_direction(n, cfg.threshold_k).canonical_string(),
                                          attribute_score(scores));
    } catch (const DegeneratePlane&) {
        return AttributeValue::text_value("none", 0.0);
    }
}

AttributeValue movement_attribute(const Joints& hand, const Joints* prev_hand,
                                  const PhonoConfig& cfg) {
    if (prev_hand == nullptr) return AttributeValue::text_value("none", 0.0);  // first frame
    const double scores[] = {hand.score[cfg.middle_base_index],
                             prev_hand->score[cfg.middle_base_index]};
    if (scores[0] <= 0.0 || scores[1] <= 0.0) return AttributeValue::text_value("none", 0.0);
    const Vector3 m = motion_vector(hand.position(cfg.middle_base_index),
                                    prev_hand->position(cfg.middle_base_index));
    return AttributeValue::text_value(classify_direction(m, cfg.threshold_k).canonical_string(),
                                      attribute_score(scores));
}

AttributeValue mouth_attribute(const Joints& face, const PhonoConfig& cfg) {
    const double scores[] = {face.score[cfg.lip_upper_index], face.score[cfg.lip_lower_index],
                             face.score[cfg.mouth_right_index], face.score[cfg.mouth_left_index]};
    for (double s : scores)
        if (s <= 0.0) return AttributeValue::number_value(0.0, 0.0);
    try {
        const double ratio = mouth_opening(
            face.position(cfg.lip_upper_index), face.position(cfg.lip_lower_index),
            face.position(cfg.mouth_right_index), face.position(cfg.mouth_left_index));
        return AttributeValue::number_value(ratio, attribute_score(scores));
    } catch (const DegenerateMouth&) {
        return AttributeValue::number_value(0.0, 0.0);
    }
}

}  // namespace

PhonoSample extract_phono(const Sample3D& sample, const AnnotationRecord& rec,
                          const PhonoConfig& cfg) {
    if (sample.frames.empty()) throw InvalidAnnotation("sample has no frames");
    if (!(rec.meta == sample.meta))
        throw InvalidAnnotation("annotation record does not match sample metadata for label \"" +
                                sample.meta.label + "\"");

    const Hand dh = rec.dominant_hand;
    const Hand ndh = other_hand(dh);
    const std::vector<std::string> shapes =
        assign_handshapes(sample.frames.size(), rec.initial_handshape, rec.final_handshape);

    PhonoSample out;
    out.meta = sample.meta;
    out.frames.reserve(sample.frames.size());
    for (std::size_t i = 0; i < sample.frames.size(); ++i) {
        const SkeletonFrame& sk = sample.frames[i];
        const SkeletonFrame* prev = i > 0 ? &sample.frames[i - 1] : nullptr;

        PhonoFrame f;
        f.frame_index = sk.frame_index;
        // handshapes come from the annotation, not from geometry: full score
        f.dh_handshape = AttributeValue::text_value(shapes[i], 1.0);
        f.ndh_handshape = AttributeValue::text_value(shapes[i], 1.0);
        f.dh_orientation = orientation_attribute(sk.group(hand_group(dh)), dh, cfg);
        f.ndh_orientation = orientation_attribute(sk.group(hand_group(ndh)), ndh, cfg);
        f.dh_movement =
            movement_attribute(sk.group(hand_group(dh)), prev ? &prev->group(hand_group(dh)) : nullptr, cfg);
        f.ndh_movement = movement_attribute(sk.group(hand_group(ndh)),
                                            prev ? &prev->group(hand_group(ndh)) : nullptr, cfg);
        f.mouth_opening = mouth_attribute(sk.face, cfg);
        out.frames.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

namespace {

void emit_attribute(std::string& out, std::string_view name, const AttributeValue& v) {
    out += '"';
    out += name;
    out += "\": {\"value\": ";
    if (v.is_numeric())
        docio::append_fixed6(out, v.number());
    else
        docio::append_json_string(out, v.text());
    out += ", \"score\": ";
    docio::append_fixed6(out, v.score);
    out += '}';
}

}  // namespace

std::string emit_phono_document(const PhonoSample& sample) {
    std::string out;
    out.reserve(256 + sample.frames.size() * 640);
    out += "{\n  \"label\": ";
    docio::append_json_string(out, sample.meta.label);
    out += ",\n  \"session\": ";
    docio::append_json_string(out, sample.meta.session);
    out += ",\n  \"scene\": ";
    docio::append_json_string(out, sample.meta.scene);
    out += ",\n  \"consultant\": ";
    docio::append_json_string(out, sample.meta.consultant);
    out += ",\n  \"frame_start\": ";
    docio::append_int(out, sample.meta.frame_start);
    out += ",\n  \"frame_end\": ";
    docio::append_int(out, sample.meta.frame_end);
    out += ",\n  \"frames\": [";
    for (std::size_t i = 0; i < sample.frames.size(); ++i) {
        const PhonoFrame& f = sample.frames[i];
        out += i ? ",\n    {" : "\n    {";
        out += "\"frame_index\": ";
        docio::append_int(out, f.frame_index);
        for (std::size_t a = 0; a < kAttributeNames.size(); ++a) {
            out += ",\n     ";
            emit_attribute(out, kAttributeNames[a], attribute_by_index(f, a));
        }
        out += '}';
    }
    out += "\n  ]\n}\n";
    return out;
}

namespace {

AttributeValue parse_attribute(const json& jf, std::string_view name, bool numeric,
                               bool directional) {
    auto it = jf.find(std::string(name));
    if (it == jf.end() || !it->is_object())
        throw MalformedDocument("phono document: missing attribute " + std::string(name));
    auto val = it->find("value");
    auto sc = it->find("score");
    if (val == it->end() || sc == it->end() || !sc->is_number())
        throw MalformedDocument("phono document: attribute " + std::string(name) +
                                " needs value and score");
    const double score = sc->get<double>();
    if (!std::isfinite(score) || score < 0.0 || score > 1.0)
        throw MalformedDocument("phono document: score outside [0, 1] in " + std::string(name));

    if (numeric) {
        if (!val->is_number())
            throw MalformedDocument("phono document: " + std::string(name) + " value must be a number");
        const double v = val->get<double>();
        if (!std::isfinite(v) || v < 0.0)
            throw MalformedDocument("phono document: " + std::string(name) +
                                    " value must be non-negative");
        return AttributeValue::number_value(v, score);
    }
    if (!val->is_string())
        throw MalformedDocument("phono document: " + std::string(name) + " value must be a string");
    std::string text = val->get<std::string>();
    if (text.empty())
        throw MalformedDocument("phono document: empty value in " + std::string(name));
    if (directional && !DirectionSet::parse(text).has_value())
        throw MalformedDocument("phono document: \"" + text + "\" is not a canonical direction in " +
                                std::string(name));
    return AttributeValue::text_value(std::move(text), score);
}

}  // namespace

PhonoSample parse_phono_document(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("phono document: ") + e.what());
    }
    if (!doc.is_object()) throw MalformedDocument("phono document: top level must be an object");

    PhonoSample sample;
    for (const char* key : {"label", "session", "scene", "consultant"}) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_string())
            throw MalformedDocument(std::string("phono document: missing string field ") + key);
    }
    sample.meta.label = doc["label"].get<std::string>();
    sample.meta.session = doc["session"].get<std::string>();
    sample.meta.scene = doc["scene"].get<std::string>();
    sample.meta.consultant = doc["consultant"].get<std::string>();
    if (sample.meta.label.empty()) throw MalformedDocument("phono document: empty label");
    for (const char* key : {"frame_start", "frame_end"}) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_number_integer() || it->get<int64_t>() < 0)
            throw MalformedDocument(std::string("phono document: bad field ") + key);
    }
    sample.meta.frame_start = doc["frame_start"].get<int64_t>();
    sample.meta.frame_end = doc["frame_end"].get<int64_t>();
    if (sample.meta.frame_start > sample.meta.frame_end)
        throw MalformedDocument("phono document: frame_start > frame_end");

    auto frames_it = doc.find("frames");
    if (frames_it == doc.end() || !frames_it->is_array() || frames_it->empty())
        throw MalformedDocument("phono document: missing or empty \"frames\" array");

    sample.frames.reserve(frames_it->size());
    for (const json& jf : *frames_it) {
        if (!jf.is_object()) throw MalformedDocument("phono document: frame must be an object");
        PhonoFrame f;
        auto idx = jf.find("frame_index");
        if (idx == jf.end() || !idx->is_number_integer() || idx->get<int64_t>() < 0)
            throw MalformedDocument("phono document: bad frame_index");
        f.frame_index = static_cast<int>(idx->get<int64_t>());
        if (!sample.frames.empty() && f.frame_index <= sample.frames.back().frame_index)
            throw MalformedDocument("phono document: frame_index not strictly increasing");

        f.dh_handshape = parse_attribute(jf, "dh_handshape", false, false);
        f.ndh_handshape = parse_attribute(jf, "ndh_handshape", false, false);
        f.dh_orientation = parse_attribute(jf, "dh_orientation", false, true);
        f.ndh_orientation = parse_attribute(jf, "ndh_orientation", false, true);
        f.dh_movement = parse_attribute(jf, "dh_movement", false, true);
        f.ndh_movement = parse_attribute(jf, "ndh_movement", false, true);
        f.mouth_opening = parse_attribute(jf, "mouth_opening", true, false);
        sample.frames.push_back(std::move(f));
    }
    return sample;
}

}  // namespace signpipe
