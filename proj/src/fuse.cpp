#include "signpipe/fuse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "signpipe/docio.hpp"
#include "signpipe/errors.hpp"
#include "signpipe/kernels.hpp"

namespace signpipe {

using nlohmann::json;

std::string_view side_camera_name(SideCameraSide s) {
    return s == SideCameraSide::signer_left ? "signer_left" : "signer_right";
}

void FusionConfig::validate() const {
    if (!(z_scale > 0.0) || !std::isfinite(z_scale))
        throw std::invalid_argument("z_scale must be positive");
    if (!(epsilon_width > 0.0) || !std::isfinite(epsilon_width))
        throw std::invalid_argument("epsilon_width must be positive");
    if (!(min_view_score >= 0.0 && min_view_score <= 1.0))
        throw std::invalid_argument("min_view_score must be in [0, 1]");
}

SkeletonFrame fuse_frame(const ViewFrame2D& front, const ViewFrame2D& side,
                         const FusionConfig& cfg) {
    cfg.validate();
    SkeletonFrame out;
    for (Group g : kAllGroups) {
        const ViewGroup& f = front.group(g);
        const ViewGroup& s = side.group(g);
        if (f.size() != s.size())
            throw LengthMismatch(std::string(group_name(g)) + ": frontal view has " +
                                 std::to_string(f.size()) + " joints, side view " +
                                 std::to_string(s.size()));
        Joints& j = out.group(g);
        j.resize(f.size());
        kernels::fuse(f.x.data(), f.y.data(), f.score.data(), s.x.data(), s.score.data(),
                      f.size(), cfg.signed_z_scale(), cfg.min_view_score, j.x.data(), j.y.data(),
                      j.z.data(), j.score.data());
    }
    return out;
}

std::vector<SkeletonFrame> fuse_sample(std::span<const FramePair> pairs,
                                       const FusionConfig& cfg) {
    std::vector<SkeletonFrame> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        SkeletonFrame f = fuse_frame(pairs[i].front, pairs[i].side, cfg);
        f.frame_index = static_cast<int>(i);
        out.push_back(std::move(f));
    }
    return out;
}

double shoulder_width(const SkeletonFrame& frame) {
    const Joints& body = frame.body;
    if (body.size() <= std::max(kShoulderLeftIndex, kShoulderRightIndex))
        throw MissingShoulder("body group has no shoulder slots");
    if (body.missing(kShoulderLeftIndex) || body.missing(kShoulderRightIndex))
        throw MissingShoulder("shoulder keypoint missing in frame " +
                              std::to_string(frame.frame_index));
    return euclidean_distance(body.position(kShoulderLeftIndex),
                              body.position(kShoulderRightIndex));
}

SkeletonFrame normalize_frame(SkeletonFrame frame, double width, double eps) {
    if (!(width > eps))
        throw DegenerateWidth("shoulder width " + std::to_string(width) +
                              " not above epsilon " + std::to_string(eps));
    for (Group g : kAllGroups) {
        Joints& j = frame.group(g);
        kernels::scale(j.x.data(), j.y.data(), j.z.data(), j.size(), width);
    }
    return frame;
}

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

NormalizedSample normalize_sample(std::vector<SkeletonFrame> frames, const FusionConfig& cfg) {
    cfg.validate();
    std::vector<double> widths(frames.size(), -1.0);
    std::vector<double> valid;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        try {
            const double w = shoulder_width(frames[i]);
            if (w > cfg.epsilon_width) {
                widths[i] = w;
                valid.push_back(w);
            }
        } catch (const MissingShoulder&) {
            // falls back to the median below
        }
    }
    if (valid.empty())
        throw UnnormalizableSample("no frame has a measurable shoulder width");
    const double fallback = median(std::move(valid));

    NormalizedSample out;
    out.frames.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const bool own = widths[i] > 0.0;
        if (!own) out.median_fallback.push_back(i);
        out.frames.push_back(
            normalize_frame(std::move(frames[i]), own ? widths[i] : fallback, cfg.epsilon_width));
    }
    return out;
}

// ---------------------------------------------------------------------------
// 3D dataset documents
// ---------------------------------------------------------------------------

namespace {

void emit_joint_group(std::string& out, const Joints& j, Group g, const RoleTable& roles) {
    out += '"';
    out += group_name(g);
    out += "\": {\"name\": [";
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        docio::append_json_string(out, roles.name(g, i));
    }
    out += "], \"score\": [";
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        docio::append_fixed6(out, j.score[i]);
    }
    for (int axis = 0; axis < 3; ++axis) {
        out += axis == 0 ? "], \"x\": [" : (axis == 1 ? "], \"y\": [" : "], \"z\": [");
        const std::vector<double>& v = axis == 0 ? j.x : (axis == 1 ? j.y : j.z);
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ',';
            docio::append_fixed6(out, v[i]);
        }
    }
    out += "]}";
}

void emit_meta(std::string& out, const SampleMeta& meta) {
    out += "{\n  \"label\": ";
    docio::append_json_string(out, meta.label);
    out += ",\n  \"session\": ";
    docio::append_json_string(out, meta.session);
    out += ",\n  \"scene\": ";
    docio::append_json_string(out, meta.scene);
    out += ",\n  \"consultant\": ";
    docio::append_json_string(out, meta.consultant);
    out += ",\n  \"frame_start\": ";
    docio::append_int(out, meta.frame_start);
    out += ",\n  \"frame_end\": ";
    docio::append_int(out, meta.frame_end);
}

SampleMeta parse_meta(const json& doc) {
    SampleMeta meta;
    for (const char* key : {"label", "session", "scene", "consultant"}) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_string())
            throw MalformedDocument(std::string("sample document: missing string field ") + key);
    }
    meta.label = doc["label"].get<std::string>();
    meta.session = doc["session"].get<std::string>();
    meta.scene = doc["scene"].get<std::string>();
    meta.consultant = doc["consultant"].get<std::string>();
    if (meta.label.empty()) throw MalformedDocument("sample document: empty label");
    for (const char* key : {"frame_start", "frame_end"}) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_number_integer() || it->get<int64_t>() < 0)
            throw MalformedDocument(std::string("sample document: bad field ") + key);
    }
    meta.frame_start = doc["frame_start"].get<int64_t>();
    meta.frame_end = doc["frame_end"].get<int64_t>();
    if (meta.frame_start > meta.frame_end)
        throw MalformedDocument("sample document: frame_start > frame_end");
    return meta;
}

}  // namespace

std::string emit_sample3d_document(const Sample3D& sample, const RoleTable& roles) {
    std::string out;
    out.reserve(256 + sample.frames.size() * 12u * 1024u);
    emit_meta(out, sample.meta);
    out += ",\n  \"frames\": [";
    for (std::size_t i = 0; i < sample.frames.size(); ++i) {
        const SkeletonFrame& f = sample.frames[i];
        out += i ? ",\n    {" : "\n    {";
        out += "\"frame_index\": ";
        docio::append_int(out, f.frame_index);
        for (Group g : kAllGroups) {
            out += ",\n     ";
            emit_joint_group(out, f.group(g), g, roles);
        }
        out += '}';
    }
    out += "\n  ]\n}\n";
    return out;
}

Sample3D parse_sample3d_document(std::string_view document, const RoleTable& roles) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("sample document: ") + e.what());
    }
    if (!doc.is_object()) throw MalformedDocument("sample document: top level must be an object");

    Sample3D sample;
    sample.meta = parse_meta(doc);

    auto frames_it = doc.find("frames");
    if (frames_it == doc.end() || !frames_it->is_array() || frames_it->empty())
        throw MalformedDocument("sample document: missing or empty \"frames\" array");

    sample.frames.reserve(frames_it->size());
    for (const json& jf : *frames_it) {
        if (!jf.is_object()) throw MalformedDocument("sample document: frame must be an object");
        SkeletonFrame frame;
        auto idx = jf.find("frame_index");
        if (idx == jf.end() || !idx->is_number_integer() || idx->get<int64_t>() < 0)
            throw MalformedDocument("sample document: bad frame_index");
        frame.frame_index = static_cast<int>(idx->get<int64_t>());
        if (!sample.frames.empty() && frame.frame_index <= sample.frames.back().frame_index)
            throw MalformedDocument("sample document: frame_index not strictly increasing");

        for (Group g : kAllGroups) {
            auto git = jf.find(std::string(group_name(g)));
            if (git == jf.end() || !git->is_object())
                throw MalformedDocument(std::string("sample document: missing group ") +
                                        std::string(group_name(g)));
            const std::size_t n = roles.size(g);
            const json* arrays[5];
            const char* keys[5] = {"name", "score", "x", "y", "z"};
            for (int a = 0; a < 5; ++a) {
                auto it = git->find(keys[a]);
                if (it == git->end() || !it->is_array() || it->size() != n)
                    throw MalformedDocument(std::string("sample document: ") +
                                            std::string(group_name(g)) + "." + keys[a] +
                                            " must be an array of " + std::to_string(n));
                arrays[a] = &*it;
            }
            Joints& joints = frame.group(g);
            joints.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const json& jn = (*arrays[0])[i];
                if (!jn.is_string() || jn.get<std::string>() != roles.name(g, i))
                    throw MalformedDocument(std::string("sample document: ") +
                                            std::string(group_name(g)) + ".name[" +
                                            std::to_string(i) + "] does not match the role table");
                double vals[4];  // score, x, y, z
                for (int a = 1; a < 5; ++a) {
                    const json& jv = (*arrays[a])[i];
                    if (!jv.is_number())
                        throw MalformedDocument("sample document: non-numeric keypoint value");
                    vals[a - 1] = jv.get<double>();
                    if (!std::isfinite(vals[a - 1]))
                        throw MalformedDocument("sample document: non-finite keypoint value");
                }
                const double score = vals[0];
                if (score < 0.0 || score > 1.0)
                    throw MalformedDocument("sample document: score outside [0, 1]");
                if (score == 0.0 && (vals[1] != 0.0 || vals[2] != 0.0 || vals[3] != 0.0))
                    throw MalformedDocument(
                        "sample document: missing keypoint with nonzero coordinates");
                joints.set(i, {vals[1], vals[2], vals[3]}, score);
            }
        }
        sample.frames.push_back(std::move(frame));
    }
    return sample;
}

}  // namespace signpipe
