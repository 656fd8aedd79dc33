#include "signpipe/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "signpipe/docio.hpp"
#include "signpipe/errors.hpp"

namespace signpipe {

using nlohmann::json;

std::string_view view_name(View v) {
    return v == View::frontal ? "frontal" : "side";
}

ViewGroup& ViewFrame2D::group(Group g) {
    switch (g) {
        case Group::body: return body;
        case Group::face: return face;
        case Group::left_hand: return left_hand;
        case Group::right_hand: return right_hand;
    }
    return body;
}

const ViewGroup& ViewFrame2D::group(Group g) const {
    return const_cast<ViewFrame2D*>(this)->group(g);
}

// ---------------------------------------------------------------------------
// Pose documents
// ---------------------------------------------------------------------------

namespace {

const char* keypoint_key(Group g) {
    switch (g) {
        case Group::body: return "pose_keypoints_2d";
        case Group::face: return "face_keypoints_2d";
        case Group::left_hand: return "hand_left_keypoints_2d";
        case Group::right_hand: return "hand_right_keypoints_2d";
    }
    return "";
}

void fill_group(ViewGroup& out, const json& frame_obj, Group g, const RoleTable& roles) {
    const std::size_t n = roles.size(g);
    out.resize(n);

    auto it = frame_obj.find(keypoint_key(g));
    if (it == frame_obj.end() || it->is_null()) return;  // absent group: zero-filled

    if (!it->is_array())
        throw MalformedDocument(std::string(keypoint_key(g)) + " is not an array");
    if (it->size() != 3 * n)
        throw WrongCardinality(std::string(keypoint_key(g)) + ": expected " +
                               std::to_string(3 * n) + " values, got " +
                               std::to_string(it->size()));

    for (std::size_t i = 0; i < n; ++i) {
        const json& jx = (*it)[3 * i];
        const json& jy = (*it)[3 * i + 1];
        const json& js = (*it)[3 * i + 2];
        if (!jx.is_number() || !jy.is_number() || !js.is_number())
            throw MalformedDocument(std::string(keypoint_key(g)) + ": non-numeric entry at joint " +
                                    std::to_string(i));
        const double x = jx.get<double>();
        const double y = jy.get<double>();
        const double s = js.get<double>();
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(s))
            throw MalformedDocument(std::string(keypoint_key(g)) + ": non-finite value at joint " +
                                    std::to_string(i));
        if (s > 1.0)
            throw MalformedDocument(std::string(keypoint_key(g)) + ": score > 1 at joint " +
                                    std::to_string(i));
        if (s <= 0.0) continue;  // missing joint stays zeroed
        out.x[i] = x;
        out.y[i] = y;
        out.score[i] = s;
    }
}

ViewFrame2D parse_frame_object(const json& obj, View view, int64_t fallback_index,
                               const RoleTable& roles) {
    ViewFrame2D frame;
    frame.view = view;
    frame.frame_index = fallback_index;
    if (auto it = obj.find("frame_index"); it != obj.end()) {
        if (!it->is_number_integer() || it->get<int64_t>() < 0)
            throw MalformedDocument("frame_index must be a non-negative integer");
        frame.frame_index = it->get<int64_t>();
    }
    for (Group g : kAllGroups) fill_group(frame.group(g), obj, g, roles);
    return frame;
}

bool has_keypoint_keys(const json& obj) {
    for (Group g : kAllGroups)
        if (obj.contains(keypoint_key(g))) return true;
    return false;
}

}  // namespace

std::vector<ViewFrame2D> parse_view_frames(std::string_view document, View view,
                                           const RoleTable& roles) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("pose document: ") + e.what());
    }
    if (!doc.is_object()) throw MalformedDocument("pose document: top level must be an object");

    std::vector<ViewFrame2D> frames;

    if (auto it = doc.find("frames"); it != doc.end()) {
        if (!it->is_array()) throw MalformedDocument("\"frames\" must be an array");
        frames.reserve(it->size());
        for (const json& f : *it) {
            if (!f.is_object()) throw MalformedDocument("frame entries must be objects");
            frames.push_back(
                parse_frame_object(f, view, static_cast<int64_t>(frames.size()), roles));
        }
    } else if (auto people = doc.find("people"); people != doc.end()) {
        if (!people->is_array()) throw MalformedDocument("\"people\" must be an array");
        if (people->empty()) {
            // estimator found nobody: a frame of all-missing joints
            frames.push_back(parse_frame_object(json::object(), view, 0, roles));
        } else {
            frames.push_back(parse_frame_object((*people)[0], view, 0, roles));
        }
    } else if (has_keypoint_keys(doc)) {
        frames.push_back(parse_frame_object(doc, view, 0, roles));
    } else {
        throw MalformedDocument("pose document: no \"frames\", \"people\" or keypoint arrays");
    }

    for (std::size_t i = 1; i < frames.size(); ++i)
        if (frames[i].frame_index <= frames[i - 1].frame_index)
            throw MalformedDocument("frame_index not strictly increasing at sequence position " +
                                    std::to_string(i));
    return frames;
}

namespace {

// Trailing digit run in a filename stem ("clip_000042_keypoints" -> 42 when
// the last run is the index; we take the LAST run of digits).
std::optional<int64_t> index_from_stem(const std::string& stem) {
    std::size_t end = stem.size();
    while (end > 0 && !std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
    if (end == 0) return std::nullopt;
    std::size_t begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(stem.data() + begin, stem.data() + end, value);
    if (ec != std::errc{}) return std::nullopt;
    return value;
}

}  // namespace

std::vector<ViewFrame2D> load_view(const std::filesystem::path& path, View view,
                                   const RoleTable& roles) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw MalformedDocument("no such view input: " + path.string());

    if (fs::is_regular_file(path)) return parse_view_frames(docio::read_file(path), view, roles);

    // Directory of per-frame documents.
    struct Entry {
        fs::path file;
        std::optional<int64_t> index;
    };
    std::vector<Entry> entries;
    for (const auto& de : fs::directory_iterator(path)) {
        if (!de.is_regular_file() || de.path().extension() != ".json") continue;
        entries.push_back({de.path(), index_from_stem(de.path().stem().string())});
    }
    if (entries.empty()) throw MalformedDocument("no *.json documents in " + path.string());

    const bool all_numbered =
        std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.index.has_value(); });
    if (all_numbered)
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return *a.index < *b.index; });
    else
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.file < b.file; });

    std::vector<ViewFrame2D> frames;
    frames.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto parsed = parse_view_frames(docio::read_file(entries[i].file), view, roles);
        if (parsed.size() != 1)
            throw MalformedDocument("per-frame document holds " + std::to_string(parsed.size()) +
                                    " frames: " + entries[i].file.string());
        ViewFrame2D frame = std::move(parsed.front());
        frame.frame_index = all_numbered ? *entries[i].index : static_cast<int64_t>(i);
        frames.push_back(std::move(frame));
    }
    for (std::size_t i = 1; i < frames.size(); ++i)
        if (frames[i].frame_index <= frames[i - 1].frame_index)
            throw MalformedDocument("duplicate or unordered frame numbers in " + path.string());
    return frames;
}

std::string emit_view_document(std::span<const ViewFrame2D> frames) {
    std::string out;
    out.reserve(frames.size() * 4096 + 64);
    out += "{\n  \"view\": ";
    docio::append_json_string(out, frames.empty() ? "frontal" : std::string(view_name(frames[0].view)));
    out += ",\n  \"frames\": [";
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const ViewFrame2D& f = frames[i];
        out += i ? ",\n    {" : "\n    {";
        out += "\"frame_index\": ";
        docio::append_int(out, f.frame_index);
        for (Group g : kAllGroups) {
            const ViewGroup& grp = f.group(g);
            out += ", \"";
            out += keypoint_key(g);
            out += "\": [";
            for (std::size_t k = 0; k < grp.size(); ++k) {
                if (k) out += ',';
                docio::append_shortest(out, grp.x[k]);
                out += ',';
                docio::append_shortest(out, grp.y[k]);
                out += ',';
                docio::append_shortest(out, grp.score[k]);
            }
            out += ']';
        }
        out += '}';
    }
    out += "\n  ]\n}\n";
    return out;
}

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

namespace {

const char* kDefaultHandshapes[] = {
    "1",           "3",           "4",          "5",          "8",          "10",
    "25",          "A",           "B",          "B-L",        "B-xd",       "C",
    "D",           "E",           "F",          "G",          "I",          "K",
    "L",           "M",           "N",          "O",          "R",          "S",
    "T",           "U",           "V",          "W",          "X",          "Y",
    "U/H",         "F/9",         "ILY",        "horns",      "loose-E",    "bent-1",
    "bent-3",      "bent-5",      "bent-B",     "bent-B-L",   "bent-I",     "bent-L",
    "bent-U",      "bent-V",      "bent-X",     "crvd-1",     "crvd-3",     "crvd-4",
    "crvd-5",      "crvd-B",      "crvd-L",     "crvd-U",     "crvd-V",     "crvd-flat-B",
    "crvd-sprd-B", "open-8",      "open-A",     "open-B",     "open-B-L",   "open-E",
    "open-F",      "open-M",      "open-N",     "open-X",     "flat-B",     "flat-C",
    "flat-C-2",    "flat-G",      "flat-M",     "flat-N",     "flat-O",     "flat-O-2",
    "fanned-flat-O", "full-C",    "full-M",     "baby-O",     "cocked-8",   "cocked-F",
    "cocked-S",    "alt-M",       "alt-N",      "5-C",        "5-C-L",      "5-C-tt",
    "1-p",         "3-p",         "V-p",        "loose-C"};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_row(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t sep = line.find(delim, pos);
        if (sep == std::string_view::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, sep - pos)));
        pos = sep + 1;
    }
    return out;
}

}  // namespace

const HandshapeCatalog& HandshapeCatalog::builtin() {
    static const HandshapeCatalog catalog = [] {
        HandshapeCatalog c;
        for (const char* code : kDefaultHandshapes) c.codes_.emplace_back(code);
        return c;
    }();
    return catalog;
}

HandshapeCatalog HandshapeCatalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedCatalog("handshape catalog: cannot open " + path);
    HandshapeCatalog c;
    std::set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string code = trim(line);
        if (code.empty()) continue;
        if (!seen.insert(code).second)
            throw MalformedCatalog("handshape catalog: duplicate code " + code);
        c.codes_.push_back(std::move(code));
    }
    if (c.codes_.empty()) throw MalformedCatalog("handshape catalog: empty file " + path);
    return c;
}

bool HandshapeCatalog::contains(std::string_view code) const {
    return std::find(codes_.begin(), codes_.end(), code) != codes_.end();
}

AnnotationLoad load_annotations(const std::filesystem::path& path,
                                const HandshapeCatalog& catalog) {
    std::ifstream probe(path);
    if (!probe) throw MalformedCatalog("annotation catalog: cannot open " + path.string());
    return parse_annotations(docio::read_file(path), catalog);
}

AnnotationLoad parse_annotations(std::string_view text, const HandshapeCatalog& catalog) {
    AnnotationLoad out;

    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) return out;  // empty file: empty list

    const char delim = lines[0].find('\t') != std::string_view::npos ? '\t' : ',';
    std::vector<std::string> header = split_row(lines[0], delim);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

    const char* required[] = {"label",     "session",           "scene",
                              "consultant", "frame_start",      "frame_end",
                              "initial_handshape", "final_handshape"};
    for (const char* name : required)
        if (!col.count(name))
            throw MalformedCatalog(std::string("annotation catalog: missing column ") + name);
    const bool has_dominant = col.count("dominant_hand") > 0;

    auto cell = [&](const std::vector<std::string>& row, const char* name) -> const std::string& {
        return row[col.at(name)];
    };

    for (std::size_t lineno = 1; lineno < lines.size(); ++lineno) {
        if (trim(lines[lineno]).empty()) continue;
        std::vector<std::string> row = split_row(lines[lineno], delim);
        if (row.size() < header.size())
            throw MalformedCatalog("annotation catalog: row " + std::to_string(lineno + 1) +
                                   " has " + std::to_string(row.size()) + " fields, expected " +
                                   std::to_string(header.size()));

        auto parse_frame = [&](const char* name) -> int64_t {
            const std::string& s = cell(row, name);
            int64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
                throw MalformedCatalog("annotation catalog: bad " + std::string(name) + " \"" + s +
                                       "\" at row " + std::to_string(lineno + 1));
            return v;
        };

        AnnotationRecord rec;
        rec.meta.label = cell(row, "label");
        rec.meta.session = cell(row, "session");
        rec.meta.scene = cell(row, "scene");
        rec.meta.consultant = cell(row, "consultant");
        rec.meta.frame_start = parse_frame("frame_start");
        rec.meta.frame_end = parse_frame("frame_end");
        rec.initial_handshape = cell(row, "initial_handshape");
        rec.final_handshape = cell(row, "final_handshape");

        auto skip = [&](const std::string& why) {
            ++out.skipped;
            out.warnings.push_back("row " + std::to_string(lineno + 1) + " (" + rec.meta.label +
                                   "): " + why);
        };

        if (rec.meta.label.empty()) {
            skip("empty label");
            continue;
        }
        if (rec.meta.frame_start > rec.meta.frame_end) {
            skip("frame_start > frame_end");
            continue;
        }
        if (!catalog.contains(rec.initial_handshape)) {
            skip("unknown initial handshape \"" + rec.initial_handshape + "\"");
            continue;
        }
        if (!catalog.contains(rec.final_handshape)) {
            skip("unknown final handshape \"" + rec.final_handshape + "\"");
            continue;
        }

        std::string dom = has_dominant ? cell(row, "dominant_hand") : std::string();
        if (dom == "left") {
            rec.dominant_hand = Hand::left;
            rec.dominant_specified = true;
        } else if (dom == "right") {
            rec.dominant_hand = Hand::right;
            rec.dominant_specified = true;
        } else if (dom.empty()) {
            rec.dominant_hand = Hand::right;
            rec.dominant_specified = false;
            out.warnings.push_back("row " + std::to_string(lineno + 1) + " (" + rec.meta.label +
                                   "): dominant_hand unspecified, defaulting to right");
        } else {
            skip("bad dominant_hand \"" + dom + "\"");
            continue;
        }

        out.records.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Segmentation
// ---------------------------------------------------------------------------

namespace {

int downsample_stride(int source_fps, int target_fps) {
    if (target_fps <= 0 || source_fps <= 0)
        throw NonIntegerStride("frame rates must be positive");
    if (source_fps < target_fps)
        throw NonIntegerStride("target rate " + std::to_string(target_fps) +
                               " exceeds source rate " + std::to_string(source_fps));
    if (source_fps % target_fps != 0)
        throw NonIntegerStride(std::to_string(source_fps) + " -> " + std::to_string(target_fps) +
                               " FPS is not an integer stride");
    return source_fps / target_fps;
}

// Frame with the exact source index, or null. Frames are sorted by index.
const ViewFrame2D* find_frame(std::span<const ViewFrame2D> frames, int64_t index) {
    auto it = std::lower_bound(frames.begin(), frames.end(), index,
                               [](const ViewFrame2D& f, int64_t v) { return f.frame_index < v; });
    if (it == frames.end() || it->frame_index != index) return nullptr;
    return &*it;
}

}  // namespace

std::vector<ViewFrame2D> downsample_frames(std::span<const ViewFrame2D> frames, int source_fps,
                                           int target_fps) {
    const int stride = downsample_stride(source_fps, target_fps);
    std::vector<ViewFrame2D> out;
    out.reserve(frames.size() / stride + 1);
    for (std::size_t i = 0; i < frames.size(); i += stride) out.push_back(frames[i]);
    return out;
}

std::vector<FramePair> segment_and_pair(std::span<const ViewFrame2D> frontal,
                                        std::span<const ViewFrame2D> side,
                                        const AnnotationRecord& rec, int source_fps,
                                        int target_fps) {
    const int stride = downsample_stride(source_fps, target_fps);
    const int64_t start = rec.meta.frame_start;
    const int64_t end = rec.meta.frame_end;

    for (auto [view, frames] : {std::pair{View::frontal, frontal}, std::pair{View::side, side}}) {
        if (frames.empty() || frames.front().frame_index > start || frames.back().frame_index < end)
            throw ViewOutOfRange(std::string(view_name(view)) + " view does not cover frames " +
                                 std::to_string(start) + ".." + std::to_string(end));
    }

    const int64_t n_pairs = (end - start) / stride + 1;
    std::vector<FramePair> out;
    out.reserve(static_cast<std::size_t>(n_pairs));
    for (int64_t j = 0; j < n_pairs; ++j) {
        const int64_t index = start + j * stride;
        const ViewFrame2D* f = find_frame(frontal, index);
        const ViewFrame2D* s = find_frame(side, index);
        if (!f || !s)
            throw LengthMismatch("views disagree inside segment " + std::to_string(start) + ".." +
                                 std::to_string(end) + ": source frame " + std::to_string(index) +
                                 " missing from " +
                                 (!f ? std::string(view_name(View::frontal))
                                     : std::string(view_name(View::side))) +
                                 " view");
        out.push_back({*f, *s});
    }
    return out;
}

}  // namespace signpipe
