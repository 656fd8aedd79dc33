#include "signpipe/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

#include "signpipe/docio.hpp"
#include "signpipe/errors.hpp"
#include "signpipe/fuse.hpp"

namespace signpipe {

namespace {

// ---------------------------------------------------------------------------
// Script validation
// ---------------------------------------------------------------------------

// A component may not sit inside the (k - margin, k + margin) band in
// absolute value: there classification could flip on fp noise.
bool band_clear(double c, double k, double margin) {
    const double a = std::abs(c);
    return a <= k - margin || a >= k + margin;
}

void check_vector(const Vector3& v, double k, double margin, const char* what) {
    if (!is_finite(v)) throw InfeasibleScript(std::string(what) + " is not finite");
    for (double c : {v.x, v.y, v.z})
        if (!band_clear(c, k, margin))
            throw InfeasibleScript(std::string(what) +
                                   " has a component inside the threshold margin band");
}

void check_hand(const HandScript& hand, const MotionScript& s, const char* name) {
    if (hand.palm_normals.size() != s.n_frames || hand.displacements.size() != s.n_frames)
        throw InfeasibleScript(std::string(name) + " script arrays must have n_frames entries");
    for (const Vector3& n : hand.palm_normals) {
        if (!is_finite(n)) throw InfeasibleScript("palm normal is not finite");
        const double len = norm(n);
        if (std::abs(len - 1.0) > 1e-6)
            throw InfeasibleScript("palm normal must be a unit vector");
        check_vector(n, s.threshold_k, s.margin, "palm normal");
    }
    for (std::size_t t = 1; t < s.n_frames; ++t)
        check_vector(hand.displacements[t], s.threshold_k, s.margin, "displacement");
}

void validate_script(const MotionScript& s) {
    if (s.n_frames == 0) throw InfeasibleScript("script needs at least one frame");
    if (!std::isfinite(s.shoulder_width_px) || s.shoulder_width_px <= 0.0)
        throw InfeasibleScript("shoulder_width_px must be positive");
    if (s.source_stride < 1) throw InfeasibleScript("source_stride must be >= 1");
    if (s.meta.frame_start < 0) throw InfeasibleScript("frame_start must be >= 0");
    if (!std::isfinite(s.jitter_amplitude) || s.jitter_amplitude < 0.0)
        throw InfeasibleScript("jitter_amplitude must be >= 0");
    if (!std::isfinite(s.threshold_k) || s.threshold_k <= 0.0)
        throw InfeasibleScript("threshold_k must be positive");
    if (!std::isfinite(s.margin) || s.margin < 0.0 || s.margin >= s.threshold_k)
        throw InfeasibleScript("margin must be in [0, threshold_k)");
    if (s.initial_handshape.empty() || s.final_handshape.empty())
        throw InfeasibleScript("handshape codes must be non-empty");
    if (s.mouth_ratios.size() != s.n_frames)
        throw InfeasibleScript("mouth_ratios must have n_frames entries");
    for (double r : s.mouth_ratios)
        if (!std::isfinite(r) || r < 0.0)
            throw InfeasibleScript("mouth ratios must be finite and >= 0");
    check_hand(s.dominant, s, "dominant hand");
    check_hand(s.non_dominant, s, "non-dominant hand");
}

// ---------------------------------------------------------------------------
// Skeleton layout (shoulder-width units)
// ---------------------------------------------------------------------------
//
// Only the landmarks the pipeline reads carry meaning; everything else is a
// deterministic filler offset. The skeleton centre sits at kCenter, the
// shoulders half a unit to each side, the face above, the hands in front.

constexpr Vector3 kCenter{1.5, 1.0, 0.5};
constexpr Vector3 kFace{1.5, 0.1, 0.6};        // kCenter + (0, -0.9, 0.1)
constexpr Vector3 kMouthAnchor{1.5, 0.2, 0.6}; // kFace + (0, 0.10, 0)
constexpr double kMouthWidth = 0.18;
constexpr Vector3 kRightHandStart{0.8, 1.35, 0.95};
constexpr Vector3 kLeftHandStart{2.2, 1.35, 0.95};
constexpr Vector3 kMiddleBaseOffset{0.2, 0.3, 0.15};

struct Skeleton3D {
    std::vector<Vector3> body, face, left_hand, right_hand;
};

std::vector<Vector3> body_points(std::size_t n) {
    std::vector<Vector3> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = kCenter + Vector3{0.04 * (double(i) - 12.0), 0.9 + 0.01 * double(i), 0.05};
    pts[kShoulderRightIndex] = kCenter + Vector3{-0.5, 0.0, 0.0};
    pts[kShoulderLeftIndex] = kCenter + Vector3{0.5, 0.0, 0.0};
    return pts;
}

std::vector<Vector3> face_points(std::size_t n, double mouth_ratio, const PhonoConfig& cfg) {
    std::vector<Vector3> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = kFace + Vector3{0.012 * double(i % 10) - 0.06, 0.012 * double(i / 10) - 0.04, 0.01};
    const double h = mouth_ratio * kMouthWidth;
    pts[cfg.mouth_right_index] = kMouthAnchor + Vector3{-kMouthWidth / 2, 0.0, 0.0};
    pts[cfg.mouth_left_index] = kMouthAnchor + Vector3{kMouthWidth / 2, 0.0, 0.0};
    pts[cfg.lip_upper_index] = kMouthAnchor + Vector3{0.0, -h / 2, 0.0};
    pts[cfg.lip_lower_index] = kMouthAnchor + Vector3{0.0, h / 2, 0.0};
    return pts;
}

std::vector<Vector3> hand_points(std::size_t n, Hand side, const Vector3& wrist,
                                 const Vector3& normal, const PhonoConfig& cfg) {
    std::vector<Vector3> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = wrist + Vector3{0.03 * double(i), 0.02 * double(i), 0.01 * double(i)};
    Vector3 u, v;
    palm_basis(normal, u, v);
    // Unit-length palm edges: the raw cross product the pipeline computes is
    // then the unit target itself, so raw components compare against k the
    // same way the scripted normal's do.
    pts[cfg.wrist_index] = wrist;
    if (side == Hand::right) {
        pts[cfg.little_base_index] = wrist + u;
        pts[cfg.index_base_index] = wrist + v;
    } else {
        pts[cfg.index_base_index] = wrist + u;
        pts[cfg.little_base_index] = wrist + v;
    }
    pts[cfg.middle_base_index] = wrist + kMiddleBaseOffset;
    return pts;
}

// Project to pixels: the frontal camera sees (x, y), the side camera's
// horizontal axis is depth (x_side = z), sharing the vertical axis.
void project(const std::vector<Vector3>& pts, double scale, ViewGroup& front, ViewGroup& side) {
    front.resize(pts.size());
    side.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        front.x[i] = pts[i].x * scale;
        front.y[i] = pts[i].y * scale;
        front.score[i] = 1.0;
        side.x[i] = pts[i].z * scale;
        side.y[i] = pts[i].y * scale;
        side.score[i] = 1.0;
    }
}

// ---------------------------------------------------------------------------
// Deterministic random helpers (bit-stable across platforms)
// ---------------------------------------------------------------------------

double u01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

double u11(std::mt19937_64& rng) {
    return 2.0 * u01(rng) - 1.0;  // [-1, 1)
}

void add_jitter(std::vector<ViewFrame2D>& frames, double amp, std::mt19937_64& rng) {
    for (ViewFrame2D& f : frames)
        for (Group g : kAllGroups) {
            ViewGroup& vg = f.group(g);
            for (std::size_t i = 0; i < vg.size(); ++i) {
                vg.x[i] += amp * u11(rng);
                vg.y[i] += amp * u11(rng);
            }
        }
}

}  // namespace

void palm_basis(const Vector3& n, Vector3& u, Vector3& v) {
    // reference axis least aligned with n, so the cross product is well away
    // from zero
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    Vector3 a{1.0, 0.0, 0.0};
    if (ay <= ax && ay <= az)
        a = {0.0, 1.0, 0.0};
    else if (az <= ax && az <= ay)
        a = {0.0, 0.0, 1.0};
    u = cross_product(a, n);
    u = (1.0 / norm(u)) * u;
    v = cross_product(n, u);  // unit because n is unit and orthogonal to u
}

GeneratedSample generate_sample(const MotionScript& script, const RoleTable& roles) {
    validate_script(script);
    const PhonoConfig cfg{};  // builtin landmark slots; threshold comes from the script
    const std::size_t n = script.n_frames;
    const double s = script.shoulder_width_px;

    const HandScript& right_script =
        script.dominant_hand == Hand::right ? script.dominant : script.non_dominant;
    const HandScript& left_script =
        script.dominant_hand == Hand::left ? script.dominant : script.non_dominant;

    GeneratedSample out;
    out.annotation.meta = script.meta;
    out.annotation.meta.frame_end =
        script.meta.frame_start + int64_t(n - 1) * script.source_stride;
    out.annotation.initial_handshape = script.initial_handshape;
    out.annotation.final_handshape = script.final_handshape;
    out.annotation.dominant_hand = script.dominant_hand;
    out.annotation.dominant_specified = true;

    const std::vector<std::string> shapes =
        assign_handshapes(n, script.initial_handshape, script.final_handshape);

    Vector3 right_pos = kRightHandStart;
    Vector3 left_pos = kLeftHandStart;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            right_pos = right_pos + right_script.displacements[t];
            left_pos = left_pos + left_script.displacements[t];
        }
        const std::vector<Vector3> body = body_points(roles.size(Group::body));
        const std::vector<Vector3> face =
            face_points(roles.size(Group::face), script.mouth_ratios[t], cfg);
        const std::vector<Vector3> lh = hand_points(roles.size(Group::left_hand), Hand::left,
                                                    left_pos, left_script.palm_normals[t], cfg);
        const std::vector<Vector3> rh = hand_points(roles.size(Group::right_hand), Hand::right,
                                                    right_pos, right_script.palm_normals[t], cfg);

        ViewFrame2D front, side;
        front.view = View::frontal;
        side.view = View::side;
        front.frame_index = side.frame_index =
            script.meta.frame_start + int64_t(t) * script.source_stride;
        project(body, s, front.body, side.body);
        project(face, s, front.face, side.face);
        project(lh, s, front.left_hand, side.left_hand);
        project(rh, s, front.right_hand, side.right_hand);
        out.frontal.push_back(std::move(front));
        out.side.push_back(std::move(side));

        PhonoFrame pf;
        pf.frame_index = int(t);
        pf.dh_handshape = AttributeValue::text_value(shapes[t], 1.0);
        pf.ndh_handshape = AttributeValue::text_value(shapes[t], 1.0);
        pf.dh_orientation = AttributeValue::text_value(
            classify_direction(script.dominant.palm_normals[t], script.threshold_k)
                .canonical_string(),
            1.0);
        pf.ndh_orientation = AttributeValue::text_value(
            classify_direction(script.non_dominant.palm_normals[t], script.threshold_k)
                .canonical_string(),
            1.0);
        if (t == 0) {
            pf.dh_movement = AttributeValue::text_value("none", 0.0);
            pf.ndh_movement = AttributeValue::text_value("none", 0.0);
        } else {
            pf.dh_movement = AttributeValue::text_value(
                classify_direction(script.dominant.displacements[t], script.threshold_k)
                    .canonical_string(),
                1.0);
            pf.ndh_movement = AttributeValue::text_value(
                classify_direction(script.non_dominant.displacements[t], script.threshold_k)
                    .canonical_string(),
                1.0);
        }
        pf.mouth_opening = AttributeValue::number_value(script.mouth_ratios[t], 1.0);
        out.expected.frames.push_back(std::move(pf));
    }
    out.expected.meta = out.annotation.meta;

    if (script.jitter_amplitude > 0.0) {
        std::mt19937_64 rng(script.seed);
        add_jitter(out.frontal, script.jitter_amplitude, rng);
        add_jitter(out.side, script.jitter_amplitude, rng);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random scripts and corpora
// ---------------------------------------------------------------------------

namespace {

const char* kShapePool[] = {"1", "5", "A", "B-L", "C", "S", "U", "crvd-5", "open-8", "flat-O"};

Vector3 random_unit_normal(std::mt19937_64& rng, double k, double margin) {
    for (;;) {
        Vector3 v{u11(rng), u11(rng), u11(rng)};
        const double len = norm(v);
        if (len < 0.2 || len > 1.0) continue;  // stay inside the unit ball, away from 0
        v = (1.0 / len) * v;
        if (band_clear(v.x, k, margin) && band_clear(v.y, k, margin) && band_clear(v.z, k, margin))
            return v;
    }
}

Vector3 random_displacement(std::mt19937_64& rng, double k, double margin) {
    if (rng() % 4 == 0) return Vector3{0.0, 0.0, 0.0};  // a hold step
    double c[3];
    for (double& axis : c) {
        const uint64_t mode = rng() % 3;
        if (mode == 0) {
            // unlabeled: zero or a small drift safely below the band
            axis = rng() % 2 == 0 ? 0.0 : u11(rng) * (k - margin - 0.01);
        } else {
            const double mag = k + margin + 0.05 + 0.5 * u01(rng);
            axis = mode == 1 ? mag : -mag;
        }
    }
    return Vector3{c[0], c[1], c[2]};
}

std::string pad_number(const char* prefix, uint64_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*llu", prefix, width,
                  static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace

MotionScript random_script(uint64_t seed, std::size_t max_frames) {
    std::mt19937_64 rng(seed);
    MotionScript s;
    s.seed = seed;
    s.n_frames = 1 + rng() % (max_frames == 0 ? 1 : max_frames);
    s.meta.label = pad_number("SYN", rng() % 40, 3);
    s.meta.session = "synth";
    s.meta.scene = "s0";
    s.meta.consultant = "c" + std::to_string(rng() % 5);
    s.meta.frame_start = 0;
    s.dominant_hand = rng() % 5 == 0 ? Hand::left : Hand::right;
    s.initial_handshape = kShapePool[rng() % 10];
    s.final_handshape = kShapePool[rng() % 10];
    for (HandScript* hand : {&s.dominant, &s.non_dominant}) {
        hand->palm_normals.push_back(random_unit_normal(rng, s.threshold_k, s.margin));
        hand->displacements.push_back(Vector3{0.0, 0.0, 0.0});
        for (std::size_t t = 1; t < s.n_frames; ++t) {
            hand->palm_normals.push_back(random_unit_normal(rng, s.threshold_k, s.margin));
            hand->displacements.push_back(random_displacement(rng, s.threshold_k, s.margin));
        }
    }
    for (std::size_t t = 0; t < s.n_frames; ++t)
        s.mouth_ratios.push_back(double(rng() % 800) / 1000.0);
    return s;
}

void write_synth_corpus(const std::filesystem::path& out_dir, const SynthOptions& opt) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "front");
    fs::create_directories(out_dir / "side");
    fs::create_directories(out_dir / "expected");

    std::mt19937_64 master(opt.seed);
    std::string annotations =
        "label,session,scene,consultant,frame_start,frame_end,"
        "initial_handshape,final_handshape,dominant_hand\n";

    for (std::size_t i = 0; i < opt.n_samples; ++i) {
        MotionScript script = random_script(master(), opt.max_frames);
        script.shoulder_width_px = opt.shoulder_width_px;
        script.source_stride = opt.source_stride;
        script.jitter_amplitude = opt.jitter_amplitude;
        const std::string id = pad_number("s", i, 5);
        script.meta.session = id;
        script.meta.scene = "take";

        GeneratedSample gen = generate_sample(script);
        const std::string video = id + "__take.json";
        docio::write_file(out_dir / "front" / video, emit_view_document(gen.frontal));
        docio::write_file(out_dir / "side" / video, emit_view_document(gen.side));
        docio::write_file(out_dir / "expected" / (id + ".json"),
                          emit_phono_document(gen.expected));

        const SampleMeta& m = gen.annotation.meta;
        annotations += m.label + "," + m.session + "," + m.scene + "," + m.consultant + "," +
                       std::to_string(m.frame_start) + "," + std::to_string(m.frame_end) + "," +
                       gen.annotation.initial_handshape + "," + gen.annotation.final_handshape +
                       "," + (gen.annotation.dominant_hand == Hand::left ? "left" : "right") +
                       "\n";
    }
    docio::write_file(out_dir / "annotations.csv", annotations);
}

}  // namespace signpipe
