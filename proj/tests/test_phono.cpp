#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "signpipe/errors.hpp"
#include "signpipe/phono.hpp"

using namespace signpipe;

namespace {

// Normalized-units sample with hands and lips in controlled positions.
// Right palm faces the frontal camera; middle-finger base moves +0.4 in z
// per frame; mouth ratio 0.5 throughout.
Sample3D make_sample(std::size_t n_frames, const PhonoConfig& cfg = {}) {
    Sample3D s;
    s.meta = {"TEST", "ses", "sc", "c0", 0, 20 * (static_cast<int64_t>(n_frames) - 1)};
    for (std::size_t t = 0; t < n_frames; ++t) {
        SkeletonFrame f;
        f.frame_index = static_cast<int>(t);
        f.body.resize(25);
        f.face.resize(70);
        f.left_hand.resize(21);
        f.right_hand.resize(21);

        for (Joints* hand : {&f.right_hand, &f.left_hand}) {
            hand->set(cfg.wrist_index, {0.0, 0.0, 0.0}, 1.0);
            hand->set(cfg.little_base_index, {1.0, 0.0, 0.0}, 1.0);
            hand->set(cfg.index_base_index, {0.0, 1.0, 0.0}, 1.0);
            hand->set(cfg.middle_base_index, {0.5, 0.5, 0.4 * static_cast<double>(t)}, 1.0);
        }
        f.face.set(cfg.lip_upper_index, {0.0, 1.0, 0.0}, 1.0);
        f.face.set(cfg.lip_lower_index, {0.0, 0.0, 0.0}, 1.0);
        f.face.set(cfg.mouth_right_index, {-1.0, 0.5, 0.0}, 1.0);
        f.face.set(cfg.mouth_left_index, {1.0, 0.5, 0.0}, 1.0);
        s.frames.push_back(std::move(f));
    }
    return s;
}

AnnotationRecord record_for(const Sample3D& s, const char* initial = "A",
                            const char* final_code = "B", Hand dom = Hand::right) {
    AnnotationRecord rec;
    rec.meta = s.meta;
    rec.initial_handshape = initial;
    rec.final_handshape = final_code;
    rec.dominant_hand = dom;
    rec.dominant_specified = true;
    return rec;
}

}  // namespace

TEST_CASE("palm_normal basis example") {
    Vector3 W{0, 0, 0}, L{1, 0, 0}, I{0, 1, 0};
    CHECK(palm_normal(W, L, I, Hand::right) == Vector3{0, 0, 1});
    CHECK(palm_normal(W, L, I, Hand::left) == Vector3{0, 0, -1});
}

TEST_CASE("palm_normal degenerate plane") {
    Vector3 W{0, 0, 0};
    CHECK_THROWS_AS(palm_normal(W, Vector3{1, 1, 1}, Vector3{2, 2, 2}, Hand::right),
                    DegeneratePlane);
    CHECK_THROWS_AS(palm_normal(W, W, Vector3{1, 0, 0}, Hand::left), DegeneratePlane);
}

TEST_CASE("palm_normal antisymmetry on random triples") {
    std::mt19937_64 rng(1234);
    auto next = [&] { return static_cast<double>(rng()) / double(rng.max()) * 4.0 - 2.0; };
    int checked = 0;
    while (checked < 1000) {
        Vector3 W{next(), next(), next()}, L{next(), next(), next()}, I{next(), next(), next()};
        Vector3 left, right;
        try {
            left = palm_normal(W, L, I, Hand::left);
            right = palm_normal(W, L, I, Hand::right);
        } catch (const DegeneratePlane&) {
            continue;  // nearly-collinear draw
        }
        // bitwise negation, not approximate
        CHECK(left.x == -right.x);
        CHECK(left.y == -right.y);
        CHECK(left.z == -right.z);
        ++checked;
    }
}

TEST_CASE("classify_direction examples") {
    CHECK(classify_direction({0, 0, 0}, 0.30).canonical_string() == "none");
    CHECK(classify_direction({-0.5, 0.6, 0}, 0.30).canonical_string() == "right_down");
    CHECK(classify_direction({0.30, -0.30, 0.31}, 0.30).canonical_string() == "front");
    CHECK(classify_direction({0.4, -0.35, -0.31}, 0.30).canonical_string() == "left_up_body");
    CHECK(classify_direction({-0.31, 0.0, 0.31}, 0.30).canonical_string() == "right_front");
}

TEST_CASE("classify_direction boundary semantics") {
    const double k = 0.30;
    // exactly +-k: strict inequality, no label
    CHECK(classify_direction({k, k, k}, k).empty());
    CHECK(classify_direction({-k, -k, -k}, k).empty());
    // one ulp-ish beyond: labeled
    const double over = k + 1e-9;
    CHECK(classify_direction({over, 0, 0}, k).canonical_string() == "left");
    CHECK(classify_direction({-over, 0, 0}, k).canonical_string() == "right");
    CHECK(classify_direction({0, over, 0}, k).canonical_string() == "down");
    CHECK(classify_direction({0, -over, 0}, k).canonical_string() == "up");
    CHECK(classify_direction({0, 0, over}, k).canonical_string() == "front");
    CHECK(classify_direction({0, 0, -over}, k).canonical_string() == "body");
}

TEST_CASE("classify_direction scale invariance and exclusivity") {
    std::mt19937_64 rng(99);
    auto next = [&] { return static_cast<double>(rng()) / double(rng.max()) * 2.0 - 1.0; };
    for (int i = 0; i < 500; ++i) {
        Vector3 v{next(), next(), next()};
        if (i % 7 == 0) v.x = 0.30;   // boundary values included on purpose
        if (i % 11 == 0) v.y = -0.30;
        DirectionSet a = classify_direction(v, 0.30);
        for (double c : {0.5, 2.0, 117.0})
            CHECK(classify_direction(c * v, c * 0.30) == a);
        // label exclusivity per axis
        CHECK_FALSE((a.contains(Direction::right) && a.contains(Direction::left)));
        CHECK_FALSE((a.contains(Direction::up) && a.contains(Direction::down)));
        CHECK_FALSE((a.contains(Direction::body) && a.contains(Direction::front)));
    }
}

TEST_CASE("motion_vector") {
    Vector3 m = motion_vector({1, 1, 1}, {0.5, 1, 1});
    CHECK(m == Vector3{0.5, 0, 0});
    CHECK(classify_direction(m, 0.30).canonical_string() == "left");
    CHECK(classify_direction(motion_vector({1, 1, 1}, {1, 1, 1}), 0.30).empty());
}

TEST_CASE("assign_handshapes") {
    CHECK(assign_handshapes(4, "A", "B") == std::vector<std::string>{"A", "A", "B", "B"});
    CHECK(assign_handshapes(5, "A", "B") == std::vector<std::string>{"A", "A", "A", "B", "B"});
    CHECK(assign_handshapes(1, "A", "B") == std::vector<std::string>{"A"});

    for (std::size_t n = 1; n <= 12; ++n) {
        auto v = assign_handshapes(n, "A", "B");
        const auto initial = static_cast<std::size_t>(std::count(v.begin(), v.end(), "A"));
        const std::size_t final_count = n - initial;
        CHECK(initial == (n + 1) / 2);
        CHECK(final_count == n / 2);
        CHECK((initial - final_count == 0 || initial - final_count == 1));
    }
}

TEST_CASE("mouth_opening") {
    CHECK(mouth_opening({0, 1, 0}, {0, 0, 0}, {-1, 0.5, 0}, {1, 0.5, 0}) == doctest::Approx(0.5));
    CHECK(mouth_opening({0.3, 0.7, 0}, {0.3, 0.7, 0}, {-1, 0.5, 0}, {1, 0.5, 0}) == 0.0);
    CHECK_THROWS_AS(mouth_opening({0, 1, 0}, {0, 0, 0}, {1, 1, 0}, {1, 1, 0}), DegenerateMouth);
    // rigid translation leaves the ratio untouched
    Vector3 d{3.0, -2.0, 5.0};
    CHECK(mouth_opening(Vector3{0, 1, 0} + d, Vector3{0, 0, 0} + d, Vector3{-1, 0.5, 0} + d,
                        Vector3{1, 0.5, 0} + d) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("attribute_score") {
    const double a[] = {0.8, 0.6, 0.7};
    CHECK(attribute_score(a) == doctest::Approx(0.7));
    const double b[] = {1.0, 1.0};
    CHECK(attribute_score(b) == 1.0);
    const double c[] = {0.9, 0.0};
    CHECK(attribute_score(c) == 0.0);
    CHECK(attribute_score({}) == 0.0);
}

TEST_CASE("extract_phono on a controlled sample") {
    Sample3D s = make_sample(4);
    AnnotationRecord rec = record_for(s);
    PhonoSample p = extract_phono(s, rec);

    REQUIRE(p.frames.size() == 4);
    CHECK(p.meta == s.meta);
    for (std::size_t t = 0; t < 4; ++t) {
        const PhonoFrame& f = p.frames[t];
        CHECK(f.frame_index == static_cast<int>(t));
        // handshape halving: A A B B
        CHECK(f.dh_handshape.text() == (t < 2 ? "A" : "B"));
        CHECK(f.ndh_handshape.text() == f.dh_handshape.text());
        CHECK(f.dh_handshape.score == 1.0);
        // right palm normal (0,0,1) -> front; left hand has the mirrored
        // landmark layout here, so its normal flips to (0,0,-1) -> body
        CHECK(f.dh_orientation.text() == "front");
        CHECK(f.dh_orientation.score == 1.0);
        CHECK(f.ndh_orientation.text() == "body");
        // movement: +0.4 z per frame -> front, except the first frame
        if (t == 0) {
            CHECK(f.dh_movement.text() == "none");
            CHECK(f.dh_movement.score == 0.0);
        } else {
            CHECK(f.dh_movement.text() == "front");
            CHECK(f.dh_movement.score == 1.0);
            CHECK(f.ndh_movement.text() == "front");
        }
        CHECK(f.mouth_opening.number() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(f.mouth_opening.score == 1.0);
    }
}

TEST_CASE("extract_phono respects the dominant hand") {
    Sample3D s = make_sample(2);
    // make the left hand distinguishable: stationary middle finger
    for (SkeletonFrame& f : s.frames)
        f.left_hand.set(PhonoConfig{}.middle_base_index, {0.5, 0.5, 0.0}, 1.0);

    PhonoSample right_dom = extract_phono(s, record_for(s, "A", "B", Hand::right));
    PhonoSample left_dom = extract_phono(s, record_for(s, "A", "B", Hand::left));

    CHECK(right_dom.frames[1].dh_movement.text() == "front");
    CHECK(right_dom.frames[1].ndh_movement.text() == "none");
    CHECK(right_dom.frames[1].ndh_movement.score == 1.0);  // computed, genuinely still
    CHECK(left_dom.frames[1].dh_movement.text() == "none");
    CHECK(left_dom.frames[1].ndh_movement.text() == "front");
    CHECK(left_dom.frames[0].dh_orientation.text() == "body");  // left palm normal
}

TEST_CASE("extract_phono degrades missing geometry per attribute") {
    Sample3D s = make_sample(2);
    // wipe the dominant hand completely ...
    for (SkeletonFrame& f : s.frames) f.right_hand.resize(21);
    // ... and one lip landmark on frame 0
    s.frames[0].face.score[PhonoConfig{}.lip_upper_index] = 0.0;

    PhonoSample p = extract_phono(s, record_for(s));
    CHECK(p.frames[0].dh_orientation.text() == "none");
    CHECK(p.frames[0].dh_orientation.score == 0.0);
    CHECK(p.frames[1].dh_movement.text() == "none");
    CHECK(p.frames[1].dh_movement.score == 0.0);
    CHECK(p.frames[0].mouth_opening.number() == 0.0);
    CHECK(p.frames[0].mouth_opening.score == 0.0);
    // frame 1 mouth unaffected
    CHECK(p.frames[1].mouth_opening.number() == doctest::Approx(0.5));
    // non-dominant hand unaffected
    CHECK(p.frames[0].ndh_orientation.text() == "body");
}

TEST_CASE("extract_phono scores are means of the involved keypoints") {
    Sample3D s = make_sample(2);
    PhonoConfig cfg;
    s.frames[0].right_hand.score[cfg.wrist_index] = 0.8;
    s.frames[0].right_hand.score[cfg.little_base_index] = 0.6;
    s.frames[0].right_hand.score[cfg.index_base_index] = 0.7;
    s.frames[1].right_hand.score[cfg.middle_base_index] = 0.5;

    PhonoSample p = extract_phono(s, record_for(s));
    CHECK(p.frames[0].dh_orientation.score == doctest::Approx(0.7));
    CHECK(p.frames[1].dh_movement.score == doctest::Approx(0.75));  // (1.0 + 0.5) / 2
}

TEST_CASE("extract_phono rejects mismatched annotations") {
    Sample3D s = make_sample(2);
    AnnotationRecord rec = record_for(s);
    rec.meta.scene = "other";
    CHECK_THROWS_AS(extract_phono(s, rec), InvalidAnnotation);

    Sample3D empty;
    empty.meta = s.meta;
    CHECK_THROWS_AS(extract_phono(empty, record_for(s)), InvalidAnnotation);
}

TEST_CASE("collinear palm landmarks degrade to none without failing") {
    Sample3D s = make_sample(1);
    PhonoConfig cfg;
    for (SkeletonFrame& f : s.frames) {
        f.right_hand.set(cfg.wrist_index, {0, 0, 0}, 1.0);
        f.right_hand.set(cfg.little_base_index, {1, 0, 0}, 1.0);
        f.right_hand.set(cfg.index_base_index, {2, 0, 0}, 1.0);  // collinear
    }
    PhonoSample p = extract_phono(s, record_for(s));
    CHECK(p.frames[0].dh_orientation.text() == "none");
    CHECK(p.frames[0].dh_orientation.score == 0.0);
}

TEST_CASE("phono config validation") {
    PhonoConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.threshold_k = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.middle_base_index = 21;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.lip_upper_index = 70;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("phono document round-trip") {
    Sample3D s = make_sample(3);
    PhonoSample p = extract_phono(s, record_for(s, "crvd-5", "U/H"));
    std::string doc = emit_phono_document(p);
    PhonoSample back = parse_phono_document(doc);

    CHECK(back.meta == p.meta);
    REQUIRE(back.frames.size() == p.frames.size());
    for (std::size_t t = 0; t < p.frames.size(); ++t) {
        for (std::size_t a = 0; a < kAttributeNames.size(); ++a) {
            const AttributeValue& ours = attribute_by_index(p.frames[t], a);
            const AttributeValue& theirs = attribute_by_index(back.frames[t], a);
            if (ours.is_numeric())
                CHECK(std::abs(ours.number() - theirs.number()) <= 5e-7);
            else
                CHECK(ours.text() == theirs.text());
            CHECK(std::abs(ours.score - theirs.score) <= 5e-7);
        }
    }
    // byte-stable re-emission
    CHECK(emit_phono_document(back) == doc);
}

TEST_CASE("phono document parser rejections") {
    Sample3D s = make_sample(2);
    const std::string good = emit_phono_document(extract_phono(s, record_for(s)));

    CHECK_THROWS_AS(parse_phono_document("{}"), MalformedDocument);

    std::string bad = good;
    bad.replace(bad.find("\"front\""), 7, "\"fr0nt\"");
    CHECK_THROWS_AS(parse_phono_document(bad), MalformedDocument);

    bad = good;
    auto pos = bad.find("\"dh_movement\"");
    bad.replace(pos, 13, "\"dh_momentum\"");
    CHECK_THROWS_AS(parse_phono_document(bad), MalformedDocument);

    // mouth value must be a number
    bad = good;
    pos = bad.find("\"mouth_opening\": {\"value\": ");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos + 27, 8, "\"0.5000\"");
    CHECK_THROWS_AS(parse_phono_document(bad), MalformedDocument);
}
