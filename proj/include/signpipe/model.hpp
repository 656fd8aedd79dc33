#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace signpipe {

// ---------------------------------------------------------------------------
// Vector math
// ---------------------------------------------------------------------------

struct Vector3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vector3 operator+(const Vector3& a, const Vector3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Vector3 operator-(const Vector3& a, const Vector3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Vector3 operator*(double s, const Vector3& v) {
        return {s * v.x, s * v.y, s * v.z};
    }
    friend bool operator==(const Vector3& a, const Vector3& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
};

inline double dot(const Vector3& a, const Vector3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vector3 cross_product(const Vector3& a, const Vector3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline double norm(const Vector3& v) {
    return std::sqrt(dot(v, v));
}

inline double euclidean_distance(const Vector3& a, const Vector3& b) {
    return norm(a - b);
}

inline bool is_finite(const Vector3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// ---------------------------------------------------------------------------
// Keypoint groups
// ---------------------------------------------------------------------------

enum class Group : uint8_t { body = 0, face = 1, left_hand = 2, right_hand = 3 };

inline constexpr std::array<Group, 4> kAllGroups = {Group::body, Group::face,
                                                    Group::left_hand, Group::right_hand};

std::string_view group_name(Group g);
std::optional<Group> group_from_name(std::string_view name);

struct KeypointRole {
    Group group = Group::body;
    int index = 0;
    std::string name;  // fixed by the role table for (group, index)
};

// One named joint. score == 0 marks a missing/unestimated joint and forces
// x = y = z = 0.
struct Keypoint3D {
    KeypointRole role;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double score = 0.0;

    Vector3 position() const { return {x, y, z}; }
    bool missing() const { return score <= 0.0; }
};

// Keypoints of one group stored as parallel arrays. This is both the layout
// the fuse/scale kernels run over and the layout of the emitted documents.
struct Joints {
    std::vector<double> x, y, z, score;

    explicit Joints(std::size_t n = 0) { resize(n); }

    void resize(std::size_t n) {
        x.assign(n, 0.0);
        y.assign(n, 0.0);
        z.assign(n, 0.0);
        score.assign(n, 0.0);
    }
    std::size_t size() const { return x.size(); }

    Vector3 position(std::size_t i) const { return {x[i], y[i], z[i]}; }
    bool missing(std::size_t i) const { return score[i] <= 0.0; }

    void set(std::size_t i, const Vector3& p, double s) {
        x[i] = p.x;
        y[i] = p.y;
        z[i] = p.z;
        score[i] = s;
    }
};

// One time step of a 3D sample: body/face/left-hand/right-hand groups plus
// the index in the downsampled sequence.
struct SkeletonFrame {
    Joints body{0};
    Joints face{0};
    Joints left_hand{0};
    Joints right_hand{0};
    int frame_index = 0;

    Joints& group(Group g);
    const Joints& group(Group g) const;
};

struct SampleMeta {
    std::string label;
    std::string session;
    std::string scene;
    std::string consultant;
    int64_t frame_start = 0;  // source-video frame units
    int64_t frame_end = 0;

    friend bool operator==(const SampleMeta&, const SampleMeta&) = default;
};

struct Sample3D {
    SampleMeta meta;
    std::vector<SkeletonFrame> frames;
};

// ---------------------------------------------------------------------------
// Directions
// ---------------------------------------------------------------------------

enum class Direction : uint8_t { right = 0, left, up, down, body, front };

std::string_view direction_name(Direction d);

// Up to one label per axis: {right,left} on x, {up,down} on y, {body,front}
// on z. Canonical string form is x-label, y-label, z-label joined with "_";
// the empty set serializes as "none".
class DirectionSet {
public:
    DirectionSet() = default;

    bool contains(Direction d) const { return bits_ & bit(d); }
    bool empty() const { return bits_ == 0; }
    int size() const;

    // Inserts d, replacing any previous label on the same axis.
    void set(Direction d);

    std::string canonical_string() const;

    // Inverse of canonical_string. Rejects unknown labels, duplicated axes
    // and non-canonical orderings.
    static std::optional<DirectionSet> parse(std::string_view s);

    friend bool operator==(const DirectionSet&, const DirectionSet&) = default;

private:
    static uint8_t bit(Direction d) { return static_cast<uint8_t>(1u << static_cast<int>(d)); }
    uint8_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Phonological attributes
// ---------------------------------------------------------------------------

// Attribute value plus a confidence score derived from the scores of the
// keypoints involved. value is a string for handshape/orientation/movement
// and a real for mouth opening.
struct AttributeValue {
    std::variant<std::string, double> value = std::string("none");
    double score = 0.0;

    bool is_numeric() const { return std::holds_alternative<double>(value); }
    const std::string& text() const { return std::get<std::string>(value); }
    double number() const { return std::get<double>(value); }

    static AttributeValue text_value(std::string v, double score) {
        return {std::move(v), score};
    }
    static AttributeValue number_value(double v, double score) { return {v, score}; }
};

struct PhonoFrame {
    int frame_index = 0;
    AttributeValue dh_handshape;
    AttributeValue ndh_handshape;
    AttributeValue dh_orientation;
    AttributeValue ndh_orientation;
    AttributeValue dh_movement;
    AttributeValue ndh_movement;
    AttributeValue mouth_opening;
};

inline constexpr std::array<std::string_view, 7> kAttributeNames = {
    "dh_handshape",  "ndh_handshape", "dh_orientation", "ndh_orientation",
    "dh_movement",   "ndh_movement",  "mouth_opening"};

const AttributeValue& attribute_by_index(const PhonoFrame& f, std::size_t attr);

struct PhonoSample {
    SampleMeta meta;
    std::vector<PhonoFrame> frames;
};

}  // namespace signpipe
