#include "signpipe/model.hpp"

namespace signpipe {

std::string_view group_name(Group g) {
    switch (g) {
        case Group::body: return "body";
        case Group::face: return "face";
        case Group::left_hand: return "left_hand";
        case Group::right_hand: return "right_hand";
    }
    return "?";
}

std::optional<Group> group_from_name(std::string_view name) {
    for (Group g : kAllGroups)
        if (group_name(g) == name) return g;
    return std::nullopt;
}

Joints& SkeletonFrame::group(Group g) {
    switch (g) {
        case Group::body: return body;
        case Group::face: return face;
        case Group::left_hand: return left_hand;
        case Group::right_hand: return right_hand;
    }
    return body;
}

const Joints& SkeletonFrame::group(Group g) const {
    return const_cast<SkeletonFrame*>(this)->group(g);
}

std::string_view direction_name(Direction d) {
    switch (d) {
        case Direction::right: return "right";
        case Direction::left: return "left";
        case Direction::up: return "up";
        case Direction::down: return "down";
        case Direction::body: return "body";
        case Direction::front: return "front";
    }
    return "?";
}

namespace {

// Axis of a label: x = 0, y = 1, z = 2.
int axis_of(Direction d) {
    switch (d) {
        case Direction::right:
        case Direction::left: return 0;
        case Direction::up:
        case Direction::down: return 1;
        case Direction::body:
        case Direction::front: return 2;
    }
    return 0;
}

constexpr std::array<Direction, 6> kCanonicalOrder = {
    Direction::right, Direction::left, Direction::up,
    Direction::down,  Direction::body, Direction::front};

}  // namespace

int DirectionSet::size() const {
    int n = 0;
    for (Direction d : kCanonicalOrder)
        if (contains(d)) ++n;
    return n;
}

void DirectionSet::set(Direction d) {
    for (Direction other : kCanonicalOrder)
        if (axis_of(other) == axis_of(d)) bits_ &= static_cast<uint8_t>(~bit(other));
    bits_ |= bit(d);
}

std::string DirectionSet::canonical_string() const {
    if (empty()) return "none";
    std::string out;
    for (Direction d : kCanonicalOrder) {  // x labels, then y, then z
        if (!contains(d)) continue;
        if (!out.empty()) out += '_';
        out += direction_name(d);
    }
    return out;
}

std::optional<DirectionSet> DirectionSet::parse(std::string_view s) {
    DirectionSet out;
    if (s == "none") return out;
    if (s.empty()) return std::nullopt;

    int last_axis = -1;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t sep = s.find('_', pos);
        std::string_view token = s.substr(pos, sep == std::string_view::npos ? std::string_view::npos
                                                                             : sep - pos);
        bool matched = false;
        for (Direction d : kCanonicalOrder) {
            if (direction_name(d) != token) continue;
            if (axis_of(d) <= last_axis) return std::nullopt;  // duplicate axis or bad order
            last_axis = axis_of(d);
            out.set(d);
            matched = true;
            break;
        }
        if (!matched) return std::nullopt;
        if (sep == std::string_view::npos) break;
        pos = sep + 1;
    }
    return out;
}

const AttributeValue& attribute_by_index(const PhonoFrame& f, std::size_t attr) {
    switch (attr) {
        case 0: return f.dh_handshape;
        case 1: return f.ndh_handshape;
        case 2: return f.dh_orientation;
        case 3: return f.ndh_orientation;
        case 4: return f.dh_movement;
        case 5: return f.ndh_movement;
        default: return f.mouth_opening;
    }
}

}  // namespace signpipe
