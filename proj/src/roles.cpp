#include "signpipe/roles.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "signpipe/errors.hpp"

namespace signpipe {

namespace {

const char* kBodyNames[25] = {
    "nose",           "neck",           "shoulder_right", "elbow_right",   "wrist_right",
    "shoulder_left",  "elbow_left",     "wrist_left",     "hip_middle",    "hip_right",
    "knee_right",     "ankle_right",    "hip_left",       "knee_left",     "ankle_left",
    "eye_right",      "eye_left",       "ear_right",      "ear_left",      "big_toe_left",
    "small_toe_left", "heel_left",      "big_toe_right",  "small_toe_right", "heel_right"};

// 70-point face layout: 17 jaw, 2x5 brows, 4+5 nose, 2x6 eyes, 12 outer lip,
// 8 inner lip, 2 pupils.
std::vector<std::string> face_names() {
    std::vector<std::string> out;
    out.reserve(70);
    auto run = [&out](const char* prefix, int n) {
        for (int i = 0; i < n; ++i) out.push_back(std::string(prefix) + "_" + std::to_string(i));
    };
    run("jaw", 17);
    run("brow_right", 5);
    run("brow_left", 5);
    run("nose_bridge", 4);
    run("nose_base", 5);
    run("eye_right", 6);
    run("eye_left", 6);
    run("lip_outer", 12);
    run("lip_inner", 8);
    out.push_back("pupil_right");
    out.push_back("pupil_left");
    return out;
}

std::vector<std::string> hand_names() {
    std::vector<std::string> out;
    out.reserve(21);
    out.push_back("wrist");
    const char* fingers[5] = {"thumb", "index", "middle", "ring", "little"};
    const char* thumb_joints[4] = {"cmc", "mcp", "ip", "tip"};
    const char* finger_joints[4] = {"mcp", "pip", "dip", "tip"};
    for (int f = 0; f < 5; ++f) {
        const char** joints = (f == 0) ? thumb_joints : finger_joints;
        for (int j = 0; j < 4; ++j)
            out.push_back(std::string(fingers[f]) + "_" + joints[j]);
    }
    return out;
}

}  // namespace

const RoleTable& RoleTable::builtin() {
    static const RoleTable table = [] {
        RoleTable t;
        t.names_[static_cast<int>(Group::body)].assign(kBodyNames, kBodyNames + 25);
        t.names_[static_cast<int>(Group::face)] = face_names();
        t.names_[static_cast<int>(Group::left_hand)] = hand_names();
        t.names_[static_cast<int>(Group::right_hand)] = hand_names();
        return t;
    }();
    return table;
}

RoleTable RoleTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedDocument("role table: cannot open " + path);

    std::map<int, std::string> entries[4];
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string group_str, name;
        long index = -1;
        if (!(ls >> group_str)) continue;  // blank line
        if (!(ls >> index >> name))
            throw MalformedDocument("role table: bad line " + std::to_string(lineno) + " in " + path);
        auto g = group_from_name(group_str);
        if (!g || index < 0)
            throw MalformedDocument("role table: bad group or index at line " +
                                    std::to_string(lineno) + " in " + path);
        auto [it, inserted] = entries[static_cast<int>(*g)].emplace(static_cast<int>(index), name);
        if (!inserted)
            throw MalformedDocument("role table: duplicate (" + group_str + ", " +
                                    std::to_string(index) + ") in " + path);
    }

    RoleTable t;
    for (Group g : kAllGroups) {
        auto& src = entries[static_cast<int>(g)];
        auto& dst = t.names_[static_cast<int>(g)];
        int expect = 0;
        for (auto& [index, name] : src) {
            if (index != expect++)
                throw MalformedDocument("role table: " + std::string(group_name(g)) +
                                        " indices not dense at " + std::to_string(index));
            dst.push_back(std::move(name));
        }
        if (dst.empty())
            throw MalformedDocument("role table: group " + std::string(group_name(g)) +
                                    " missing in " + path);
    }
    return t;
}

std::optional<std::size_t> RoleTable::index_of(Group g, std::string_view name) const {
    const auto& names = names_[static_cast<int>(g)];
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

}  // namespace signpipe
