#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "signpipe/model.hpp"

namespace signpipe {

// Fixed (group, index) -> name mapping for every keypoint the pipeline
// handles. The built-in table follows the upstream estimator's default
// models (25-point body, 70-point face, 21-point hands); a different
// estimator can be mapped by loading a table file with the same grammar:
//
//   # comment
//   body 0 nose
//   face 51 lip_outer_3
//   ...
//
// Indices must be dense (0..n-1) within each group.
class RoleTable {
public:
    static const RoleTable& builtin();

    // Parses a role table file. Throws MalformedDocument on syntax or
    // density violations.
    static RoleTable load(const std::string& path);

    std::size_t size(Group g) const { return names_[static_cast<int>(g)].size(); }
    const std::string& name(Group g, std::size_t index) const {
        return names_[static_cast<int>(g)][index];
    }
    std::optional<std::size_t> index_of(Group g, std::string_view name) const;

    KeypointRole role(Group g, std::size_t index) const {
        return {g, static_cast<int>(index), name(g, index)};
    }

    friend bool operator==(const RoleTable&, const RoleTable&) = default;

private:
    std::vector<std::string> names_[4];
};

}  // namespace signpipe
