#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signpipe/ingest.hpp"
#include "signpipe/model.hpp"
#include "signpipe/roles.hpp"

namespace signpipe {

// Which side of the signer the profile camera stands on. It decides the sign
// of the z axis: +z must always point from the body toward the frontal
// camera, so a camera on the signer's left measures -z.
enum class SideCameraSide : uint8_t { signer_left, signer_right };

std::string_view side_camera_name(SideCameraSide s);

struct FusionConfig {
    double z_scale = 1.0;  // side-view pixel -> frontal-view pixel scale
    SideCameraSide side_camera_side = SideCameraSide::signer_right;
    double min_view_score = 0.0;   // joints under this score in either view are dropped
    double epsilon_width = 1e-6;   // shoulder widths at or below this are degenerate

    // Throws std::invalid_argument (a usage error, not a data error).
    void validate() const;

    // z_scale with the side-camera sign folded in.
    double signed_z_scale() const {
        return side_camera_side == SideCameraSide::signer_left ? -z_scale : z_scale;
    }
};

// BODY_25 shoulder slots, the reference pair for normalization.
inline constexpr std::size_t kShoulderRightIndex = 2;
inline constexpr std::size_t kShoulderLeftIndex = 5;

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Combines one frontal/side frame pair into an unnormalized 3D skeleton
// (pixel units): x,y from the frontal view, z from the side view's x axis
// scaled by signed_z_scale(), score = min of the two views. A joint missing
// (or under min_view_score) in either view is missing in the output.
SkeletonFrame fuse_frame(const ViewFrame2D& front, const ViewFrame2D& side,
                         const FusionConfig& cfg);

// fuse_frame over a paired segment; output frame_index runs 0..n-1 in the
// downsampled sequence.
std::vector<SkeletonFrame> fuse_sample(std::span<const FramePair> pairs, const FusionConfig& cfg);

// Distance between the shoulder keypoints in the frame's current units.
// Throws MissingShoulder when either shoulder has score 0.
double shoulder_width(const SkeletonFrame& frame);

// Divides every non-missing keypoint by width (missing ones stay at the
// origin); scores unchanged. Throws DegenerateWidth when width <= eps.
SkeletonFrame normalize_frame(SkeletonFrame frame, double width, double eps);

struct NormalizedSample {
    std::vector<SkeletonFrame> frames;
    // positions of frames normalized by the sample median width because
    // their own shoulders were missing or degenerate
    std::vector<std::size_t> median_fallback;
};

// Normalizes each frame by its own shoulder width; frames without a valid
// width fall back to the median width of the valid frames (even count:
// mean of the two middle values). Throws UnnormalizableSample when no frame
// has a valid width.
NormalizedSample normalize_sample(std::vector<SkeletonFrame> frames, const FusionConfig& cfg);

// ---------------------------------------------------------------------------
// 3D dataset documents
// ---------------------------------------------------------------------------

// One JSON document per sample: metadata fields, then per-frame body / face /
// left_hand / right_hand nodes each holding parallel name / score / x / y / z
// arrays. Numbers use fixed 6-decimal precision, so equal samples emit
// byte-identical documents.
std::string emit_sample3d_document(const Sample3D& sample,
                                   const RoleTable& roles = RoleTable::builtin());

// Strict inverse of emit_sample3d_document (modulo 6-decimal rounding).
// Throws MalformedDocument on any schema or invariant violation, including
// role names that do not match the table.
Sample3D parse_sample3d_document(std::string_view document,
                                 const RoleTable& roles = RoleTable::builtin());

}  // namespace signpipe
