#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signpipe/model.hpp"
#include "signpipe/roles.hpp"

namespace signpipe {

enum class View : uint8_t { frontal, side };

std::string_view view_name(View v);

// One keypoint group of a single-view 2D frame, stored as parallel arrays
// (pixel coordinates plus estimator score).
struct ViewGroup {
    std::vector<double> x, y, score;

    explicit ViewGroup(std::size_t n = 0) { resize(n); }
    void resize(std::size_t n) {
        x.assign(n, 0.0);
        y.assign(n, 0.0);
        score.assign(n, 0.0);
    }
    std::size_t size() const { return x.size(); }
};

struct ViewFrame2D {
    View view = View::frontal;
    int64_t frame_index = 0;  // source-video frame number
    ViewGroup body{0};
    ViewGroup face{0};
    ViewGroup left_hand{0};
    ViewGroup right_hand{0};

    ViewGroup& group(Group g);
    const ViewGroup& group(Group g) const;
};

enum class Hand : uint8_t { left, right };

inline Hand other_hand(Hand h) {
    return h == Hand::left ? Hand::right : Hand::left;
}

struct AnnotationRecord {
    SampleMeta meta;
    std::string initial_handshape;
    std::string final_handshape;
    Hand dominant_hand = Hand::right;
    bool dominant_specified = false;
};

// The canonical handshape inventory; annotation rows using codes outside it
// are skipped at load.
class HandshapeCatalog {
public:
    static const HandshapeCatalog& builtin();
    static HandshapeCatalog load(const std::string& path);

    bool contains(std::string_view code) const;
    std::size_t size() const { return codes_.size(); }

private:
    std::vector<std::string> codes_;
};

struct AnnotationLoad {
    std::vector<AnnotationRecord> records;
    std::size_t skipped = 0;            // rows dropped (unknown handshape etc.)
    std::vector<std::string> warnings;  // one line per skipped/defaulted row
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Parses one pose-estimation document. Accepted layouts:
//   * per-frame estimator output: {"people": [{"pose_keypoints_2d": [...], ...}]}
//   * a bare frame object with the *_keypoints_2d keys at top level
//   * per-video document: {"frames": [{"frame_index": n, "pose_keypoints_2d": ...}, ...]}
// The keypoint arrays are flat [x, y, score, ...] triples. Absent groups are
// zero-filled with score 0; present groups must match the role table sizes.
// Throws MalformedDocument / WrongCardinality.
std::vector<ViewFrame2D> parse_view_frames(std::string_view document, View view,
                                           const RoleTable& roles = RoleTable::builtin());

// Loads a view from `path`: either a per-video document file, or a directory
// of per-frame documents (ordered by the trailing number in each filename,
// which also provides the frame index).
std::vector<ViewFrame2D> load_view(const std::filesystem::path& path, View view,
                                   const RoleTable& roles = RoleTable::builtin());

// Re-emits frames in the per-video document layout with shortest round-trip
// numbers, so parse(emit(frames)) preserves every (x, y, score) bit-exactly.
std::string emit_view_document(std::span<const ViewFrame2D> frames);

// Loads the annotation catalog: delimited text (tab or comma, sniffed from
// the header row), required columns label, session, scene, consultant,
// frame_start, frame_end, initial_handshape, final_handshape and optional
// dominant_hand. Rows with handshape codes outside the catalog are skipped
// and counted. Throws MalformedCatalog on structural problems.
AnnotationLoad load_annotations(const std::filesystem::path& path,
                                const HandshapeCatalog& catalog = HandshapeCatalog::builtin());

AnnotationLoad parse_annotations(std::string_view text,
                                 const HandshapeCatalog& catalog = HandshapeCatalog::builtin());

// Keeps every stride-th frame starting from the first, where
// stride = source_fps / target_fps must divide evenly (NonIntegerStride).
std::vector<ViewFrame2D> downsample_frames(std::span<const ViewFrame2D> frames, int source_fps,
                                           int target_fps);

struct FramePair {
    ViewFrame2D front;
    ViewFrame2D side;
};

// Slices [meta.frame_start, meta.frame_end] from both views, downsamples each
// with the stride anchored at frame_start, and pairs by position. Throws
// ViewOutOfRange when a view does not cover the segment and LengthMismatch
// when the views disagree inside it (corrupted capture).
std::vector<FramePair> segment_and_pair(std::span<const ViewFrame2D> frontal,
                                        std::span<const ViewFrame2D> side,
                                        const AnnotationRecord& rec, int source_fps,
                                        int target_fps);

}  // namespace signpipe
