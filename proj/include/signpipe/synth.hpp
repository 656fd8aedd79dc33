#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "signpipe/ingest.hpp"
#include "signpipe/model.hpp"
#include "signpipe/phono.hpp"
#include "signpipe/roles.hpp"

namespace signpipe {

// Scripted ground truth for one hand across a sample.
struct HandScript {
    // Unit palm-normal target per frame, in normalized skeleton coordinates.
    std::vector<Vector3> palm_normals;
    // Displacement into each frame, in shoulder-width units. Element 0 is
    // ignored (the first frame has no predecessor).
    std::vector<Vector3> displacements;
};

// A complete forward-model script: the generator constructs 3D keypoints
// realizing these targets, projects them to the frontal and side camera
// views at pixel scale, and returns the exact attribute values the pipeline
// must recover from those projections.
//
// Feasibility rule: every palm-normal and displacement component must stay
// at least `margin` away from the classification threshold on either side
// (|c| <= k - margin or |c| >= k + margin), so recovery can never flip at a
// threshold boundary. With jitter_amplitude = 0 recovery is exact by
// construction.
struct MotionScript {
    std::size_t n_frames = 0;
    double shoulder_width_px = 640.0;

    HandScript dominant;
    HandScript non_dominant;
    std::vector<double> mouth_ratios;  // one per frame, >= 0

    std::string initial_handshape;
    std::string final_handshape;
    Hand dominant_hand = Hand::right;

    // label/session/scene/consultant are taken from here; frame_start is the
    // source-video index of the first emitted frame and frame_end is derived
    // as frame_start + (n_frames - 1) * source_stride.
    SampleMeta meta;
    int source_stride = 20;  // source frames between emitted frames (60 -> 3 fps)

    uint64_t seed = 0;             // drives jitter noise only
    double jitter_amplitude = 0.0;  // uniform pixel noise in [-a, a), both views

    double threshold_k = 0.30;
    double margin = 0.05;
};

struct GeneratedSample {
    std::vector<ViewFrame2D> frontal;
    std::vector<ViewFrame2D> side;
    AnnotationRecord annotation;
    PhonoSample expected;
};

// Validates the script and builds the dual-view projections plus the
// expected phonological sample. Throws InfeasibleScript on an invalid or
// margin-violating script (zero-magnitude normals included).
GeneratedSample generate_sample(const MotionScript& script,
                                const RoleTable& roles = RoleTable::builtin());

// Orthonormal palm-plane edges (u, v) with u x v equal to the unit normal n;
// the generator places the little-finger and index-finger bases one
// shoulder-width from the wrist along these, so the raw cross product the
// pipeline computes is the unit target itself. Exposed for tests.
void palm_basis(const Vector3& n, Vector3& u, Vector3& v);

// Draws a margin-respecting script: 1..max_frames frames, mixed single and
// compound directions, mouth ratios on a 1/1000 grid, handshape codes from
// the builtin catalog. Same seed, same script.
MotionScript random_script(uint64_t seed, std::size_t max_frames = 12);

struct SynthOptions {
    std::size_t n_samples = 100;
    uint64_t seed = 0;
    double shoulder_width_px = 640.0;
    int source_stride = 20;
    double jitter_amplitude = 0.0;
    std::size_t max_frames = 12;
};

// Writes a self-contained corpus under out_dir:
//   front/<session>__<scene>.json   per-video frontal pose documents
//   side/<session>__<scene>.json    per-video side pose documents
//   annotations.csv                 one row per sample
//   expected/<sample_id>.json       ground-truth phonological documents
// Sample ids are s00000, s00001, ... in annotation order; each sample gets
// its own video (session s<id>, scene "take"). Deterministic: the same
// options produce byte-identical trees.
void write_synth_corpus(const std::filesystem::path& out_dir, const SynthOptions& opt);

}  // namespace signpipe
