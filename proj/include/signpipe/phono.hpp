#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signpipe/ingest.hpp"
#include "signpipe/model.hpp"
#include "signpipe/roles.hpp"

namespace signpipe {

// Landmark slots and the classification threshold for attribute extraction.
// The defaults follow the upstream estimator's 21-point hand model and
// 70-point face model; remap them when using a different estimator.
struct PhonoConfig {
    double threshold_k = 0.30;  // direction components must exceed this (strictly)

    // hand plane landmarks: wrist W, little-finger base L, index-finger
    // base I; movement tracks the middle-finger base M
    std::size_t wrist_index = 0;
    std::size_t little_base_index = 17;
    std::size_t index_base_index = 5;
    std::size_t middle_base_index = 9;

    // lip landmarks: labiale superius/inferius, right/left cheilion
    std::size_t lip_upper_index = 51;
    std::size_t lip_lower_index = 57;
    std::size_t mouth_right_index = 54;
    std::size_t mouth_left_index = 48;

    // Throws std::invalid_argument on a non-positive threshold or indices
    // outside the role table's group sizes.
    void validate(const RoleTable& roles = RoleTable::builtin()) const;
};

inline Group hand_group(Hand h) {
    return h == Hand::left ? Group::left_hand : Group::right_hand;
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

// Normal of the palm plane spanned by wrist W, little-finger base L and
// index-finger base I. The cross-product order differs per hand so the
// normal leaves the palm on both:
//   left:  (I - W) x (L - W)
//   right: (L - W) x (I - W)
// The raw (unnormalized) product is returned. Throws DegeneratePlane when
// its magnitude is under 1e-9 (collinear or coincident landmarks).
Vector3 palm_normal(const Vector3& W, const Vector3& L, const Vector3& I, Hand side);

// Labels each axis whose component exceeds k strictly, in normalized image
// coordinates (x grows leftward from the viewer, y grows downward, z toward
// the frontal camera):
//   x < -k: right   x > k: left
//   y < -k: up      y > k: down
//   z < -k: body    z > k: front
DirectionSet classify_direction(const Vector3& v, double k);

// Displacement of the tracked keypoint between consecutive frames.
Vector3 motion_vector(const Vector3& M_t, const Vector3& M_prev);

// Splits n_frames into an initial and a final half (initial gets the extra
// frame when n is odd) and assigns the annotated handshape codes.
std::vector<std::string> assign_handshapes(std::size_t n_frames, const std::string& initial,
                                           const std::string& final_code);

// Vermilion-height-to-mouth-width ratio d(LS, LI) / d(CH_r, CH_l).
// Throws DegenerateMouth when the mouth width is under 1e-9.
double mouth_opening(const Vector3& LS, const Vector3& LI, const Vector3& CH_r,
                     const Vector3& CH_l);

// Mean of the involved keypoint scores; any missing input (score 0) caps the
// result at 0.
double attribute_score(std::span<const double> involved);

// Computes every per-frame attribute of a normalized sample. Degenerate
// geometry or missing keypoints degrade the affected attribute to value
// "none" (0.0 for mouth) with score 0 instead of failing the sample.
// Throws InvalidAnnotation when rec does not belong to this sample.
PhonoSample extract_phono(const Sample3D& sample, const AnnotationRecord& rec,
                          const PhonoConfig& cfg = {});

// ---------------------------------------------------------------------------
// Phonological dataset documents
// ---------------------------------------------------------------------------

// One JSON document per sample: metadata fields, then per-frame attribute
// records each holding value and score. Fixed 6-decimal numbers.
std::string emit_phono_document(const PhonoSample& sample);

// Strict inverse of emit_phono_document. Orientation and movement values
// must be canonical direction strings. Throws MalformedDocument.
PhonoSample parse_phono_document(std::string_view document);

}  // namespace signpipe
