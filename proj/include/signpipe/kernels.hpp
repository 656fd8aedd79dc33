#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops of the pipeline, running over the SoA keypoint
// arrays (x/y/z/score). Scalar reference implementations and AVX2 variants
// produce bit-identical results; the active variant is picked at runtime
// from CPU features and can be overridden with SIGNPIPE_KERNELS=scalar|avx2
// or kernels::set_isa().

namespace signpipe::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// Combines one keypoint group seen from the frontal and side views into 3D,
// elementwise:
//   score = min(front_score, side_score)
//   keep  = score > 0 && score >= min_score
//   out   = keep ? (front_x, front_y, side_x * z_scale_signed, score) : zeros
// z_scale_signed carries both the cross-view scale and the side-camera sign.
void fuse(const double* front_x, const double* front_y, const double* front_score,
          const double* side_x, const double* side_score, std::size_t n,
          double z_scale_signed, double min_score,
          double* out_x, double* out_y, double* out_z, double* out_score);

// Divides the three coordinate arrays elementwise by width, in place.
// Missing joints stay at zero (0/width == 0).
void scale(double* x, double* y, double* z, std::size_t n, double width);

// Active variant. Resolved once on first kernel call: the SIGNPIPE_KERNELS
// environment variable if set, otherwise the best ISA the CPU supports.
Isa active_isa();

// Forces a variant (tests). Returns false if the host cannot run it.
bool set_isa(Isa isa);

Isa best_supported();

namespace detail {

void fuse_scalar(const double* front_x, const double* front_y, const double* front_score,
                 const double* side_x, const double* side_score, std::size_t n,
                 double z_scale_signed, double min_score,
                 double* out_x, double* out_y, double* out_z, double* out_score);
void scale_scalar(double* x, double* y, double* z, std::size_t n, double width);

#if defined(SIGNPIPE_HAVE_AVX2)
void fuse_avx2(const double* front_x, const double* front_y, const double* front_score,
               const double* side_x, const double* side_score, std::size_t n,
               double z_scale_signed, double min_score,
               double* out_x, double* out_y, double* out_z, double* out_score);
void scale_avx2(double* x, double* y, double* z, std::size_t n, double width);
#endif

}  // namespace detail

}  // namespace signpipe::kernels
