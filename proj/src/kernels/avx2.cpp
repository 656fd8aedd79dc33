#include "signpipe/kernels.hpp"

#if defined(SIGNPIPE_HAVE_AVX2)

#include <immintrin.h>

namespace signpipe::kernels::detail {

// Same elementwise semantics as the scalar kernels; min/mul/div/compare are
// exact IEEE ops so results are bit-identical.

void fuse_avx2(const double* front_x, const double* front_y, const double* front_score,
               const double* side_x, const double* side_score, std::size_t n,
               double z_scale_signed, double min_score,
               double* out_x, double* out_y, double* out_z, double* out_score) {
    const std::size_t n_vec = n & ~std::size_t{3};
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vzscale = _mm256_set1_pd(z_scale_signed);
    const __m256d vmin = _mm256_set1_pd(min_score);

    for (std::size_t i = 0; i < n_vec; i += 4) {
        const __m256d fs = _mm256_loadu_pd(front_score + i);
        const __m256d ss = _mm256_loadu_pd(side_score + i);
        const __m256d sc = _mm256_min_pd(fs, ss);

        const __m256d keep = _mm256_and_pd(_mm256_cmp_pd(sc, vzero, _CMP_GT_OQ),
                                           _mm256_cmp_pd(sc, vmin, _CMP_GE_OQ));

        const __m256d ox = _mm256_and_pd(keep, _mm256_loadu_pd(front_x + i));
        const __m256d oy = _mm256_and_pd(keep, _mm256_loadu_pd(front_y + i));
        const __m256d oz =
            _mm256_and_pd(keep, _mm256_mul_pd(_mm256_loadu_pd(side_x + i), vzscale));
        const __m256d osc = _mm256_and_pd(keep, sc);

        _mm256_storeu_pd(out_x + i, ox);
        _mm256_storeu_pd(out_y + i, oy);
        _mm256_storeu_pd(out_z + i, oz);
        _mm256_storeu_pd(out_score + i, osc);
    }

    if (n_vec != n)
        fuse_scalar(front_x + n_vec, front_y + n_vec, front_score + n_vec, side_x + n_vec,
                    side_score + n_vec, n - n_vec, z_scale_signed, min_score, out_x + n_vec,
                    out_y + n_vec, out_z + n_vec, out_score + n_vec);
}

void scale_avx2(double* x, double* y, double* z, std::size_t n, double width) {
    const std::size_t n_vec = n & ~std::size_t{3};
    const __m256d vw = _mm256_set1_pd(width);

    for (std::size_t i = 0; i < n_vec; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_div_pd(_mm256_loadu_pd(x + i), vw));
        _mm256_storeu_pd(y + i, _mm256_div_pd(_mm256_loadu_pd(y + i), vw));
        _mm256_storeu_pd(z + i, _mm256_div_pd(_mm256_loadu_pd(z + i), vw));
    }

    if (n_vec != n) scale_scalar(x + n_vec, y + n_vec, z + n_vec, n - n_vec, width);
}

}  // namespace signpipe::kernels::detail

#endif  // SIGNPIPE_HAVE_AVX2
