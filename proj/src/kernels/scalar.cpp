#include "signpipe/kernels.hpp"

namespace signpipe::kernels::detail {

void fuse_scalar(const double* front_x, const double* front_y, const double* front_score,
                 const double* side_x, const double* side_score, std::size_t n,
                 double z_scale_signed, double min_score,
                 double* out_x, double* out_y, double* out_z, double* out_score) {
    for (std::size_t i = 0; i < n; ++i) {
        const double fs = front_score[i];
        const double ss = side_score[i];
        const double sc = fs < ss ? fs : ss;
        if (sc > 0.0 && sc >= min_score) {
            out_x[i] = front_x[i];
            out_y[i] = front_y[i];
            out_z[i] = side_x[i] * z_scale_signed;
            out_score[i] = sc;
        } else {
            out_x[i] = 0.0;
            out_y[i] = 0.0;
            out_z[i] = 0.0;
            out_score[i] = 0.0;
        }
    }
}

void scale_scalar(double* x, double* y, double* z, std::size_t n, double width) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] /= width;
        y[i] /= width;
        z[i] /= width;
    }
}

}  // namespace signpipe::kernels::detail
