#include "signpipe/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace signpipe::kernels {

namespace {

using FuseFn = void (*)(const double*, const double*, const double*, const double*,
                        const double*, std::size_t, double, double, double*, double*, double*,
                        double*);
using ScaleFn = void (*)(double*, double*, double*, std::size_t, double);

struct Table {
    Isa isa;
    FuseFn fuse;
    ScaleFn scale;
};

constexpr Table kScalarTable{Isa::scalar, detail::fuse_scalar, detail::scale_scalar};
#if defined(SIGNPIPE_HAVE_AVX2)
constexpr Table kAvx2Table{Isa::avx2, detail::fuse_avx2, detail::scale_avx2};
#endif

bool host_supports(Isa isa) {
    if (isa == Isa::scalar) return true;
#if defined(SIGNPIPE_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const Table* table_for(Isa isa) {
#if defined(SIGNPIPE_HAVE_AVX2)
    if (isa == Isa::avx2) return &kAvx2Table;
#endif
    (void)isa;
    return &kScalarTable;
}

std::atomic<const Table*> g_active{nullptr};

const Table* resolve() {
    Isa isa = best_supported();
    if (const char* env = std::getenv("SIGNPIPE_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) isa = Isa::scalar;
        else if (std::strcmp(env, "avx2") == 0 && host_supports(Isa::avx2)) isa = Isa::avx2;
    }
    return table_for(isa);
}

const Table* active() {
    const Table* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = resolve();
        g_active.store(t, std::memory_order_release);
    }
    return t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

Isa best_supported() {
    return host_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() {
    return active()->isa;
}

bool set_isa(Isa isa) {
    if (!host_supports(isa)) return false;
    g_active.store(table_for(isa), std::memory_order_release);
    return true;
}

void fuse(const double* front_x, const double* front_y, const double* front_score,
          const double* side_x, const double* side_score, std::size_t n, double z_scale_signed,
          double min_score, double* out_x, double* out_y, double* out_z, double* out_score) {
    active()->fuse(front_x, front_y, front_score, side_x, side_score, n, z_scale_signed,
                   min_score, out_x, out_y, out_z, out_score);
}

void scale(double* x, double* y, double* z, std::size_t n, double width) {
    active()->scale(x, y, z, n, width);
}

}  // namespace signpipe::kernels
