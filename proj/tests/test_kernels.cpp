#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "signpipe/kernels.hpp"

using namespace signpipe;

namespace {

struct Arrays {
    std::vector<double> fx, fy, fs, sx, ss;
    std::vector<double> ox, oy, oz, os;

    explicit Arrays(std::size_t n)
        : fx(n), fy(n), fs(n), sx(n), ss(n), ox(n), oy(n), oz(n), os(n) {}
};

// Deterministic input mix: valid joints, score ties, exact-threshold scores,
// zero/negative scores.
Arrays random_arrays(std::size_t n, uint64_t seed, double min_score) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng()) / double(rng.max()); };
    Arrays a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.fx[i] = unit() * 2000.0 - 500.0;
        a.fy[i] = unit() * 2000.0 - 500.0;
        a.sx[i] = unit() * 2000.0 - 500.0;
        switch (rng() % 5) {
            case 0: a.fs[i] = 0.0; break;
            case 1: a.fs[i] = min_score; break;  // boundary: kept (>=)
            default: a.fs[i] = unit(); break;
        }
        switch (rng() % 5) {
            case 0: a.ss[i] = 0.0; break;
            case 1: a.ss[i] = a.fs[i]; break;  // tie
            default: a.ss[i] = unit(); break;
        }
    }
    return a;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("fuse scalar semantics") {
    const double fx[] = {10.0, 20.0, 30.0, 40.0};
    const double fy[] = {1.0, 2.0, 3.0, 4.0};
    const double fs[] = {0.9, 0.4, 0.0, 0.25};
    const double sx[] = {100.0, 200.0, 300.0, 400.0};
    const double ss[] = {0.8, 0.6, 0.7, 0.25};
    double ox[4], oy[4], oz[4], os[4];

    kernels::detail::fuse_scalar(fx, fy, fs, sx, ss, 4, -0.5, 0.3, ox, oy, oz, os);

    // joint 0: min(0.9, 0.8) = 0.8 >= 0.3, kept; z = 100 * -0.5
    CHECK(ox[0] == 10.0);
    CHECK(oy[0] == 1.0);
    CHECK(oz[0] == -50.0);
    CHECK(os[0] == 0.8);
    // joint 1: min = 0.4 kept
    CHECK(os[1] == 0.4);
    CHECK(oz[1] == -100.0);
    // joint 2: frontal missing -> dropped
    CHECK(ox[2] == 0.0);
    CHECK(oy[2] == 0.0);
    CHECK(oz[2] == 0.0);
    CHECK(os[2] == 0.0);
    // joint 3: min = 0.25 < 0.3 -> dropped
    CHECK(os[3] == 0.0);
    CHECK(ox[3] == 0.0);
}

TEST_CASE("fuse keeps scores exactly at the threshold") {
    const double fx[] = {1.0}, fy[] = {2.0}, fs[] = {0.3}, sx[] = {3.0}, ss[] = {0.5};
    double ox[1], oy[1], oz[1], os[1];
    kernels::detail::fuse_scalar(fx, fy, fs, sx, ss, 1, 1.0, 0.3, ox, oy, oz, os);
    CHECK(os[0] == 0.3);
    CHECK(ox[0] == 1.0);
}

TEST_CASE("fuse with min_score 0 still drops score-0 joints") {
    const double fx[] = {1.0}, fy[] = {2.0}, fs[] = {0.0}, sx[] = {3.0}, ss[] = {0.9};
    double ox[1], oy[1], oz[1], os[1];
    kernels::detail::fuse_scalar(fx, fy, fs, sx, ss, 1, 1.0, 0.0, ox, oy, oz, os);
    CHECK(os[0] == 0.0);
    CHECK(oz[0] == 0.0);
}

TEST_CASE("scale scalar semantics") {
    double x[] = {2.0, 4.0, 0.0};
    double y[] = {-2.0, 8.0, 0.0};
    double z[] = {1.0, -1.0, 0.0};
    kernels::detail::scale_scalar(x, y, z, 3, 2.0);
    CHECK(x[0] == 1.0);
    CHECK(y[0] == -1.0);
    CHECK(z[0] == 0.5);
    CHECK(x[1] == 2.0);
    CHECK(x[2] == 0.0);  // missing joints stay at the origin
}

TEST_CASE("isa names") {
    CHECK(kernels::isa_name(kernels::Isa::scalar) == "scalar");
    CHECK(kernels::isa_name(kernels::Isa::avx2) == "avx2");
}

#if defined(SIGNPIPE_HAVE_AVX2)
TEST_CASE("avx2 variants are bit-exact against scalar") {
    if (kernels::best_supported() != kernels::Isa::avx2) {
        MESSAGE("host has no AVX2; skipping equivalence check");
        return;
    }
    // lengths around the 4-lane boundary plus larger blocks
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 16u, 67u, 137u, 1024u}) {
        for (uint64_t seed : {1u, 2u, 3u}) {
            const double min_score = seed == 3 ? 0.0 : 0.3;
            Arrays in = random_arrays(n, 1000 * seed + n, min_score);

            Arrays ref = in;
            kernels::detail::fuse_scalar(in.fx.data(), in.fy.data(), in.fs.data(), in.sx.data(),
                                         in.ss.data(), n, -0.731, min_score, ref.ox.data(),
                                         ref.oy.data(), ref.oz.data(), ref.os.data());
            Arrays vec = in;
            kernels::detail::fuse_avx2(in.fx.data(), in.fy.data(), in.fs.data(), in.sx.data(),
                                       in.ss.data(), n, -0.731, min_score, vec.ox.data(),
                                       vec.oy.data(), vec.oz.data(), vec.os.data());
            CHECK(bits_equal(ref.ox, vec.ox));
            CHECK(bits_equal(ref.oy, vec.oy));
            CHECK(bits_equal(ref.oz, vec.oz));
            CHECK(bits_equal(ref.os, vec.os));

            // scale: reuse fused outputs as coordinates
            std::vector<double> xs = ref.ox, ys = ref.oy, zs = ref.oz;
            std::vector<double> xv = xs, yv = ys, zv = zs;
            kernels::detail::scale_scalar(xs.data(), ys.data(), zs.data(), n, 173.25);
            kernels::detail::scale_avx2(xv.data(), yv.data(), zv.data(), n, 173.25);
            CHECK(bits_equal(xs, xv));
            CHECK(bits_equal(ys, yv));
            CHECK(bits_equal(zs, zv));
        }
    }
}
#endif

TEST_CASE("set_isa switches the active variant") {
    REQUIRE(kernels::set_isa(kernels::Isa::scalar));
    CHECK(kernels::active_isa() == kernels::Isa::scalar);

    const double fx[] = {1.0}, fy[] = {2.0}, fs[] = {0.9}, sx[] = {4.0}, ss[] = {0.8};
    double ox[1], oy[1], oz[1], os[1];
    kernels::fuse(fx, fy, fs, sx, ss, 1, 2.0, 0.3, ox, oy, oz, os);
    CHECK(oz[0] == 8.0);
    CHECK(os[0] == 0.8);

    if (kernels::best_supported() == kernels::Isa::avx2) {
        REQUIRE(kernels::set_isa(kernels::Isa::avx2));
        CHECK(kernels::active_isa() == kernels::Isa::avx2);
        double ox2[1], oy2[1], oz2[1], os2[1];
        kernels::fuse(fx, fy, fs, sx, ss, 1, 2.0, 0.3, ox2, oy2, oz2, os2);
        CHECK(ox2[0] == ox[0]);
        CHECK(oz2[0] == oz[0]);
    }
    kernels::set_isa(kernels::best_supported());
}
