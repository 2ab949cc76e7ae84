#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ffl/filters.hpp"
#include "ffl/spectral.hpp"
#include "oracles.hpp"

using ffl::ImageTensor;
using ffl::SpectralMask;
using ffl::Spectrum;

namespace {

// Shifted-frame amplitude of one channel, for band-energy checks.
ImageTensor shifted_amplitude(const ImageTensor& img) {
    return ffl::amplitude(ffl::fftshift(ffl::dft2(img, true)));
}

double center_dist(int v, int u, int h, int w) {
    const double dv = v - h / 2;
    const double du = u - w / 2;
    return std::sqrt(dv * dv + du * du);
}

}  // namespace

TEST_CASE("lowpass keeps a disk around the center") {
    const SpectralMask m = ffl::make_lowpass(9, 9, 2.0);
    for (int v = 0; v < 9; ++v) {
        for (int u = 0; u < 9; ++u) {
            const bool inside = center_dist(v, u, 9, 9) <= 2.0;
            CHECK(m.at(v, u) == (inside ? 1.0 : 0.0));
        }
    }
    CHECK(m.at(4, 4) == 1.0);  // DC
    CHECK(m.at(4, 6) == 1.0);  // boundary distance exactly 2
    CHECK(m.at(0, 0) == 0.0);
}

TEST_CASE("highpass is the complement except on the boundary") {
    const SpectralMask lo = ffl::make_lowpass(8, 10, 3.0);
    const SpectralMask hi = ffl::make_highpass(8, 10, 3.0);
    for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 10; ++u) {
            const double d = center_dist(v, u, 8, 10);
            if (d == 3.0) {
                CHECK(lo.at(v, u) == 1.0);
                CHECK(hi.at(v, u) == 1.0);
            } else {
                CHECK(lo.at(v, u) + hi.at(v, u) == 1.0);
            }
        }
    }
}

TEST_CASE("bandstop zeroes exactly the closed annulus") {
    const SpectralMask m = ffl::make_bandstop(9, 9, 2.0, 4.0);
    for (int v = 0; v < 9; ++v) {
        for (int u = 0; u < 9; ++u) {
            const double d = center_dist(v, u, 9, 9);
            const bool stopped = d >= 2.0 && d <= 4.0;
            CHECK(m.at(v, u) == (stopped ? 0.0 : 1.0));
        }
    }
    CHECK(m.at(4, 4) == 1.0);  // DC survives
}

TEST_CASE("notch zeroes only the listed coordinates") {
    const SpectralMask m = ffl::make_notch(5, 6, {{2, 3}, {0, 0}});
    int zeros = 0;
    for (double v : m.values) zeros += v == 0.0 ? 1 : 0;
    CHECK(zeros == 2);
    CHECK(m.at(2, 3) == 0.0);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(1, 1) == 1.0);
}

TEST_CASE("mask factories reject bad parameters") {
    CHECK_THROWS_AS((void)ffl::make_lowpass(0, 4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ffl::make_lowpass(4, 4, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ffl::make_bandstop(4, 4, 3.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ffl::make_bandstop(4, 4, -1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ffl::make_notch(4, 4, {{4, 0}}), std::invalid_argument);
    CHECK_THROWS_AS((void)ffl::make_notch(4, 4, {{0, -1}}), std::invalid_argument);
}

TEST_CASE("all-pass filtering reproduces the image") {
    ffl::Rng rng(60);
    const ImageTensor img = oracle::random_image(8, 7, 2, rng);
    const ImageTensor out = ffl::apply_filter(img, ffl::make_lowpass(8, 7, 100.0));
    CHECK(oracle::max_abs_diff(img.values, out.values) < 1e-12);
}

TEST_CASE("DC notch removes the mean exactly") {
    // power-of-two path: butterflies cancel a constant exactly, so the result
    // is bitwise zero
    ImageTensor img(8, 8, 1, 0.37);
    const ImageTensor out = ffl::apply_filter(img, ffl::make_notch(8, 8, {{4, 4}}));
    for (double v : out.values) CHECK(v == 0.0);

    ffl::Rng rng(61);
    const ImageTensor tex = oracle::random_image(6, 6, 1, rng);
    double mean = 0.0;
    for (double v : tex.values) mean += v;
    mean /= 36.0;
    const ImageTensor detrended = ffl::apply_filter(tex, ffl::make_notch(6, 6, {{3, 3}}));
    for (std::size_t i = 0; i < tex.values.size(); ++i) {
        CHECK(detrended.values[i] == doctest::Approx(tex.values[i] - mean).epsilon(1e-10));
    }
}

TEST_CASE("lowpass output carries no energy outside the radius") {
    ffl::Rng rng(62);
    const ImageTensor img = oracle::random_image(16, 16, 1, rng);
    const double radius = 3.5;
    const ImageTensor out = ffl::apply_filter(img, ffl::make_lowpass(16, 16, radius));
    const ImageTensor amp = shifted_amplitude(out);
    for (int v = 0; v < 16; ++v) {
        for (int u = 0; u < 16; ++u) {
            if (center_dist(v, u, 16, 16) > radius) {
                CHECK(amp.at(v, u, 0) < 1e-9);
            }
        }
    }
}

TEST_CASE("bandstop output carries no energy inside the annulus") {
    ffl::Rng rng(63);
    const ImageTensor img = oracle::random_image(12, 12, 3, rng);
    const ImageTensor out = ffl::apply_filter(img, ffl::make_bandstop(12, 12, 2.0, 4.0));
    for (int c = 0; c < 3; ++c) {
        ImageTensor chan(12, 12, 1);
        for (int y = 0; y < 12; ++y) {
            for (int x = 0; x < 12; ++x) chan.at(y, x, 0) = out.at(y, x, c);
        }
        const ImageTensor amp = shifted_amplitude(chan);
        for (int v = 0; v < 12; ++v) {
            for (int u = 0; u < 12; ++u) {
                const double d = center_dist(v, u, 12, 12);
                if (d >= 2.0 && d <= 4.0) CHECK(amp.at(v, u, 0) < 1e-9);
            }
        }
    }
}

TEST_CASE("filtering is idempotent") {
    ffl::Rng rng(64);
    const ImageTensor img = oracle::random_image(10, 10, 1, rng);
    const SpectralMask m = ffl::make_lowpass(10, 10, 2.5);
    const ImageTensor once = ffl::apply_filter(img, m);
    const ImageTensor twice = ffl::apply_filter(once, m);
    CHECK(oracle::max_abs_diff(once.values, twice.values) < 1e-10);
}

TEST_CASE("filtering is linear") {
    ffl::Rng rng(65);
    const ImageTensor a = oracle::random_image(8, 8, 1, rng);
    const ImageTensor b = oracle::random_image(8, 8, 1, rng);
    ImageTensor combo(8, 8, 1);
    for (std::size_t i = 0; i < combo.values.size(); ++i) {
        combo.values[i] = 2.0 * a.values[i] - 0.5 * b.values[i];
    }
    const SpectralMask m = ffl::make_highpass(8, 8, 2.0);
    const ImageTensor fa = ffl::apply_filter(a, m);
    const ImageTensor fb = ffl::apply_filter(b, m);
    const ImageTensor fc = ffl::apply_filter(combo, m);
    for (std::size_t i = 0; i < fc.values.size(); ++i) {
        CHECK(fc.values[i] ==
              doctest::Approx(2.0 * fa.values[i] - 0.5 * fb.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("lowpass then highpass at the same radius double-keeps the boundary") {
    // complementary masks reassemble the image up to the shared boundary ring
    ffl::Rng rng(66);
    const ImageTensor img = oracle::random_image(8, 8, 1, rng);
    const double radius = 2.3;  // irrational-ish: no lattice point lands on it
    const ImageTensor lo = ffl::apply_filter(img, ffl::make_lowpass(8, 8, radius));
    const ImageTensor hi = ffl::apply_filter(img, ffl::make_highpass(8, 8, radius));
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        CHECK(lo.values[i] + hi.values[i] == doctest::Approx(img.values[i]).epsilon(1e-10));
    }
}

TEST_CASE("apply_filter validates shapes") {
    ffl::Rng rng(67);
    const ImageTensor img = oracle::random_image(8, 8, 1, rng);
    CHECK_THROWS_AS((void)ffl::apply_filter(img, ffl::make_lowpass(8, 9, 2.0)),
                    std::invalid_argument);
}
