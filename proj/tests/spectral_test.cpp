#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ffl/spectral.hpp"
#include "oracles.hpp"

using ffl::ImageTensor;
using ffl::Spectrum;

namespace {

double max_abs_spec_diff(const Spectrum& a, const Spectrum& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("constant 2x2 image concentrates at DC") {
    ImageTensor ones(2, 2, 1, 1.0);
    const Spectrum s = ffl::dft2(ones, true);
    CHECK(s.at(0, 0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(s.at(0, 1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(s.at(1, 0, 0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(s.at(1, 1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("2x2 impulse spreads evenly") {
    ImageTensor impulse(2, 2, 1);
    impulse.at(0, 0, 0) = 1.0;
    const Spectrum s = ffl::dft2(impulse, true);
    for (int v = 0; v < 2; ++v) {
        for (int u = 0; u < 2; ++u) {
            CHECK(s.at(v, u, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(s.at(v, u, 0).imag() == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("forward transform matches direct summation on small sizes") {
    ffl::Rng rng(11);
    for (int h = 1; h <= 8; ++h) {
        for (int w = 1; w <= 8; ++w) {
            const ImageTensor img = oracle::random_image(h, w, 2, rng);
            CHECK(max_abs_spec_diff(ffl::dft2(img, true), oracle::naive_dft2(img, true)) <
                  1e-9);
            CHECK(max_abs_spec_diff(ffl::dft2(img, false), oracle::naive_dft2(img, false)) <
                  1e-9);
        }
    }
}

TEST_CASE("non-power-of-two sizes go through the chirp path correctly") {
    ffl::Rng rng(12);
    for (int n : {3, 5, 6, 7, 12, 15, 31}) {
        const ImageTensor img = oracle::random_image(n, n, 1, rng);
        CHECK(max_abs_spec_diff(ffl::dft2(img, true), oracle::naive_dft2(img, true)) < 1e-9);
    }
}

TEST_CASE("conjugate symmetry for real input") {
    ffl::Rng rng(13);
    const ImageTensor img = oracle::random_image(4, 4, 1, rng);
    const Spectrum s = ffl::dft2(img, true);
    for (int v = 0; v < 4; ++v) {
        for (int u = 0; u < 4; ++u) {
            const std::complex<double> a = s.at(v, u, 0);
            const std::complex<double> b = std::conj(s.at((4 - v) % 4, (4 - u) % 4, 0));
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
}

TEST_CASE("round trips are the identity") {
    ffl::Rng rng(14);
    for (int n : {8, 7}) {
        const ImageTensor img = oracle::random_image(n, n, 3, rng, -1.0, 1.0);
        const ImageTensor back_ortho = ffl::idft2(ffl::dft2(img, true));
        const ImageTensor back_raw = ffl::idft2(ffl::dft2(img, false));
        const ImageTensor back_dct = ffl::idct2(ffl::dct2(img));
        for (std::size_t i = 0; i < img.values.size(); ++i) {
            CHECK(std::abs(back_ortho.values[i] - img.values[i]) < 1e-6);
            CHECK(std::abs(back_raw.values[i] - img.values[i]) < 1e-6);
            CHECK(std::abs(back_dct.values[i] - img.values[i]) < 1e-6);
        }
    }
}

TEST_CASE("inverse of a DC-only spectrum is constant") {
    Spectrum s(2, 2, 1, true);
    s.at(0, 0, 0) = 2.0;
    const ImageTensor img = ffl::idft2(s);
    for (double v : img.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse of a flat spectrum is an impulse") {
    Spectrum s(2, 2, 1, true);
    for (auto& z : s.values) z = 0.5;
    const ImageTensor img = ffl::idft2(s);
    CHECK(img.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(img.at(0, 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(img.at(1, 0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(img.at(1, 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    // cross-check against the direct inverse summation
    const ImageTensor ref = oracle::naive_idft2(s);
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        CHECK(img.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("inverse rejects spectra with a large imaginary residue") {
    Spectrum s(4, 4, 1, true);
    s.at(1, 2, 0) = {0.0, 3.0};  // breaks conjugate symmetry
    CHECK_THROWS_AS((void)ffl::idft2(s), std::invalid_argument);
}

TEST_CASE("non-finite input is rejected with the offending index") {
    ImageTensor img(2, 3, 1, 0.0);
    img.at(1, 2, 0) = std::nan("");
    try {
        (void)ffl::dft2(img, true);
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("(1, 2, 0)") != std::string::npos);
    }
}

TEST_CASE("DCT matches direct summation and keeps energy") {
    ffl::Rng rng(15);
    for (int h : {2, 5, 8}) {
        for (int w : {3, 8}) {
            const ImageTensor img = oracle::random_image(h, w, 1, rng, -1.0, 1.0);
            const ImageTensor co = ffl::dct2(img);
            const ImageTensor ref = oracle::naive_dct2(img);
            for (std::size_t i = 0; i < co.values.size(); ++i) {
                CHECK(std::abs(co.values[i] - ref.values[i]) < 1e-9);
            }
            double pixel_energy = 0.0, coeff_energy = 0.0;
            for (double v : img.values) pixel_energy += v * v;
            for (double v : co.values) coeff_energy += v * v;
            CHECK(coeff_energy ==
                  doctest::Approx(pixel_energy).epsilon(1e-9));
            const ImageTensor inv_ref = oracle::naive_idct2(co);
            const ImageTensor inv = ffl::idct2(co);
            for (std::size_t i = 0; i < inv.values.size(); ++i) {
                CHECK(std::abs(inv.values[i] - inv_ref.values[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("DCT of a constant 2x2 image is a single DC coefficient") {
    ImageTensor ones(2, 2, 1, 1.0);
    const ImageTensor co = ffl::dct2(ones);
    CHECK(co.at(0, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(co.at(0, 1, 0)) < 1e-12);
    CHECK(std::abs(co.at(1, 0, 0)) < 1e-12);
    CHECK(std::abs(co.at(1, 1, 0)) < 1e-12);
}

TEST_CASE("Parseval holds for the orthonormal transform") {
    ffl::Rng rng(16);
    const ImageTensor img = oracle::random_image(6, 9, 2, rng, -2.0, 2.0);
    const Spectrum s = ffl::dft2(img, true);
    for (int c = 0; c < img.channels; ++c) {
        double pixel = 0.0, freq = 0.0;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) pixel += img.at(y, x, c) * img.at(y, x, c);
        }
        for (int v = 0; v < img.height; ++v) {
            for (int u = 0; u < img.width; ++u) freq += std::norm(s.at(v, u, c));
        }
        CHECK(freq == doctest::Approx(pixel).epsilon(1e-9));
    }
}

TEST_CASE("transform is linear") {
    ffl::Rng rng(17);
    const ImageTensor x = oracle::random_image(5, 6, 1, rng);
    const ImageTensor y = oracle::random_image(5, 6, 1, rng);
    ImageTensor combo(5, 6, 1);
    for (std::size_t i = 0; i < combo.values.size(); ++i) {
        combo.values[i] = 2.5 * x.values[i] - 1.25 * y.values[i];
    }
    const Spectrum sx = ffl::dft2(x, true);
    const Spectrum sy = ffl::dft2(y, true);
    const Spectrum sc = ffl::dft2(combo, true);
    for (std::size_t i = 0; i < sc.values.size(); ++i) {
        CHECK(std::abs(sc.values[i] - (2.5 * sx.values[i] - 1.25 * sy.values[i])) < 1e-9);
    }
}

TEST_CASE("fftshift moves DC to the center and unshift undoes it") {
    Spectrum s(2, 2, 1, true);
    s.at(0, 0, 0) = 7.0;
    const Spectrum shifted = ffl::fftshift(s);
    CHECK(shifted.at(1, 1, 0).real() == doctest::Approx(7.0));
    CHECK(std::abs(shifted.at(0, 0, 0)) == doctest::Approx(0.0));

    ffl::Rng rng(18);
    const ImageTensor img = oracle::random_image(5, 4, 1, rng);
    const Spectrum odd = ffl::dft2(img, true);
    const Spectrum round = ffl::ifftshift(ffl::fftshift(odd));
    CHECK(max_abs_spec_diff(odd, round) == 0.0);

    ImageTensor ones(4, 6, 1, 1.0);
    const Spectrum centered = ffl::fftshift(ffl::dft2(ones, true));
    for (int v = 0; v < 4; ++v) {
        for (int u = 0; u < 6; ++u) {
            if (v == 2 && u == 3) {
                CHECK(std::abs(centered.at(v, u, 0)) > 1.0);
            } else {
                CHECK(std::abs(centered.at(v, u, 0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("amplitude and phase follow the 3-4-5 triangle and zero convention") {
    Spectrum s(1, 2, 1, true);
    s.at(0, 0, 0) = {3.0, 4.0};
    s.at(0, 1, 0) = {0.0, 0.0};
    const ImageTensor amp = ffl::amplitude(s);
    const ImageTensor ph = ffl::phase(s);
    CHECK(amp.at(0, 0, 0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(ph.at(0, 0, 0) == doctest::Approx(std::atan2(4.0, 3.0)).epsilon(1e-12));
    CHECK(amp.at(0, 1, 0) == 0.0);
    CHECK(ph.at(0, 1, 0) == 0.0);

    ImageTensor ones(2, 2, 1, 1.0);
    const ImageTensor amp2 = ffl::amplitude(ffl::dft2(ones, true));
    CHECK(amp2.at(0, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(amp2.at(0, 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(amp2.at(1, 0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(amp2.at(1, 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("phase stays in (-pi, pi]") {
    Spectrum s(1, 2, 1, true);
    s.at(0, 0, 0) = {-1.0, 0.0};
    s.at(0, 1, 0) = {-1.0, -1e-18};
    const ImageTensor ph = ffl::phase(s);
    CHECK(ph.at(0, 0, 0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(ph.at(0, 1, 0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("log amplitude view behaves at the edges") {
    Spectrum zero(3, 3, 1, true);
    const ImageTensor flat = ffl::log_amplitude_view(zero);
    for (double v : flat.values) CHECK(v == 0.0);

    Spectrum dc(4, 4, 1, true);
    dc.at(0, 0, 0) = 9.0;
    const ImageTensor view = ffl::log_amplitude_view(dc);
    for (int v = 0; v < 4; ++v) {
        for (int u = 0; u < 4; ++u) {
            CHECK(view.at(v, u, 0) == (v == 2 && u == 2 ? 1.0 : 0.0));
        }
    }

    ffl::Rng rng(19);
    const ImageTensor img = oracle::random_image(6, 6, 3, rng);
    const ImageTensor rv = ffl::log_amplitude_view(ffl::dft2(img, true));
    for (double v : rv.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
