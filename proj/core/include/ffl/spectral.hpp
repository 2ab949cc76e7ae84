#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ffl/image.hpp"

namespace ffl {

/// Complex H x W x C frequency grid, row-major (v, u, c). DC sits at (0,0)
/// unless the grid has been fftshifted. `orthonormalized` records whether the
/// forward transform divided by sqrt(H*W); the inverse honors the flag so the
/// round trip is the identity either way.
struct Spectrum {
    int height = 0;
    int width = 0;
    int channels = 0;
    bool orthonormalized = true;
    std::vector<std::complex<double>> values;

    Spectrum() = default;
    Spectrum(int h, int w, int c, bool ortho);

    std::complex<double>& at(int v, int u, int c) {
        return values[static_cast<std::size_t>((v * width + u) * channels + c)];
    }
    const std::complex<double>& at(int v, int u, int c) const {
        return values[static_cast<std::size_t>((v * width + u) * channels + c)];
    }

    bool same_shape(const Spectrum& other) const {
        return height == other.height && width == other.width && channels == other.channels;
    }
};

void validate(const Spectrum& spectrum, const char* what = "spectrum");

/// Forward 2D DFT per channel, F(u,v) = sum_{x,y} f(x,y) e^{-i2pi(ux/W + vy/H)}.
/// With orthonormalize the result is divided by sqrt(H*W), making the map
/// unitary (Parseval holds exactly).
Spectrum dft2(const ImageTensor& image, bool orthonormalize = true);

/// Inverse of dft2 under the spectrum's own normalization flag. Returns the
/// real part; an imaginary residue above 1e-6 of the value scale throws,
/// since spectra of real images must invert to real images.
ImageTensor idft2(const Spectrum& spectrum);

/// Orthonormal type-II 2D DCT and its exact inverse. Coefficients are real,
/// so they live in an ImageTensor with (0,0) holding the DC term.
ImageTensor dct2(const ImageTensor& image);
ImageTensor idct2(const ImageTensor& coeffs);

/// Swap quadrants so DC moves to (floor(H/2), floor(W/2)); ifftshift undoes
/// it (they differ for odd sizes).
Spectrum fftshift(const Spectrum& spectrum);
Spectrum ifftshift(const Spectrum& spectrum);

/// Elementwise modulus sqrt(R^2 + I^2).
ImageTensor amplitude(const Spectrum& spectrum);

/// Elementwise atan2(I, R) in (-pi, pi]; exactly 0 where R = I = 0.
ImageTensor phase(const Spectrum& spectrum);

/// fftshifted log(1 + amplitude), min-max scaled to [0,1] per channel, for
/// 8-bit export. A flat channel maps to all zeros.
ImageTensor log_amplitude_view(const Spectrum& spectrum);

namespace detail {

/// Inverse 2D DFT keeping the complex result (no residue check). Used where
/// the caller masks the spectrum and still wants the exact real part.
std::vector<std::complex<double>> idft2_complex(const Spectrum& spectrum);

}  // namespace detail

}  // namespace ffl
