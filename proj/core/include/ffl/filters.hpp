#pragma once

#include <utility>
#include <vector>

#include "ffl/image.hpp"

namespace ffl {

/// Binary pass/stop map in the fftshifted frame (DC at the center index).
struct SpectralMask {
    int height = 0;
    int width = 0;
    std::vector<double> values;  // in [0,1]

    double& at(int v, int u) {
        return values[static_cast<std::size_t>(v * width + u)];
    }
    double at(int v, int u) const {
        return values[static_cast<std::size_t>(v * width + u)];
    }
};

void validate(const SpectralMask& mask, const char* what = "mask");

/// Radial masks measure Euclidean distance from the shifted DC position
/// (floor(H/2), floor(W/2)). Boundary coordinates (distance == radius) are
/// kept by lowpass and highpass and zeroed by bandstop.
SpectralMask make_lowpass(int height, int width, double radius);
SpectralMask make_highpass(int height, int width, double radius);
SpectralMask make_bandstop(int height, int width, double r_inner, double r_outer);

/// All-pass except the listed (v, u) coordinates (shifted frame).
SpectralMask make_notch(int height, int width,
                        const std::vector<std::pair<int, int>>& points);

/// Per channel: dft2 -> fftshift -> mask -> unshift -> inverse, keeping the
/// exact real part. No clamping here: band energies of the output must stay
/// exactly zero where the mask is zero, and clamping would smear them. 8-bit
/// export is where the range gets clipped.
ImageTensor apply_filter(const ImageTensor& image, const SpectralMask& mask);

}  // namespace ffl
