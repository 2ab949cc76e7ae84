#include "ffl/filters.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ffl/spectral.hpp"

namespace ffl {

namespace {

SpectralMask ones_mask(int height, int width) {
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("mask: dimensions must be positive");
    }
    SpectralMask mask;
    mask.height = height;
    mask.width = width;
    mask.values.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
                       1.0);
    return mask;
}

double center_distance(int v, int u, int height, int width) {
    const double dv = v - height / 2;
    const double du = u - width / 2;
    return std::sqrt(dv * dv + du * du);
}

}  // namespace

void validate(const SpectralMask& mask, const char* what) {
    const std::string name(what);
    if (mask.height <= 0 || mask.width <= 0) {
        throw std::invalid_argument(name + ": dimensions must be positive");
    }
    const std::size_t expected =
        static_cast<std::size_t>(mask.height) * static_cast<std::size_t>(mask.width);
    if (mask.values.size() != expected) {
        throw std::invalid_argument(name + ": buffer length does not match shape");
    }
    for (std::size_t i = 0; i < mask.values.size(); ++i) {
        const double v = mask.values[i];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw std::invalid_argument(name + ": value outside [0,1] at flat index " +
                                        std::to_string(i));
        }
    }
}

SpectralMask make_lowpass(int height, int width, double radius) {
    if (!(radius >= 0.0)) throw std::invalid_argument("lowpass: radius must be >= 0");
    SpectralMask mask = ones_mask(height, width);
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            if (center_distance(v, u, height, width) > radius) mask.at(v, u) = 0.0;
        }
    }
    return mask;
}

SpectralMask make_highpass(int height, int width, double radius) {
    if (!(radius >= 0.0)) throw std::invalid_argument("highpass: radius must be >= 0");
    SpectralMask mask = ones_mask(height, width);
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            if (center_distance(v, u, height, width) < radius) mask.at(v, u) = 0.0;
        }
    }
    return mask;
}

SpectralMask make_bandstop(int height, int width, double r_inner, double r_outer) {
    if (!(r_inner >= 0.0) || !(r_inner < r_outer)) {
        throw std::invalid_argument("bandstop: need 0 <= r_inner < r_outer");
    }
    SpectralMask mask = ones_mask(height, width);
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            const double d = center_distance(v, u, height, width);
            if (d >= r_inner && d <= r_outer) mask.at(v, u) = 0.0;
        }
    }
    return mask;
}

SpectralMask make_notch(int height, int width,
                        const std::vector<std::pair<int, int>>& points) {
    SpectralMask mask = ones_mask(height, width);
    for (const auto& [v, u] : points) {
        if (v < 0 || v >= height || u < 0 || u >= width) {
            throw std::invalid_argument("notch: point (" + std::to_string(v) + ", " +
                                        std::to_string(u) + ") outside " +
                                        std::to_string(height) + "x" +
                                        std::to_string(width));
        }
        mask.at(v, u) = 0.0;
    }
    return mask;
}

ImageTensor apply_filter(const ImageTensor& image, const SpectralMask& mask) {
    validate(image, "apply_filter input");
    validate(mask, "apply_filter mask");
    if (mask.height != image.height || mask.width != image.width) {
        throw std::invalid_argument("apply_filter: mask must match image dimensions");
    }
    Spectrum shifted = fftshift(dft2(image, true));
    for (int v = 0; v < shifted.height; ++v) {
        for (int u = 0; u < shifted.width; ++u) {
            for (int c = 0; c < shifted.channels; ++c) {
                shifted.at(v, u, c) *= mask.at(v, u);
            }
        }
    }
    const std::vector<std::complex<double>> pixels =
        detail::idft2_complex(ifftshift(shifted));
    ImageTensor out(image.height, image.width, image.channels);
    for (std::size_t i = 0; i < pixels.size(); ++i) out.values[i] = pixels[i].real();
    return out;
}

}  // namespace ffl
