#pragma once

#include <cstddef>
#include <vector>

namespace ffl {

/// Real-valued H x W x C raster, row-major (y, x, c).
struct ImageTensor {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> values;

    ImageTensor() = default;
    ImageTensor(int h, int w, int c, double fill = 0.0);

    double& at(int y, int x, int c) {
        return values[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
    double at(int y, int x, int c) const {
        return values[static_cast<std::size_t>((y * width + x) * channels + c)];
    }

    std::size_t size() const { return values.size(); }
    bool same_shape(const ImageTensor& other) const {
        return height == other.height && width == other.width && channels == other.channels;
    }
};

/// Throws std::invalid_argument if a dimension is non-positive, the buffer
/// length disagrees with the shape, or any value is non-finite. The message
/// names the first offending (y, x, c) index.
void validate(const ImageTensor& image, const char* what = "image");

/// Elementwise gain * x + bias; used to move between pixel scales
/// (e.g. 0..255 <-> [-1, 1]).
ImageTensor affine(const ImageTensor& image, double gain, double bias);

/// Mean of (a - b)^2 over all pixels and channels.
double mean_squared_error(const ImageTensor& a, const ImageTensor& b);

}  // namespace ffl
