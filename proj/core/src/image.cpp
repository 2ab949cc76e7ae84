#include "ffl/image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ffl {

ImageTensor::ImageTensor(int h, int w, int c, double fill)
    : height(h), width(w), channels(c),
      values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                 static_cast<std::size_t>(c),
             fill) {}

void validate(const ImageTensor& image, const char* what) {
    const std::string name(what);
    if (image.height <= 0 || image.width <= 0 || image.channels <= 0) {
        throw std::invalid_argument(name + ": shape must be positive, got " +
                                    std::to_string(image.height) + "x" +
                                    std::to_string(image.width) + "x" +
                                    std::to_string(image.channels));
    }
    const std::size_t expected = static_cast<std::size_t>(image.height) *
                                 static_cast<std::size_t>(image.width) *
                                 static_cast<std::size_t>(image.channels);
    if (image.values.size() != expected) {
        throw std::invalid_argument(name + ": buffer holds " +
                                    std::to_string(image.values.size()) +
                                    " values, shape needs " + std::to_string(expected));
    }
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < image.channels; ++c) {
                if (!std::isfinite(image.at(y, x, c))) {
                    throw std::invalid_argument(
                        name + ": non-finite value at (" + std::to_string(y) + ", " +
                        std::to_string(x) + ", " + std::to_string(c) + ")");
                }
            }
        }
    }
}

ImageTensor affine(const ImageTensor& image, double gain, double bias) {
    ImageTensor out = image;
    for (double& v : out.values) v = gain * v + bias;
    return out;
}

double mean_squared_error(const ImageTensor& a, const ImageTensor& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("mean_squared_error: shape mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.values.size());
}

}  // namespace ffl
