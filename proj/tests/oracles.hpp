// Independent reference implementations the fast paths are checked against:
// direct summation transforms and central finite differences. Deliberately
// simple and O(n^2)-per-axis or worse.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "ffl/image.hpp"
#include "ffl/rng.hpp"
#include "ffl/spectral.hpp"

namespace oracle {

inline ffl::Spectrum naive_dft2(const ffl::ImageTensor& img, bool orthonormalize) {
    const int h = img.height, w = img.width, c = img.channels;
    ffl::Spectrum out(h, w, c, orthonormalize);
    const double tau = 2.0 * std::numbers::pi;
    for (int ch = 0; ch < c; ++ch) {
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) {
                std::complex<double> acc = 0.0;
                for (int y = 0; y < h; ++y) {
                    for (int x = 0; x < w; ++x) {
                        const double ang = -tau * (static_cast<double>(u) * x / w +
                                                   static_cast<double>(v) * y / h);
                        acc += img.at(y, x, ch) *
                               std::complex<double>(std::cos(ang), std::sin(ang));
                    }
                }
                out.at(v, u, ch) = acc;
            }
        }
    }
    if (orthonormalize) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(h) * w);
        for (auto& z : out.values) z *= scale;
    }
    return out;
}

inline ffl::ImageTensor naive_idft2(const ffl::Spectrum& spec) {
    const int h = spec.height, w = spec.width, c = spec.channels;
    ffl::ImageTensor out(h, w, c);
    const double tau = 2.0 * std::numbers::pi;
    const double mn = static_cast<double>(h) * w;
    const double scale = spec.orthonormalized ? 1.0 / std::sqrt(mn) : 1.0 / mn;
    for (int ch = 0; ch < c; ++ch) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                std::complex<double> acc = 0.0;
                for (int v = 0; v < h; ++v) {
                    for (int u = 0; u < w; ++u) {
                        const double ang = tau * (static_cast<double>(u) * x / w +
                                                  static_cast<double>(v) * y / h);
                        acc += spec.at(v, u, ch) *
                               std::complex<double>(std::cos(ang), std::sin(ang));
                    }
                }
                out.at(y, x, ch) = (acc * scale).real();
            }
        }
    }
    return out;
}

// Orthonormal type-II DCT by direct summation over both axes at once.
inline ffl::ImageTensor naive_dct2(const ffl::ImageTensor& img) {
    const int h = img.height, w = img.width, c = img.channels;
    ffl::ImageTensor out(h, w, c);
    const double pi = std::numbers::pi;
    const auto scale = [](int k, int n) {
        return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    };
    for (int ch = 0; ch < c; ++ch) {
        for (int l = 0; l < h; ++l) {
            for (int k = 0; k < w; ++k) {
                double acc = 0.0;
                for (int y = 0; y < h; ++y) {
                    for (int x = 0; x < w; ++x) {
                        acc += img.at(y, x, ch) * std::cos(pi * (y + 0.5) * l / h) *
                               std::cos(pi * (x + 0.5) * k / w);
                    }
                }
                out.at(l, k, ch) = scale(l, h) * scale(k, w) * acc;
            }
        }
    }
    return out;
}

inline ffl::ImageTensor naive_idct2(const ffl::ImageTensor& coeffs) {
    const int h = coeffs.height, w = coeffs.width, c = coeffs.channels;
    ffl::ImageTensor out(h, w, c);
    const double pi = std::numbers::pi;
    const auto scale = [](int k, int n) {
        return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    };
    for (int ch = 0; ch < c; ++ch) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int l = 0; l < h; ++l) {
                    for (int k = 0; k < w; ++k) {
                        acc += scale(l, h) * scale(k, w) * coeffs.at(l, k, ch) *
                               std::cos(pi * (y + 0.5) * l / h) *
                               std::cos(pi * (x + 0.5) * k / w);
                    }
                }
                out.at(y, x, ch) = acc;
            }
        }
    }
    return out;
}

inline ffl::ImageTensor random_image(int h, int w, int c, ffl::Rng& rng, double lo = 0.0,
                                     double hi = 1.0) {
    ffl::ImageTensor img(h, w, c);
    for (double& v : img.values) v = rng.uniform(lo, hi);
    return img;
}

// Central differences of a scalar function of a flat vector.
inline std::vector<double> central_differences(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    double step) {
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + step;
        const double hi = f(x);
        x[i] = keep - step;
        const double lo = f(x);
        x[i] = keep;
        grad[i] = (hi - lo) / (2.0 * step);
    }
    return grad;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Comparator used by every gradient check: relative error bound for healthy
// magnitudes, absolute bound where the gradient is tiny.
inline bool gradients_close(const std::vector<double>& analytic,
                            const std::vector<double>& numeric, double rel_tol = 1e-4,
                            double abs_tol = 1e-7, double small = 1e-3) {
    if (analytic.size() != numeric.size()) return false;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double a = analytic[i];
        const double n = numeric[i];
        if (std::abs(a) < small) {
            if (std::abs(a - n) > abs_tol) return false;
        } else if (std::abs(a - n) > rel_tol * std::abs(a)) {
            return false;
        }
    }
    return true;
}

}  // namespace oracle
