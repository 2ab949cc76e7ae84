#include "ffl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace ffl {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2, unnormalized in both directions. Twiddles come from a
/// per-stage table so rounding does not accumulate along the butterfly chain.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            tw[k] = std::polar(1.0, ang * static_cast<double>(k));
        }
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + half] * tw[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

/// Bluestein chirp-z for arbitrary n: rewrites the DFT as a circular
/// convolution of chirped sequences, evaluated with a power-of-two FFT of
/// length >= 2n-1. j^2 is reduced mod 2n before the angle so large n keeps
/// full precision.
void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::size_t big = 1;
    while (big < 2 * n - 1) big <<= 1;

    std::vector<std::complex<double>> chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t sq = static_cast<std::uint64_t>(j) * j % (2 * n);
        const double ang = (inverse ? 1.0 : -1.0) * kPi * static_cast<double>(sq) /
                           static_cast<double>(n);
        chirp[j] = std::polar(1.0, ang);
    }

    std::vector<std::complex<double>> fa(big), fb(big);
    for (std::size_t j = 0; j < n; ++j) fa[j] = a[j] * chirp[j];
    fb[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) {
        fb[j] = fb[big - j] = std::conj(chirp[j]);
    }

    fft_pow2(fa, false);
    fft_pow2(fb, false);
    for (std::size_t j = 0; j < big; ++j) fa[j] *= fb[j];
    fft_pow2(fa, true);

    const double scale = 1.0 / static_cast<double>(big);
    for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * chirp[k] * scale;
}

void fft_line(std::vector<std::complex<double>>& a, bool inverse) {
    if (a.size() < 2) return;
    if (is_pow2(a.size())) {
        fft_pow2(a, inverse);
    } else {
        fft_bluestein(a, inverse);
    }
}

/// In-place unnormalized 2D transform of every channel plane.
void fft_plane(std::vector<std::complex<double>>& values, int h, int w, int c,
               bool inverse) {
    std::vector<std::complex<double>> line;
    for (int ch = 0; ch < c; ++ch) {
        line.assign(static_cast<std::size_t>(w), {});
        for (int v = 0; v < h; ++v) {
            for (int u = 0; u < w; ++u) {
                line[static_cast<std::size_t>(u)] =
                    values[static_cast<std::size_t>((v * w + u) * c + ch)];
            }
            fft_line(line, inverse);
            for (int u = 0; u < w; ++u) {
                values[static_cast<std::size_t>((v * w + u) * c + ch)] =
                    line[static_cast<std::size_t>(u)];
            }
        }
        line.assign(static_cast<std::size_t>(h), {});
        for (int u = 0; u < w; ++u) {
            for (int v = 0; v < h; ++v) {
                line[static_cast<std::size_t>(v)] =
                    values[static_cast<std::size_t>((v * w + u) * c + ch)];
            }
            fft_line(line, inverse);
            for (int v = 0; v < h; ++v) {
                values[static_cast<std::size_t>((v * w + u) * c + ch)] =
                    line[static_cast<std::size_t>(v)];
            }
        }
    }
}

/// cos(pi * (j + 0.5) * k / n) for the orthonormal type-II DCT pair; table is
/// indexed [k * n + j].
std::vector<double> dct_table(int n) {
    std::vector<double> t(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            t[static_cast<std::size_t>(k) * n + j] =
                std::cos(kPi * (j + 0.5) * k / static_cast<double>(n));
        }
    }
    return t;
}

void dct_axis(const std::vector<double>& table, const std::vector<double>& in,
              std::vector<double>& out, int n, bool inverse) {
    const double s0 = std::sqrt(1.0 / n);
    const double sk = std::sqrt(2.0 / n);
    if (!inverse) {
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            const double* row = table.data() + static_cast<std::size_t>(k) * n;
            for (int j = 0; j < n; ++j) acc += in[static_cast<std::size_t>(j)] * row[j];
            out[static_cast<std::size_t>(k)] = (k == 0 ? s0 : sk) * acc;
        }
    } else {
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = 0.0;
        for (int k = 0; k < n; ++k) {
            const double scaled = (k == 0 ? s0 : sk) * in[static_cast<std::size_t>(k)];
            const double* row = table.data() + static_cast<std::size_t>(k) * n;
            for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] += scaled * row[j];
        }
    }
}

ImageTensor dct_plane(const ImageTensor& src, bool inverse) {
    validate(src, inverse ? "idct2 input" : "dct2 input");
    const int h = src.height, w = src.width, c = src.channels;
    ImageTensor out = src;
    const std::vector<double> row_table = dct_table(w);
    const std::vector<double> col_table = (h == w) ? row_table : dct_table(h);

    std::vector<double> in_line, out_line;
    for (int ch = 0; ch < c; ++ch) {
        in_line.assign(static_cast<std::size_t>(w), 0.0);
        out_line.assign(static_cast<std::size_t>(w), 0.0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) in_line[static_cast<std::size_t>(x)] = out.at(y, x, ch);
            dct_axis(row_table, in_line, out_line, w, inverse);
            for (int x = 0; x < w; ++x) out.at(y, x, ch) = out_line[static_cast<std::size_t>(x)];
        }
        in_line.assign(static_cast<std::size_t>(h), 0.0);
        out_line.assign(static_cast<std::size_t>(h), 0.0);
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y) in_line[static_cast<std::size_t>(y)] = out.at(y, x, ch);
            dct_axis(col_table, in_line, out_line, h, inverse);
            for (int y = 0; y < h; ++y) out.at(y, x, ch) = out_line[static_cast<std::size_t>(y)];
        }
    }
    return out;
}

}  // namespace

Spectrum::Spectrum(int h, int w, int c, bool ortho)
    : height(h), width(w), channels(c), orthonormalized(ortho),
      values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
             static_cast<std::size_t>(c)) {}

void validate(const Spectrum& spectrum, const char* what) {
    const std::string name(what);
    if (spectrum.height <= 0 || spectrum.width <= 0 || spectrum.channels <= 0) {
        throw std::invalid_argument(name + ": shape must be positive, got " +
                                    std::to_string(spectrum.height) + "x" +
                                    std::to_string(spectrum.width) + "x" +
                                    std::to_string(spectrum.channels));
    }
    const std::size_t expected = static_cast<std::size_t>(spectrum.height) *
                                 static_cast<std::size_t>(spectrum.width) *
                                 static_cast<std::size_t>(spectrum.channels);
    if (spectrum.values.size() != expected) {
        throw std::invalid_argument(name + ": buffer holds " +
                                    std::to_string(spectrum.values.size()) +
                                    " values, shape needs " + std::to_string(expected));
    }
    for (int v = 0; v < spectrum.height; ++v) {
        for (int u = 0; u < spectrum.width; ++u) {
            for (int c = 0; c < spectrum.channels; ++c) {
                const std::complex<double>& z = spectrum.at(v, u, c);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    throw std::invalid_argument(
                        name + ": non-finite value at (" + std::to_string(v) + ", " +
                        std::to_string(u) + ", " + std::to_string(c) + ")");
                }
            }
        }
    }
}

Spectrum dft2(const ImageTensor& image, bool orthonormalize) {
    validate(image, "dft2 input");
    Spectrum out(image.height, image.width, image.channels, orthonormalize);
    for (std::size_t i = 0; i < image.values.size(); ++i) {
        out.values[i] = std::complex<double>(image.values[i], 0.0);
    }
    fft_plane(out.values, out.height, out.width, out.channels, false);
    if (orthonormalize) {
        const double scale =
            1.0 / std::sqrt(static_cast<double>(out.height) * static_cast<double>(out.width));
        for (auto& z : out.values) z *= scale;
    }
    return out;
}

namespace detail {

std::vector<std::complex<double>> idft2_complex(const Spectrum& spectrum) {
    validate(spectrum, "idft2 input");
    std::vector<std::complex<double>> work = spectrum.values;
    fft_plane(work, spectrum.height, spectrum.width, spectrum.channels, true);
    const double mn = static_cast<double>(spectrum.height) * static_cast<double>(spectrum.width);
    const double scale = spectrum.orthonormalized ? 1.0 / std::sqrt(mn) : 1.0 / mn;
    for (auto& z : work) z *= scale;
    return work;
}

}  // namespace detail

ImageTensor idft2(const Spectrum& spectrum) {
    const std::vector<std::complex<double>> work = detail::idft2_complex(spectrum);
    double peak = 0.0;
    double residue = 0.0;
    for (const auto& z : work) {
        peak = std::max(peak, std::abs(z.real()));
        residue = std::max(residue, std::abs(z.imag()));
    }
    if (residue > 1e-6 * std::max(peak, 1e-12)) {
        throw std::invalid_argument(
            "idft2: imaginary residue " + std::to_string(residue) +
            " exceeds tolerance; spectrum does not come from a real image");
    }
    ImageTensor out(spectrum.height, spectrum.width, spectrum.channels);
    for (std::size_t i = 0; i < work.size(); ++i) out.values[i] = work[i].real();
    return out;
}

ImageTensor dct2(const ImageTensor& image) { return dct_plane(image, false); }

ImageTensor idct2(const ImageTensor& coeffs) { return dct_plane(coeffs, true); }

Spectrum fftshift(const Spectrum& spectrum) {
    validate(spectrum, "fftshift input");
    Spectrum out(spectrum.height, spectrum.width, spectrum.channels,
                 spectrum.orthonormalized);
    const int h = spectrum.height, w = spectrum.width;
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            for (int c = 0; c < spectrum.channels; ++c) {
                out.at((v + h / 2) % h, (u + w / 2) % w, c) = spectrum.at(v, u, c);
            }
        }
    }
    return out;
}

Spectrum ifftshift(const Spectrum& spectrum) {
    validate(spectrum, "ifftshift input");
    Spectrum out(spectrum.height, spectrum.width, spectrum.channels,
                 spectrum.orthonormalized);
    const int h = spectrum.height, w = spectrum.width;
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            for (int c = 0; c < spectrum.channels; ++c) {
                out.at(v, u, c) = spectrum.at((v + h / 2) % h, (u + w / 2) % w, c);
            }
        }
    }
    return out;
}

ImageTensor amplitude(const Spectrum& spectrum) {
    validate(spectrum, "amplitude input");
    ImageTensor out(spectrum.height, spectrum.width, spectrum.channels);
    for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
        out.values[i] = std::abs(spectrum.values[i]);
    }
    return out;
}

ImageTensor phase(const Spectrum& spectrum) {
    validate(spectrum, "phase input");
    ImageTensor out(spectrum.height, spectrum.width, spectrum.channels);
    for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
        const double re = spectrum.values[i].real();
        const double im = spectrum.values[i].imag();
        if (re == 0.0 && im == 0.0) {
            out.values[i] = 0.0;
        } else {
            double a = std::atan2(im, re);
            if (a <= -kPi) a = kPi;  // keep the branch cut at (-pi, pi]
            out.values[i] = a;
        }
    }
    return out;
}

ImageTensor log_amplitude_view(const Spectrum& spectrum) {
    const Spectrum shifted = fftshift(spectrum);
    ImageTensor out(spectrum.height, spectrum.width, spectrum.channels);
    for (std::size_t i = 0; i < shifted.values.size(); ++i) {
        out.values[i] = std::log1p(std::abs(shifted.values[i]));
    }
    for (int c = 0; c < out.channels; ++c) {
        double lo = out.at(0, 0, c), hi = out.at(0, 0, c);
        for (int v = 0; v < out.height; ++v) {
            for (int u = 0; u < out.width; ++u) {
                lo = std::min(lo, out.at(v, u, c));
                hi = std::max(hi, out.at(v, u, c));
            }
        }
        const double span = hi - lo;
        for (int v = 0; v < out.height; ++v) {
            for (int u = 0; u < out.width; ++u) {
                out.at(v, u, c) = span > 0.0 ? (out.at(v, u, c) - lo) / span : 0.0;
            }
        }
    }
    return out;
}

}  // namespace ffl
