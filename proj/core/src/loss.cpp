#include "ffl/loss.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ffl {

namespace {

/// Complex view of one patch under the configured transform. DCT and spatial
/// values are real; their imaginary parts stay zero and the unified distance
/// formulas below collapse accordingly.
struct PatchRep {
    int h = 0, w = 0, c = 0;
    std::vector<std::complex<double>> values;  // (v, u, c)

    std::complex<double> at(int v, int u, int ch) const {
        return values[static_cast<std::size_t>((v * w + u) * c + ch)];
    }
};

PatchRep represent(const ImageTensor& patch, const LossConfig& cfg) {
    PatchRep rep;
    rep.h = patch.height;
    rep.w = patch.width;
    rep.c = patch.channels;
    rep.values.resize(patch.size());
    if (cfg.distance == DistanceKind::spatial) {
        for (std::size_t i = 0; i < patch.size(); ++i) rep.values[i] = {patch.values[i], 0.0};
    } else if (cfg.transform == TransformKind::dft) {
        rep.values = dft2(patch, true).values;
    } else {
        const ImageTensor co = dct2(patch);
        for (std::size_t i = 0; i < co.size(); ++i) rep.values[i] = {co.values[i], 0.0};
    }
    return rep;
}

/// d plus its partials w.r.t. the fake value's real and imaginary parts.
struct Term {
    double d = 0.0;
    double da = 0.0;
    double db = 0.0;
};

Term term_full(std::complex<double> r, std::complex<double> f) {
    const double dre = f.real() - r.real();
    const double dim = f.imag() - r.imag();
    return {dre * dre + dim * dim, 2.0 * dre, 2.0 * dim};
}

/// Moduli are regularized to sqrt(R^2 + I^2 + eps^2) in both the value and
/// the derivative so the two stay consistent through the origin.
Term term_amplitude(std::complex<double> r, std::complex<double> f, double eps) {
    const double ar = std::sqrt(r.real() * r.real() + r.imag() * r.imag() + eps * eps);
    const double af = std::sqrt(f.real() * f.real() + f.imag() * f.imag() + eps * eps);
    const double diff = af - ar;
    return {diff * diff, 2.0 * diff * f.real() / af, 2.0 * diff * f.imag() / af};
}

/// Wrap-safe 2(1 - cos(theta_r - theta_f)), written as the squared distance
/// between the unit phasors so identical inputs give exactly zero.
/// Coordinates where either modulus falls below eps have undefined phase and
/// contribute nothing.
Term term_phase(std::complex<double> r, std::complex<double> f, double eps) {
    const double ar = std::abs(r);
    const double af = std::abs(f);
    if (ar < eps || af < eps) return {};
    const double dx = r.real() / ar - f.real() / af;
    const double dy = r.imag() / ar - f.imag() / af;
    const double s = r.real() * f.real() + r.imag() * f.imag();
    const double denom = ar * af * af * af;
    const double da = -2.0 * (r.real() * af * af - s * f.real()) / denom;
    const double db = -2.0 * (r.imag() * af * af - s * f.imag()) / denom;
    return {dx * dx + dy * dy, da, db};
}

Term distance_term(std::complex<double> r, std::complex<double> f, const LossConfig& cfg) {
    switch (cfg.distance) {
        case DistanceKind::amplitude_only:
            return term_amplitude(r, f, cfg.epsilon);
        case DistanceKind::phase_only:
            return term_phase(r, f, cfg.epsilon);
        case DistanceKind::full:
        case DistanceKind::spatial:
            return term_full(r, f);
    }
    return {};
}

WeightMatrix weights_from_reps(const PatchRep& r, const PatchRep& f, double alpha) {
    WeightMatrix w;
    w.height = r.h;
    w.width = r.w;
    w.channels = r.c;
    w.values.assign(r.values.size(), 0.0);
    for (int ch = 0; ch < r.c; ++ch) {
        double raw_max = 0.0;
        for (int v = 0; v < r.h; ++v) {
            for (int u = 0; u < r.w; ++u) {
                const double m = std::abs(f.at(v, u, ch) - r.at(v, u, ch));
                if (m > 0.0) {
                    const double raw = std::pow(m, alpha);
                    w.at(v, u, ch) = raw;
                    raw_max = std::max(raw_max, raw);
                }
            }
        }
        if (raw_max > 0.0) {
            for (int v = 0; v < r.h; ++v) {
                for (int u = 0; u < r.w; ++u) w.at(v, u, ch) /= raw_max;
            }
        } else {
            for (int v = 0; v < r.h; ++v) {
                for (int u = 0; u < r.w; ++u) w.at(v, u, ch) = 0.0;
            }
        }
    }
    return w;
}

/// Unnormalized sum of w * d over the patch; optionally fills g with
/// w * (dd/dRe + i dd/dIm) per coordinate for the caller to scale and
/// back-transform.
double weighted_sum(const PatchRep& r, const PatchRep& f, const LossConfig& cfg,
                    const WeightMatrix* w, std::vector<std::complex<double>>* g) {
    double acc = 0.0;
    if (g) g->assign(r.values.size(), {});
    for (int v = 0; v < r.h; ++v) {
        for (int u = 0; u < r.w; ++u) {
            for (int ch = 0; ch < r.c; ++ch) {
                const double wi = w ? w->at(v, u, ch) : 1.0;
                const Term t = distance_term(r.at(v, u, ch), f.at(v, u, ch), cfg);
                acc += wi * t.d;
                if (g) {
                    (*g)[static_cast<std::size_t>((v * r.w + u) * r.c + ch)] = {wi * t.da,
                                                                                wi * t.db};
                }
            }
        }
    }
    return acc;
}

/// Adjoint of the patch representation: maps d(loss)/d(rep) back to
/// d(loss)/d(pixel). The DFT is unitary so its adjoint is the inverse
/// transform; DCT likewise; spatial is the identity.
ImageTensor grad_to_pixels(const std::vector<std::complex<double>>& g, int h, int w,
                           int c, const LossConfig& cfg) {
    ImageTensor out(h, w, c);
    if (cfg.distance == DistanceKind::spatial) {
        for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = g[i].real();
        return out;
    }
    switch (cfg.transform) {
        case TransformKind::dft: {
            Spectrum spec(h, w, c, true);
            spec.values = g;
            const std::vector<std::complex<double>> pixels = detail::idft2_complex(spec);
            for (std::size_t i = 0; i < pixels.size(); ++i) out.values[i] = pixels[i].real();
            break;
        }
        case TransformKind::dct: {
            ImageTensor coeffs(h, w, c);
            for (std::size_t i = 0; i < g.size(); ++i) coeffs.values[i] = g[i].real();
            out = idct2(coeffs);
            break;
        }
    }
    return out;
}

ImageTensor crop(const ImageTensor& src, int y0, int x0, int h, int w) {
    ImageTensor out(h, w, src.channels);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < src.channels; ++c) {
                out.at(y, x, c) = src.at(y0 + y, x0 + x, c);
            }
        }
    }
    return out;
}

void paste(ImageTensor& dst, const ImageTensor& patch, int y0, int x0) {
    for (int y = 0; y < patch.height; ++y) {
        for (int x = 0; x < patch.width; ++x) {
            for (int c = 0; c < patch.channels; ++c) {
                dst.at(y0 + y, x0 + x, c) = patch.at(y, x, c);
            }
        }
    }
}

void check_pair(const ImageTensor& real, const ImageTensor& fake, const LossConfig& cfg) {
    validate(real, "real image");
    validate(fake, "fake image");
    if (!real.same_shape(fake)) {
        throw std::invalid_argument("ffl: real and fake images must share a shape");
    }
    validate(cfg, real.height, real.width);
}

/// Shared driver: loss value over all patches, plus whichever of weights and
/// gradient the caller asked for. `frozen` substitutes stored weights.
double ffl_run(const ImageTensor& real, const ImageTensor& fake, const LossConfig& cfg,
               const std::vector<WeightMatrix>* frozen,
               std::vector<WeightMatrix>* out_weights, ImageTensor* out_grad) {
    check_pair(real, fake, cfg);
    const int p = cfg.patch_factor;
    const int ph = real.height / p;
    const int pw = real.width / p;
    const int patches = p * p;
    if (cfg.focal && frozen && static_cast<int>(frozen->size()) != patches) {
        throw std::invalid_argument("ffl: expected " + std::to_string(patches) +
                                    " weight matrices, got " +
                                    std::to_string(frozen->size()));
    }

    if (out_grad) *out_grad = ImageTensor(real.height, real.width, real.channels);
    if (out_weights) out_weights->clear();

    const double patch_norm =
        1.0 / (static_cast<double>(real.channels) * static_cast<double>(ph) *
               static_cast<double>(pw));
    const double grad_scale = patch_norm / static_cast<double>(patches);

    double total = 0.0;
    std::vector<std::complex<double>> g;
    for (int pi = 0; pi < p; ++pi) {
        for (int pj = 0; pj < p; ++pj) {
            const ImageTensor real_patch = crop(real, pi * ph, pj * pw, ph, pw);
            const ImageTensor fake_patch = crop(fake, pi * ph, pj * pw, ph, pw);
            const PatchRep r = represent(real_patch, cfg);
            const PatchRep f = represent(fake_patch, cfg);

            WeightMatrix local;
            const WeightMatrix* w = nullptr;
            if (cfg.focal) {
                if (frozen) {
                    w = &(*frozen)[static_cast<std::size_t>(pi * p + pj)];
                } else {
                    local = weights_from_reps(r, f, cfg.alpha);
                    w = &local;
                }
                if (out_weights) out_weights->push_back(*w);
            }

            const double raw = weighted_sum(r, f, cfg, w, out_grad ? &g : nullptr);
            total += raw * patch_norm;

            if (out_grad) {
                for (auto& z : g) z *= grad_scale;
                const ImageTensor gp = grad_to_pixels(g, ph, pw, real.channels, cfg);
                paste(*out_grad, gp, pi * ph, pj * pw);
            }
        }
    }
    return total / static_cast<double>(patches);
}

}  // namespace

void validate(const LossConfig& config, int height, int width) {
    if (!(config.alpha >= 0.0) || !std::isfinite(config.alpha)) {
        throw std::invalid_argument("loss config: alpha must be finite and >= 0");
    }
    if (config.patch_factor < 1) {
        throw std::invalid_argument("loss config: patch_factor must be >= 1");
    }
    if (height % config.patch_factor != 0 || width % config.patch_factor != 0) {
        throw std::invalid_argument(
            "loss config: patch_factor " + std::to_string(config.patch_factor) +
            " does not divide " + std::to_string(height) + "x" + std::to_string(width));
    }
    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
        throw std::invalid_argument("loss config: epsilon must be finite and > 0");
    }
}

WeightMatrix weight_matrix(const Spectrum& real, const Spectrum& fake, double alpha) {
    validate(real, "weight_matrix real");
    validate(fake, "weight_matrix fake");
    if (!real.same_shape(fake)) {
        throw std::invalid_argument("weight_matrix: spectra must share a shape");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("weight_matrix: alpha must be finite and >= 0");
    }
    PatchRep r{real.height, real.width, real.channels, real.values};
    PatchRep f{fake.height, fake.width, fake.channels, fake.values};
    return weights_from_reps(r, f, alpha);
}

ImageTensor freq_distance_map(const Spectrum& real, const Spectrum& fake) {
    validate(real, "freq_distance real");
    validate(fake, "freq_distance fake");
    if (!real.same_shape(fake) || real.orthonormalized != fake.orthonormalized) {
        throw std::invalid_argument(
            "freq_distance: spectra must share shape and normalization");
    }
    ImageTensor out(real.height, real.width, real.channels);
    for (std::size_t i = 0; i < real.values.size(); ++i) {
        const std::complex<double> d = fake.values[i] - real.values[i];
        out.values[i] = d.real() * d.real() + d.imag() * d.imag();
    }
    return out;
}

double freq_distance(const Spectrum& real, const Spectrum& fake) {
    const ImageTensor map = freq_distance_map(real, fake);
    double acc = 0.0;
    for (double v : map.values) acc += v;
    return acc / static_cast<double>(map.values.size());
}

EvalResult ffl_evaluate(const ImageTensor& real, const ImageTensor& fake,
                        const LossConfig& config) {
    EvalResult result;
    result.value = ffl_run(real, fake, config, nullptr, &result.weights, nullptr);
    return result;
}

double ffl_forward(const ImageTensor& real, const ImageTensor& fake,
                   const LossConfig& config) {
    return ffl_run(real, fake, config, nullptr, nullptr, nullptr);
}

double ffl_forward_frozen(const ImageTensor& real, const ImageTensor& fake,
                          const LossConfig& config,
                          const std::vector<WeightMatrix>& weights) {
    return ffl_run(real, fake, config, &weights, nullptr, nullptr);
}

ImageTensor ffl_backward(const ImageTensor& real, const ImageTensor& fake,
                         const LossConfig& config) {
    ImageTensor grad;
    ffl_run(real, fake, config, nullptr, nullptr, &grad);
    return grad;
}

BatchResult batch_ffl(const std::vector<ImageTensor>& reals,
                      const std::vector<ImageTensor>& fakes,
                      const LossConfig& config) {
    if (reals.empty() || reals.size() != fakes.size()) {
        throw std::invalid_argument("batch_ffl: batches must be non-empty and equal-length");
    }
    for (std::size_t i = 1; i < reals.size(); ++i) {
        if (!reals[i].same_shape(reals[0]) || !fakes[i].same_shape(reals[0])) {
            throw std::invalid_argument("batch_ffl: ragged shapes at index " +
                                        std::to_string(i));
        }
    }
    const std::size_t b = reals.size();
    BatchResult result;

    if (config.batch_reduction == BatchReduction::mean_per_image) {
        result.grads.reserve(b);
        for (std::size_t i = 0; i < b; ++i) {
            ImageTensor grad;
            result.value += ffl_run(reals[i], fakes[i], config, nullptr, nullptr, &grad);
            for (double& v : grad.values) v /= static_cast<double>(b);
            result.grads.push_back(std::move(grad));
        }
        result.value /= static_cast<double>(b);
        return result;
    }

    // average_spectrum: average the patch representations across the batch,
    // then weight and measure once. Every image shares the same gradient,
    // scaled by 1/B because each contributes 1/B of the mean representation.
    check_pair(reals[0], fakes[0], config);
    const int p = config.patch_factor;
    const int ph = reals[0].height / p;
    const int pw = reals[0].width / p;
    const int channels = reals[0].channels;
    const int patches = p * p;
    const double patch_norm = 1.0 / (static_cast<double>(channels) *
                                     static_cast<double>(ph) * static_cast<double>(pw));
    const double grad_scale = patch_norm / static_cast<double>(patches);

    ImageTensor shared_grad(reals[0].height, reals[0].width, channels);
    double total = 0.0;
    std::vector<std::complex<double>> g;
    for (int pi = 0; pi < p; ++pi) {
        for (int pj = 0; pj < p; ++pj) {
            PatchRep mean_r, mean_f;
            for (std::size_t i = 0; i < b; ++i) {
                validate(reals[i], "batch real");
                validate(fakes[i], "batch fake");
                const PatchRep r =
                    represent(crop(reals[i], pi * ph, pj * pw, ph, pw), config);
                const PatchRep f =
                    represent(crop(fakes[i], pi * ph, pj * pw, ph, pw), config);
                if (i == 0) {
                    mean_r = r;
                    mean_f = f;
                } else {
                    for (std::size_t k = 0; k < r.values.size(); ++k) {
                        mean_r.values[k] += r.values[k];
                        mean_f.values[k] += f.values[k];
                    }
                }
            }
            const double inv_b = 1.0 / static_cast<double>(b);
            for (auto& z : mean_r.values) z *= inv_b;
            for (auto& z : mean_f.values) z *= inv_b;

            WeightMatrix local;
            const WeightMatrix* w = nullptr;
            if (config.focal) {
                local = weights_from_reps(mean_r, mean_f, config.alpha);
                w = &local;
            }
            total += weighted_sum(mean_r, mean_f, config, w, &g) * patch_norm;

            for (auto& z : g) z *= grad_scale * inv_b;
            const ImageTensor gp = grad_to_pixels(g, ph, pw, channels, config);
            paste(shared_grad, gp, pi * ph, pj * pw);
        }
    }
    result.value = total / static_cast<double>(patches);
    result.grads.assign(b, shared_grad);
    return result;
}

}  // namespace ffl
