#include "ffl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "ffl/filters.hpp"

namespace ffl {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

ImageTensor flat_to_image(const std::vector<double>& flat, int h, int w, int c) {
    ImageTensor img(h, w, c);
    img.values = flat;
    return img;
}

void add_wave(ImageTensor& img, int u, int v, double amp, double phase) {
    const int size = img.width;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            img.at(y, x, 0) += amp * std::cos(kTau * (static_cast<double>(u) * x / size +
                                                      static_cast<double>(v) * y / size) +
                                              phase);
        }
    }
}

// Every gratings image mixes image-specific low/mid waves with a corpus-wide
// high-frequency carrier (same (u,v) for the whole corpus, amplitude and
// phase per image). The carrier is weak in pixel space but common to every
// image, so it is the part a pixel-error fit leaves for last. Amplitudes sum
// below 0.5: no clipping.
ImageTensor corpus_gratings(int size, Rng& rng, int carrier_u, int carrier_v) {
    ImageTensor img(size, size, 1, 0.5);
    struct Band {
        int lo, hi;
        double amp_lo, amp_hi;
    };
    const Band bands[2] = {{0, 2, 0.15, 0.25}, {3, 6, 0.05, 0.10}};
    for (const Band& band : bands) {
        int u = 0, v = 0;
        do {
            u = band.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                              band.hi - band.lo + 1)));
            v = band.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                              band.hi - band.lo + 1)));
        } while (u == 0 && v == 0);
        add_wave(img, u, v, rng.uniform(band.amp_lo, band.amp_hi),
                 rng.uniform(0.0, kTau));
    }
    add_wave(img, carrier_u, carrier_v, rng.uniform(0.03, 0.05),
             rng.uniform(0.0, kTau));
    return img;
}

ImageTensor corpus_checkerboard(int size, Rng& rng) {
    const int cells[3] = {2, 4, 8};
    const int cell = cells[rng.below(3)];
    const int oy = static_cast<int>(rng.below(static_cast<std::uint64_t>(cell)));
    const int ox = static_cast<int>(rng.below(static_cast<std::uint64_t>(cell)));
    const double dark = rng.uniform(0.15, 0.3);
    const double bright = rng.uniform(0.7, 0.85);
    ImageTensor img(size, size, 1);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const int parity = ((y + oy) / cell + (x + ox) / cell) % 2;
            img.at(y, x, 0) = parity == 0 ? dark : bright;
        }
    }
    return img;
}

ImageTensor corpus_filtered_noise(int size, Rng& rng) {
    ImageTensor noise(size, size, 1);
    for (double& v : noise.values) v = rng.uniform();
    const double radius = rng.uniform(size / 8.0, size / 4.0);
    ImageTensor smooth = apply_filter(noise, make_lowpass(size, size, radius));
    double lo = smooth.values[0], hi = smooth.values[0];
    for (double v : smooth.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    for (double& v : smooth.values) v = span > 0.0 ? (v - lo) / span : 0.5;
    return smooth;
}

ImageTensor corpus_blobs(int size, Rng& rng) {
    const int count = 3 + static_cast<int>(rng.below(4));
    ImageTensor img(size, size, 1);
    for (int k = 0; k < count; ++k) {
        const double cy = rng.uniform(0.0, size);
        const double cx = rng.uniform(0.0, size);
        const double sigma = rng.uniform(size / 16.0, size / 6.0);
        const double amp = rng.uniform(0.4, 1.0);
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
                img.at(y, x, 0) += amp * std::exp(-d2 / (2.0 * sigma * sigma));
            }
        }
    }
    double peak = 0.0;
    for (double v : img.values) peak = std::max(peak, v);
    if (peak > 1.0) {
        for (double& v : img.values) v /= peak;
    }
    return img;
}

}  // namespace

MlpAutoencoder make_mlp(int input_dim, int hidden, double init_std, Rng& rng) {
    if (input_dim < 1 || hidden < 1) {
        throw std::invalid_argument("make_mlp: dimensions must be positive");
    }
    MlpAutoencoder m;
    m.input_dim = input_dim;
    m.hidden = hidden;
    m.enc_w.resize(static_cast<std::size_t>(hidden) * static_cast<std::size_t>(input_dim));
    m.enc_b.assign(static_cast<std::size_t>(hidden), 0.0);
    m.dec_w.resize(static_cast<std::size_t>(input_dim) * static_cast<std::size_t>(hidden));
    m.dec_b.assign(static_cast<std::size_t>(input_dim), 0.0);
    for (double& w : m.enc_w) w = rng.normal(0.0, init_std);
    for (double& w : m.dec_w) w = rng.normal(0.0, init_std);
    return m;
}

std::vector<std::vector<double>> mlp_forward(const MlpAutoencoder& model,
                                             const std::vector<std::vector<double>>& batch) {
    const int d = model.input_dim;
    const int h = model.hidden;
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    std::vector<double> hid(static_cast<std::size_t>(h));
    for (const std::vector<double>& x : batch) {
        if (static_cast<int>(x.size()) != d) {
            throw std::invalid_argument("mlp_forward: sample size does not match input_dim");
        }
        for (int j = 0; j < h; ++j) {
            double acc = model.enc_b[static_cast<std::size_t>(j)];
            const double* row = model.enc_w.data() + static_cast<std::size_t>(j) * d;
            for (int i = 0; i < d; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
            hid[static_cast<std::size_t>(j)] = acc > 0.0 ? acc : 0.0;
        }
        std::vector<double> y(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            double acc = model.dec_b[static_cast<std::size_t>(i)];
            const double* row = model.dec_w.data() + static_cast<std::size_t>(i) * h;
            for (int j = 0; j < h; ++j) acc += row[j] * hid[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = std::tanh(acc);
        }
        out.push_back(std::move(y));
    }
    return out;
}

MlpGradients mlp_backward(const MlpAutoencoder& model,
                          const std::vector<std::vector<double>>& batch,
                          const std::vector<std::vector<double>>& grad_recon) {
    if (batch.size() != grad_recon.size()) {
        throw std::invalid_argument("mlp_backward: batch and gradient counts differ");
    }
    const int d = model.input_dim;
    const int h = model.hidden;
    MlpGradients g;
    g.enc_w.assign(model.enc_w.size(), 0.0);
    g.enc_b.assign(model.enc_b.size(), 0.0);
    g.dec_w.assign(model.dec_w.size(), 0.0);
    g.dec_b.assign(model.dec_b.size(), 0.0);

    std::vector<double> hid(static_cast<std::size_t>(h));
    std::vector<double> dzo(static_cast<std::size_t>(d));
    std::vector<double> dzh(static_cast<std::size_t>(h));
    for (std::size_t s = 0; s < batch.size(); ++s) {
        const std::vector<double>& x = batch[s];
        const std::vector<double>& gy = grad_recon[s];
        if (static_cast<int>(x.size()) != d || static_cast<int>(gy.size()) != d) {
            throw std::invalid_argument("mlp_backward: sample size does not match input_dim");
        }
        for (int j = 0; j < h; ++j) {
            double acc = model.enc_b[static_cast<std::size_t>(j)];
            const double* row = model.enc_w.data() + static_cast<std::size_t>(j) * d;
            for (int i = 0; i < d; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
            hid[static_cast<std::size_t>(j)] = acc > 0.0 ? acc : 0.0;
        }
        for (int i = 0; i < d; ++i) {
            double acc = model.dec_b[static_cast<std::size_t>(i)];
            const double* row = model.dec_w.data() + static_cast<std::size_t>(i) * h;
            for (int j = 0; j < h; ++j) acc += row[j] * hid[static_cast<std::size_t>(j)];
            const double y = std::tanh(acc);
            dzo[static_cast<std::size_t>(i)] = gy[static_cast<std::size_t>(i)] * (1.0 - y * y);
        }
        std::fill(dzh.begin(), dzh.end(), 0.0);
        for (int i = 0; i < d; ++i) {
            const double dz = dzo[static_cast<std::size_t>(i)];
            g.dec_b[static_cast<std::size_t>(i)] += dz;
            double* grow = g.dec_w.data() + static_cast<std::size_t>(i) * h;
            const double* wrow = model.dec_w.data() + static_cast<std::size_t>(i) * h;
            for (int j = 0; j < h; ++j) {
                grow[j] += dz * hid[static_cast<std::size_t>(j)];
                dzh[static_cast<std::size_t>(j)] += wrow[j] * dz;
            }
        }
        for (int j = 0; j < h; ++j) {
            if (hid[static_cast<std::size_t>(j)] <= 0.0) continue;  // ReLU gate
            const double dz = dzh[static_cast<std::size_t>(j)];
            g.enc_b[static_cast<std::size_t>(j)] += dz;
            double* grow = g.enc_w.data() + static_cast<std::size_t>(j) * d;
            for (int i = 0; i < d; ++i) grow[i] += dz * x[static_cast<std::size_t>(i)];
        }
    }
    return g;
}

AdamState make_adam(std::size_t size, double lr) {
    AdamState state;
    state.lr = lr;
    state.m.assign(size, 0.0);
    state.v.assign(size, 0.0);
    return state;
}

void adam_step(AdamState& state, std::vector<double>& params,
               const std::vector<double>& grads) {
    if (params.size() != state.m.size() || grads.size() != state.m.size()) {
        throw std::invalid_argument("adam_step: buffer sizes disagree");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

ImageTensor make_grating(int height, int width, int u, int v, double amplitude,
                         double phase) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("make_grating: dimensions must be positive");
    }
    ImageTensor img(height, width, 1);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img.at(y, x, 0) =
                0.5 + amplitude * std::cos(kTau * (static_cast<double>(u) * x / width +
                                                   static_cast<double>(v) * y / height) +
                                           phase);
        }
    }
    return img;
}

std::vector<ImageTensor> generate_corpus(const SyntheticCorpusSpec& spec) {
    if (spec.count < 1 || spec.size < 1) {
        throw std::invalid_argument("corpus: count and size must be positive");
    }
    Rng rng(spec.seed);
    // carrier (u,v) is a per-corpus draw; burn the values even for the other
    // kinds so each kind keeps its own stream unchanged by this choice
    const int band_lo = std::max(1, (7 * spec.size) / 32);
    const int band_span = std::max<int>(1, (5 * spec.size) / 32);
    const int carrier_u = band_lo + static_cast<int>(rng.below(band_span));
    const int carrier_v = band_lo + static_cast<int>(rng.below(band_span));
    std::vector<ImageTensor> corpus;
    corpus.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        switch (spec.kind) {
            case CorpusKind::gratings:
                corpus.push_back(corpus_gratings(spec.size, rng, carrier_u, carrier_v));
                break;
            case CorpusKind::checkerboards:
                corpus.push_back(corpus_checkerboard(spec.size, rng));
                break;
            case CorpusKind::filtered_noise:
                corpus.push_back(corpus_filtered_noise(spec.size, rng));
                break;
            case CorpusKind::blobs:
                corpus.push_back(corpus_blobs(spec.size, rng));
                break;
        }
    }
    return corpus;
}

ReconResult single_image_reconstruct(
    const ImageTensor& target, const ReconOptions& options,
    const std::function<void(int, const ImageTensor&)>& on_step) {
    validate(target, "reconstruction target");
    if (options.steps < 0) {
        throw std::invalid_argument("reconstruct: steps must be >= 0");
    }
    if (options.distance == DistanceKind::spatial) {
        throw std::invalid_argument("reconstruct: distance must be a frequency kind");
    }
    LossConfig cfg;
    cfg.focal = false;
    cfg.distance = options.distance;

    ReconResult result;
    if (options.init) {
        validate(*options.init, "reconstruction init");
        if (!options.init->same_shape(target)) {
            throw std::invalid_argument("reconstruct: init shape must match target");
        }
        result.image = *options.init;
    } else {
        Rng rng(options.seed);
        result.image = ImageTensor(target.height, target.width, target.channels);
        for (double& v : result.image.values) v = rng.uniform(-0.5, 0.5);
    }

    // Catches optimizer blow-ups before the loss rejects the NaN image as a
    // plain argument error.
    const auto ensure_finite = [](const ImageTensor& img, const std::string& where) {
        for (double v : img.values) {
            if (!std::isfinite(v)) {
                throw DivergenceError("reconstruct: image diverged " + where);
            }
        }
    };

    AdamState adam = make_adam(result.image.values.size(), options.lr);
    result.trace.reserve(static_cast<std::size_t>(options.steps) + 1);
    for (int step = 0; step < options.steps; ++step) {
        ensure_finite(result.image, "at step " + std::to_string(step));
        const double value = ffl_forward(target, result.image, cfg);
        if (!std::isfinite(value)) {
            throw DivergenceError("reconstruct: non-finite loss at step " +
                                  std::to_string(step));
        }
        result.trace.push_back(value);
        const ImageTensor grad = ffl_backward(target, result.image, cfg);
        if (options.optimizer == Optimizer::adam) {
            adam_step(adam, result.image.values, grad.values);
        } else {
            for (std::size_t i = 0; i < result.image.values.size(); ++i) {
                result.image.values[i] -= options.lr * grad.values[i];
            }
        }
        if (on_step) on_step(step, result.image);
    }
    ensure_finite(result.image, "after the last step");
    const double final_value = ffl_forward(target, result.image, cfg);
    if (!std::isfinite(final_value)) {
        throw DivergenceError("reconstruct: non-finite loss at final step");
    }
    result.trace.push_back(final_value);
    return result;
}

TrainResult train_autoencoder(const SyntheticCorpusSpec& corpus_spec,
                              const TrainConfig& config) {
    if (config.batch_size < 1 || config.epochs < 0) {
        throw std::invalid_argument("train: batch_size must be >= 1 and epochs >= 0");
    }
    if (config.ffl_weight < 0.0) {
        throw std::invalid_argument("train: ffl_weight must be >= 0");
    }
    const std::vector<ImageTensor> corpus = generate_corpus(corpus_spec);
    const int count = static_cast<int>(corpus.size());
    if (count < 2 * config.batch_size) {
        throw std::invalid_argument("train: corpus must hold at least 2*batch_size images");
    }
    const int heldout_n = std::max(1, count / 10);
    const int train_n = count - heldout_n;
    const int size = corpus_spec.size;
    const int dim = size * size;
    validate(config.loss, size, size);

    // Training samples live on [-1,1] to match the Tanh output.
    std::vector<std::vector<double>> samples;
    samples.reserve(corpus.size());
    for (const ImageTensor& img : corpus) {
        std::vector<double> flat(img.values.size());
        for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = 2.0 * img.values[i] - 1.0;
        samples.push_back(std::move(flat));
    }

    Rng rng(config.seed);
    TrainResult result;
    result.model = make_mlp(dim, config.hidden, config.init_std, rng);

    AdamState adam_ew = make_adam(result.model.enc_w.size(), config.learning_rate);
    AdamState adam_eb = make_adam(result.model.enc_b.size(), config.learning_rate);
    AdamState adam_dw = make_adam(result.model.dec_w.size(), config.learning_rate);
    AdamState adam_db = make_adam(result.model.dec_b.size(), config.learning_rate);

    std::vector<int> order(static_cast<std::size_t>(train_n));
    std::iota(order.begin(), order.end(), 0);
    const int batches = train_n / config.batch_size;
    result.trace.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_mse = 0.0;
        double epoch_ffl = 0.0;
        for (int b = 0; b < batches; ++b) {
            std::vector<std::vector<double>> batch;
            batch.reserve(static_cast<std::size_t>(config.batch_size));
            for (int k = 0; k < config.batch_size; ++k) {
                batch.push_back(
                    samples[static_cast<std::size_t>(order[static_cast<std::size_t>(
                        b * config.batch_size + k)])]);
            }
            const std::vector<std::vector<double>> recon = mlp_forward(result.model, batch);

            const double inv_b = 1.0 / static_cast<double>(config.batch_size);
            const double inv_d = 1.0 / static_cast<double>(dim);
            double mse_value = 0.0;
            std::vector<std::vector<double>> grad_recon(batch.size());
            for (std::size_t s = 0; s < batch.size(); ++s) {
                grad_recon[s].resize(static_cast<std::size_t>(dim));
                for (int i = 0; i < dim; ++i) {
                    const double diff = recon[s][static_cast<std::size_t>(i)] -
                                        batch[s][static_cast<std::size_t>(i)];
                    mse_value += diff * diff * inv_d * inv_b;
                    grad_recon[s][static_cast<std::size_t>(i)] = 2.0 * diff * inv_d * inv_b;
                }
            }

            // NaN recon means the optimizer blew up; report divergence here
            // rather than letting the loss reject the values as bad input.
            if (!std::isfinite(mse_value)) {
                throw DivergenceError("train: model diverged at epoch " +
                                      std::to_string(epoch) + ", batch " +
                                      std::to_string(b));
            }

            std::vector<ImageTensor> targets, outputs;
            targets.reserve(batch.size());
            outputs.reserve(batch.size());
            for (std::size_t s = 0; s < batch.size(); ++s) {
                targets.push_back(flat_to_image(batch[s], size, size, 1));
                outputs.push_back(flat_to_image(recon[s], size, size, 1));
            }
            const BatchResult fflr = batch_ffl(targets, outputs, config.loss);
            if (config.ffl_weight > 0.0) {
                for (std::size_t s = 0; s < batch.size(); ++s) {
                    for (int i = 0; i < dim; ++i) {
                        grad_recon[s][static_cast<std::size_t>(i)] +=
                            config.ffl_weight *
                            fflr.grads[s].values[static_cast<std::size_t>(i)];
                    }
                }
            }

            const double total = mse_value + config.ffl_weight * fflr.value;
            if (!std::isfinite(total)) {
                throw DivergenceError("train: non-finite loss at epoch " +
                                      std::to_string(epoch) + ", batch " +
                                      std::to_string(b));
            }
            epoch_mse += mse_value;
            epoch_ffl += fflr.value;

            const MlpGradients grads = mlp_backward(result.model, batch, grad_recon);
            adam_step(adam_ew, result.model.enc_w, grads.enc_w);
            adam_step(adam_eb, result.model.enc_b, grads.enc_b);
            adam_step(adam_dw, result.model.dec_w, grads.dec_w);
            adam_step(adam_db, result.model.dec_b, grads.dec_b);
        }
        EpochTrace t;
        t.mse = epoch_mse / static_cast<double>(batches);
        t.ffl = epoch_ffl / static_cast<double>(batches);
        t.total = t.mse + config.ffl_weight * t.ffl;
        result.trace.push_back(t);
    }

    // Held-out metrics on the 0..255 scale, averaged over the split. Images
    // smaller than the structural-similarity window get a NaN ssim instead of
    // an error.
    const bool ssim_ok = size >= 11;
    const auto add_into = [](std::vector<double>& dst, const std::vector<double>& src) {
        if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
    };
    MetricReport mean;
    if (!ssim_ok) mean.ssim = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < heldout_n; ++k) {
        const std::size_t idx = static_cast<std::size_t>(train_n + k);
        const std::vector<std::vector<double>> recon =
            mlp_forward(result.model, {samples[idx]});
        ImageTensor target255 = affine(corpus[idx], 255.0, 0.0);
        ImageTensor recon255 = flat_to_image(recon[0], size, size, 1);
        recon255 = affine(recon255, 127.5, 127.5);
        mean.lfd += lfd(target255, recon255);
        mean.psnr += psnr(target255, recon255);
        add_into(mean.lfd_per_channel, lfd_per_channel(target255, recon255));
        add_into(mean.psnr_per_channel, psnr_per_channel(target255, recon255));
        if (ssim_ok) {
            mean.ssim += ssim(target255, recon255);
            add_into(mean.ssim_per_channel, ssim_per_channel(target255, recon255));
        }
    }
    const double inv_n = 1.0 / static_cast<double>(heldout_n);
    mean.lfd *= inv_n;
    mean.psnr *= inv_n;
    mean.ssim *= inv_n;
    for (double& v : mean.lfd_per_channel) v *= inv_n;
    for (double& v : mean.psnr_per_channel) v *= inv_n;
    for (double& v : mean.ssim_per_channel) v *= inv_n;
    result.heldout = mean;
    return result;
}

}  // namespace ffl
