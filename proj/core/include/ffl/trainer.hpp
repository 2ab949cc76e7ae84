#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffl/image.hpp"
#include "ffl/loss.hpp"
#include "ffl/metrics.hpp"
#include "ffl/rng.hpp"

namespace ffl {

/// Raised when a training or reconstruction loss stops being finite; the
/// message names the step where it happened.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully-connected autoencoder: x -> ReLU(We x + be) -> Tanh(Wd h + bd).
/// Weights are row-major (output, input).
struct MlpAutoencoder {
    int input_dim = 0;
    int hidden = 0;
    std::vector<double> enc_w;  // hidden x input_dim
    std::vector<double> enc_b;  // hidden
    std::vector<double> dec_w;  // input_dim x hidden
    std::vector<double> dec_b;  // input_dim
};

/// Weights drawn from N(0, init_std), biases zero.
MlpAutoencoder make_mlp(int input_dim, int hidden, double init_std, Rng& rng);

struct MlpGradients {
    std::vector<double> enc_w;
    std::vector<double> enc_b;
    std::vector<double> dec_w;
    std::vector<double> dec_b;
};

/// One reconstruction per batch row; inputs are flattened samples.
std::vector<std::vector<double>> mlp_forward(const MlpAutoencoder& model,
                                             const std::vector<std::vector<double>>& batch);

/// Exact parameter gradients given upstream d(loss)/d(reconstruction) per
/// row; contributions are summed over the batch (scale the upstream gradients
/// for a mean).
MlpGradients mlp_backward(const MlpAutoencoder& model,
                          const std::vector<std::vector<double>>& batch,
                          const std::vector<std::vector<double>>& grad_recon);

/// Bias-corrected Adam for a single parameter tensor.
struct AdamState {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;
};

AdamState make_adam(std::size_t size, double lr);
void adam_step(AdamState& state, std::vector<double>& params,
               const std::vector<double>& grads);

enum class CorpusKind { gratings, checkerboards, filtered_noise, blobs };

/// Seeded procedural corpus; every image is single-channel size x size with
/// values in [0,1].
struct SyntheticCorpusSpec {
    CorpusKind kind = CorpusKind::gratings;
    int count = 0;
    int size = 0;
    std::uint64_t seed = 0;
};

std::vector<ImageTensor> generate_corpus(const SyntheticCorpusSpec& spec);

/// Single 2D sinusoid: 0.5 + amplitude * cos(2 pi (u x / W + v y / H) + phase).
/// With |amplitude| <= 0.5 the values stay in [0,1] and the spectrum carries
/// all AC energy at +-(u, v).
ImageTensor make_grating(int height, int width, int u, int v, double amplitude,
                         double phase);

enum class Optimizer { adam, gradient_descent };

/// Settings for descending a frequency distance on a free image. `init`
/// overrides the seeded uniform noise start when non-null (tests use it to
/// pin the start point).
struct ReconOptions {
    DistanceKind distance = DistanceKind::full;
    int steps = 2000;
    double lr = 0.01;
    std::uint64_t seed = 0;
    Optimizer optimizer = Optimizer::adam;
    const ImageTensor* init = nullptr;
};

struct ReconResult {
    ImageTensor image;
    std::vector<double> trace;  // loss per step, including the start: steps+1 entries
};

/// Gradient-descends the chosen unweighted frequency distance from seeded
/// noise toward `target` (expected on the [-1,1] scale). `on_step` fires
/// after every update with the step index and current image.
ReconResult single_image_reconstruct(
    const ImageTensor& target, const ReconOptions& options,
    const std::function<void(int, const ImageTensor&)>& on_step = {});

struct TrainConfig {
    int epochs = 30;
    int batch_size = 128;
    std::uint64_t seed = 0;
    double ffl_weight = 1.0;  // lambda in total = mse + lambda * ffl
    double learning_rate = 0.001;
    int hidden = 256;
    double init_std = 0.02;
    LossConfig loss;
};

struct EpochTrace {
    double mse = 0.0;
    double ffl = 0.0;
    double total = 0.0;
};

struct TrainResult {
    MlpAutoencoder model;
    MetricReport heldout;              // 0..255 scale, averaged over the held-out split
    std::vector<EpochTrace> trace;     // one entry per epoch
};

/// Trains the autoencoder on the corpus mapped to [-1,1], holding out the
/// last 10% of images for metrics. Deterministic given (spec, config).
TrainResult train_autoencoder(const SyntheticCorpusSpec& corpus_spec,
                              const TrainConfig& config);

}  // namespace ffl
