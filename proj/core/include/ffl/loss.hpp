#pragma once

#include <vector>

#include "ffl/image.hpp"
#include "ffl/spectral.hpp"

namespace ffl {

enum class TransformKind { dft, dct };

/// full: squared complex distance. amplitude_only / phase_only: compare just
/// the modulus or just the angle. spatial: no transform, hard-pixel weighting
/// on raw residuals.
enum class DistanceKind { full, amplitude_only, phase_only, spatial };

enum class BatchReduction { mean_per_image, average_spectrum };

struct LossConfig {
    double alpha = 1.0;           // weight exponent, >= 0
    int patch_factor = 1;         // crops per edge; must divide H and W
    TransformKind transform = TransformKind::dft;
    DistanceKind distance = DistanceKind::full;
    bool focal = true;            // false: uniform weights (plain distance)
    BatchReduction batch_reduction = BatchReduction::mean_per_image;
    double epsilon = 1e-8;        // guards the amplitude/phase singularities
};

/// Rejects invalid configs for an H x W input (negative alpha, patch factor
/// not dividing the dimensions, non-positive epsilon).
void validate(const LossConfig& config, int height, int width);

/// Per-channel max-normalized weights in [0,1]. Treated as a constant by
/// every gradient below; it never participates in differentiation.
struct WeightMatrix {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> values;

    double& at(int v, int u, int c) {
        return values[static_cast<std::size_t>((v * width + u) * channels + c)];
    }
    double at(int v, int u, int c) const {
        return values[static_cast<std::size_t>((v * width + u) * channels + c)];
    }
};

/// |F_real - F_fake|^alpha, scaled so each channel's maximum is exactly 1.
/// A channel with no difference gets all-zero weights (no 0/0).
WeightMatrix weight_matrix(const Spectrum& real, const Spectrum& fake, double alpha);

/// Per-coordinate |F_real - F_fake|^2.
ImageTensor freq_distance_map(const Spectrum& real, const Spectrum& fake);

/// Mean of freq_distance_map over coordinates, averaged over channels.
double freq_distance(const Spectrum& real, const Spectrum& fake);

struct EvalResult {
    double value = 0.0;
    /// One matrix per patch, row-major patch order; empty when focal=false.
    std::vector<WeightMatrix> weights;
};

/// Loss value plus the weight matrices it used (for freezing / inspection).
EvalResult ffl_evaluate(const ImageTensor& real, const ImageTensor& fake,
                        const LossConfig& config);

double ffl_forward(const ImageTensor& real, const ImageTensor& fake,
                   const LossConfig& config);

/// Same loss but with caller-supplied weights instead of recomputed ones;
/// `weights` must hold one matrix per patch when config.focal is set. This is
/// the function finite differences of the gradient must probe, since the
/// analytic gradient holds the weights fixed.
double ffl_forward_frozen(const ImageTensor& real, const ImageTensor& fake,
                          const LossConfig& config,
                          const std::vector<WeightMatrix>& weights);

/// Exact d(loss)/d(fake pixel) with the weight matrix fixed at its forward
/// value.
ImageTensor ffl_backward(const ImageTensor& real, const ImageTensor& fake,
                         const LossConfig& config);

struct BatchResult {
    double value = 0.0;
    std::vector<ImageTensor> grads;  // d(value)/d(fake_i), one per batch entry
};

/// mean_per_image: arithmetic mean of per-pair losses. average_spectrum: the
/// batch's real and fake representations are averaged first and the loss is
/// applied once to the averages.
BatchResult batch_ffl(const std::vector<ImageTensor>& reals,
                      const std::vector<ImageTensor>& fakes,
                      const LossConfig& config);

}  // namespace ffl
