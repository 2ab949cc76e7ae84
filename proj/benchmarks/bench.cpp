// Hot-path timings: transforms (fast-path and chirp-z sizes), the weighted
// frequency distance round trip, and the metric kernels.

#include <benchmark/benchmark.h>

#include "ffl/filters.hpp"
#include "ffl/loss.hpp"
#include "ffl/metrics.hpp"
#include "ffl/rng.hpp"
#include "ffl/spectral.hpp"

namespace {

ffl::ImageTensor seeded_image(int h, int w, int c, std::uint64_t seed) {
    ffl::Rng rng(seed);
    ffl::ImageTensor img(h, w, c);
    for (double& v : img.values) v = rng.uniform();
    return img;
}

void bm_dft2_pow2_64(benchmark::State& state) {
    const ffl::ImageTensor img = seeded_image(64, 64, 1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::dft2(img, true));
}
BENCHMARK(bm_dft2_pow2_64);

void bm_dft2_pow2_256(benchmark::State& state) {
    const ffl::ImageTensor img = seeded_image(256, 256, 1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::dft2(img, true));
}
BENCHMARK(bm_dft2_pow2_256);

void bm_dft2_chirpz_96(benchmark::State& state) {
    const ffl::ImageTensor img = seeded_image(96, 96, 1, 3);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::dft2(img, true));
}
BENCHMARK(bm_dft2_chirpz_96);

void bm_idft2_64(benchmark::State& state) {
    const ffl::Spectrum spec = ffl::dft2(seeded_image(64, 64, 1, 4), true);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::idft2(spec));
}
BENCHMARK(bm_idft2_64);

void bm_dct2_64(benchmark::State& state) {
    const ffl::ImageTensor img = seeded_image(64, 64, 1, 5);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::dct2(img));
}
BENCHMARK(bm_dct2_64);

void bm_weight_matrix_64(benchmark::State& state) {
    const ffl::Spectrum a = ffl::dft2(seeded_image(64, 64, 1, 6), true);
    const ffl::Spectrum b = ffl::dft2(seeded_image(64, 64, 1, 7), true);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::weight_matrix(a, b, 1.0));
}
BENCHMARK(bm_weight_matrix_64);

void bm_ffl_forward_64(benchmark::State& state) {
    const ffl::ImageTensor real = seeded_image(64, 64, 1, 8);
    const ffl::ImageTensor fake = seeded_image(64, 64, 1, 9);
    const ffl::LossConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(ffl::ffl_forward(real, fake, cfg));
}
BENCHMARK(bm_ffl_forward_64);

void bm_ffl_backward_64(benchmark::State& state) {
    const ffl::ImageTensor real = seeded_image(64, 64, 1, 10);
    const ffl::ImageTensor fake = seeded_image(64, 64, 1, 11);
    const ffl::LossConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(ffl::ffl_backward(real, fake, cfg));
}
BENCHMARK(bm_ffl_backward_64);

void bm_ffl_backward_patch4_64(benchmark::State& state) {
    const ffl::ImageTensor real = seeded_image(64, 64, 1, 12);
    const ffl::ImageTensor fake = seeded_image(64, 64, 1, 13);
    ffl::LossConfig cfg;
    cfg.patch_factor = 4;
    for (auto _ : state) benchmark::DoNotOptimize(ffl::ffl_backward(real, fake, cfg));
}
BENCHMARK(bm_ffl_backward_patch4_64);

void bm_lfd_64(benchmark::State& state) {
    const ffl::ImageTensor real = seeded_image(64, 64, 1, 14);
    const ffl::ImageTensor fake = seeded_image(64, 64, 1, 15);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::lfd(real, fake));
}
BENCHMARK(bm_lfd_64);

void bm_ssim_64(benchmark::State& state) {
    const ffl::ImageTensor real = seeded_image(64, 64, 1, 16);
    const ffl::ImageTensor fake = seeded_image(64, 64, 1, 17);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::ssim(real, fake, 1.0));
}
BENCHMARK(bm_ssim_64);

void bm_lowpass_filter_64(benchmark::State& state) {
    const ffl::ImageTensor img = seeded_image(64, 64, 1, 18);
    const ffl::SpectralMask mask = ffl::make_lowpass(64, 64, 8.0);
    for (auto _ : state) benchmark::DoNotOptimize(ffl::apply_filter(img, mask));
}
BENCHMARK(bm_lowpass_filter_64);

}  // namespace

BENCHMARK_MAIN();
