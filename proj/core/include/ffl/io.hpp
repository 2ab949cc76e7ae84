#pragma once

#include <stdexcept>
#include <string>

#include "ffl/image.hpp"
#include "ffl/spectral.hpp"
#include "ffl/trainer.hpp"

namespace ffl {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Binary PGM (P5, 1 channel) or PPM (P6, 3 channels), maxval <= 255.
/// Values come back as doubles on the 0..255 scale.
ImageTensor read_image(const std::string& path);

/// Writes P5 for 1 channel, P6 for 3. Input is expected on the 0..255 scale;
/// this rounds and clips to 8 bits, the only lossy step in the pipeline.
void write_image(const std::string& path, const ImageTensor& image);

/// Binary spectrum container: magic "FFLS", version u16, height u32,
/// width u32, channels u16, orthonormalized u8 (all little-endian), then
/// interleaved (re, im) float32 pairs row-major (v, u, c).
void write_spectrum_file(const std::string& path, const Spectrum& spectrum);
Spectrum read_spectrum_file(const std::string& path);

/// Image shape the autoencoder was trained on; rides along in the model dump
/// so a loaded model can be applied without the original config.
struct ModelMeta {
    int height = 0;
    int width = 0;
    int channels = 0;
};

/// Binary model dump: magic "FFLM", u32 JSON header length, JSON header
/// (dimensions + tensor order), then float32 little-endian parameters in the
/// order enc_w, enc_b, dec_w, dec_b.
void write_model(const std::string& path, const MlpAutoencoder& model,
                 const ModelMeta& meta);

struct LoadedModel {
    MlpAutoencoder model;
    ModelMeta meta;
};

LoadedModel read_model(const std::string& path);

}  // namespace ffl
