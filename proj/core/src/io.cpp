#include "ffl/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace ffl {

namespace {

void put_u16(std::ostream& out, std::uint16_t v) {
    const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    out.write(bytes, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 4);
}

void put_f32(std::ostream& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint8_t get_u8(std::istream& in, const std::string& path) {
    char b = 0;
    if (!in.read(&b, 1)) throw IoError(path + ": truncated file");
    return static_cast<std::uint8_t>(b);
}

std::uint16_t get_u16(std::istream& in, const std::string& path) {
    const std::uint16_t lo = get_u8(in, path);
    const std::uint16_t hi = get_u8(in, path);
    return static_cast<std::uint16_t>(lo | (hi << 8));
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(get_u8(in, path)) << (8 * i);
    return v;
}

float get_f32(std::istream& in, const std::string& path) {
    return std::bit_cast<float>(get_u32(in, path));
}

/// Next integer token in a PGM/PPM header, skipping whitespace and #-comments.
int read_header_int(std::istream& in, const std::string& path) {
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (!std::isspace(ch)) {
            break;
        }
        ch = in.get();
    }
    if (ch == EOF || !std::isdigit(ch)) throw IoError(path + ": malformed header");
    int value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        ch = in.get();
    }
    if (ch == EOF) throw IoError(path + ": truncated header");
    return value;
}

}  // namespace

ImageTensor read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    int channels = 0;
    if (magic[0] == 'P' && magic[1] == '5') {
        channels = 1;
    } else if (magic[0] == 'P' && magic[1] == '6') {
        channels = 3;
    } else {
        throw IoError(path + ": not a binary PGM (P5) or PPM (P6) file");
    }
    const int width = read_header_int(in, path);
    const int height = read_header_int(in, path);
    const int maxval = read_header_int(in, path);
    if (width < 1 || height < 1) throw IoError(path + ": bad dimensions");
    if (maxval < 1 || maxval > 255) {
        throw IoError(path + ": unsupported maxval " + std::to_string(maxval));
    }
    // read_header_int consumed the single whitespace after maxval already
    const std::size_t count = static_cast<std::size_t>(width) *
                              static_cast<std::size_t>(height) *
                              static_cast<std::size_t>(channels);
    std::vector<char> raw(count);
    if (!in.read(raw.data(), static_cast<std::streamsize>(count))) {
        throw IoError(path + ": truncated pixel data");
    }
    ImageTensor img(height, width, channels);
    for (std::size_t i = 0; i < count; ++i) {
        img.values[i] = static_cast<double>(static_cast<std::uint8_t>(raw[i]));
    }
    return img;
}

void write_image(const std::string& path, const ImageTensor& image) {
    validate(image, "write_image input");
    if (image.channels != 1 && image.channels != 3) {
        throw IoError(path + ": only 1-channel PGM or 3-channel PPM can be written");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << (image.channels == 1 ? "P5" : "P6") << "\n"
        << image.width << " " << image.height << "\n255\n";
    std::vector<char> raw(image.values.size());
    for (std::size_t i = 0; i < image.values.size(); ++i) {
        const double clipped = std::min(255.0, std::max(0.0, image.values[i]));
        raw[i] = static_cast<char>(static_cast<std::uint8_t>(std::lround(clipped)));
    }
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError(path + ": write failed");
}

void write_spectrum_file(const std::string& path, const Spectrum& spectrum) {
    validate(spectrum, "write_spectrum_file input");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out.write("FFLS", 4);
    put_u16(out, 1);  // version
    put_u32(out, static_cast<std::uint32_t>(spectrum.height));
    put_u32(out, static_cast<std::uint32_t>(spectrum.width));
    put_u16(out, static_cast<std::uint16_t>(spectrum.channels));
    out.put(spectrum.orthonormalized ? '\x01' : '\x00');
    for (const std::complex<double>& z : spectrum.values) {
        put_f32(out, static_cast<float>(z.real()));
        put_f32(out, static_cast<float>(z.imag()));
    }
    if (!out) throw IoError(path + ": write failed");
}

Spectrum read_spectrum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    char magic[4] = {0, 0, 0, 0};
    if (!in.read(magic, 4) || std::string(magic, 4) != "FFLS") {
        throw IoError(path + ": not a spectrum file");
    }
    const std::uint16_t version = get_u16(in, path);
    if (version != 1) {
        throw IoError(path + ": unsupported version " + std::to_string(version));
    }
    const std::uint32_t height = get_u32(in, path);
    const std::uint32_t width = get_u32(in, path);
    const std::uint16_t channels = get_u16(in, path);
    const std::uint8_t ortho = get_u8(in, path);
    if (height == 0 || width == 0 || channels == 0) {
        throw IoError(path + ": bad dimensions");
    }
    Spectrum spectrum(static_cast<int>(height), static_cast<int>(width),
                      static_cast<int>(channels), ortho != 0);
    for (std::complex<double>& z : spectrum.values) {
        const float re = get_f32(in, path);
        const float im = get_f32(in, path);
        z = {static_cast<double>(re), static_cast<double>(im)};
    }
    return spectrum;
}

void write_model(const std::string& path, const MlpAutoencoder& model,
                 const ModelMeta& meta) {
    nlohmann::ordered_json header;
    header["format"] = "ffl-mlp";
    header["version"] = 1;
    header["input_dim"] = model.input_dim;
    header["hidden"] = model.hidden;
    header["image"] = {{"height", meta.height}, {"width", meta.width},
                       {"channels", meta.channels}};
    header["tensors"] = {"enc_w", "enc_b", "dec_w", "dec_b"};
    const std::string text = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out.write("FFLM", 4);
    put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const std::vector<double>* tensor :
         {&model.enc_w, &model.enc_b, &model.dec_w, &model.dec_b}) {
        for (double v : *tensor) put_f32(out, static_cast<float>(v));
    }
    if (!out) throw IoError(path + ": write failed");
}

LoadedModel read_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    char magic[4] = {0, 0, 0, 0};
    if (!in.read(magic, 4) || std::string(magic, 4) != "FFLM") {
        throw IoError(path + ": not a model file");
    }
    const std::uint32_t header_len = get_u32(in, path);
    std::string text(header_len, '\0');
    if (!in.read(text.data(), static_cast<std::streamsize>(header_len))) {
        throw IoError(path + ": truncated header");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": bad model header: " + e.what());
    }
    if (header.value("format", "") != "ffl-mlp" || header.value("version", 0) != 1) {
        throw IoError(path + ": unsupported model format");
    }

    LoadedModel loaded;
    loaded.model.input_dim = header.at("input_dim").get<int>();
    loaded.model.hidden = header.at("hidden").get<int>();
    loaded.meta.height = header.at("image").at("height").get<int>();
    loaded.meta.width = header.at("image").at("width").get<int>();
    loaded.meta.channels = header.at("image").at("channels").get<int>();
    if (loaded.model.input_dim < 1 || loaded.model.hidden < 1) {
        throw IoError(path + ": bad model dimensions");
    }

    const std::size_t d = static_cast<std::size_t>(loaded.model.input_dim);
    const std::size_t h = static_cast<std::size_t>(loaded.model.hidden);
    loaded.model.enc_w.resize(h * d);
    loaded.model.enc_b.resize(h);
    loaded.model.dec_w.resize(d * h);
    loaded.model.dec_b.resize(d);
    for (std::vector<double>* tensor :
         {&loaded.model.enc_w, &loaded.model.enc_b, &loaded.model.dec_w,
          &loaded.model.dec_b}) {
        for (double& v : *tensor) v = static_cast<double>(get_f32(in, path));
    }
    return loaded;
}

}  // namespace ffl
