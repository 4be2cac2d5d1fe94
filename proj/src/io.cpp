#include "polhdr/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "polhdr/error.hpp"

namespace polhdr {

namespace {

constexpr bool kHostLittleEndian = std::endian::native == std::endian::little;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(Stage::Io, path + ": " + what);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(path, "cannot open for reading");
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(path, "cannot open for writing");
    return f;
}

// Reads one whitespace-delimited header token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(char(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(char(c));
    return tok;
}

int parse_int(const std::string& tok, const std::string& path, const char* what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(path, std::string("bad ") + what + " '" + tok + "'");
    }
}

uint32_t byteswap32(uint32_t v) {
    return ((v & 0xFF000000u) >> 24) | ((v & 0x00FF0000u) >> 8) | ((v & 0x0000FF00u) << 8) |
           ((v & 0x000000FFu) << 24);
}

}  // namespace

Image2D read_pfm(const std::string& path) {
    auto f = open_in(path);
    std::string magic = next_token(f);
    if (magic == "PF") fail(path, "color PFM not supported (expected grayscale 'Pf')");
    if (magic != "Pf") fail(path, "not a PFM file (magic '" + magic + "')");
    int w = parse_int(next_token(f), path, "width");
    int h = parse_int(next_token(f), path, "height");
    if (w <= 0 || h <= 0) fail(path, "non-positive dimensions");
    double scale;
    try {
        scale = std::stod(next_token(f));
    } catch (const std::exception&) {
        fail(path, "bad scale line");
    }
    const bool file_little = scale < 0.0;

    std::vector<float> row(std::size_t(w), 0.0f);
    std::vector<double> data(std::size_t(w) * h);
    // PFM rows run bottom-to-top.
    for (int y = h - 1; y >= 0; --y) {
        f.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
        if (!f) fail(path, "truncated pixel data");
        for (int x = 0; x < w; ++x) {
            float v = row[std::size_t(x)];
            if (file_little != kHostLittleEndian) {
                uint32_t bits;
                std::memcpy(&bits, &v, 4);
                bits = byteswap32(bits);
                std::memcpy(&v, &bits, 4);
            }
            data[std::size_t(y) * w + x] = double(v);
        }
    }
    try {
        return Image2D(w, h, std::move(data));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

void write_pfm(const std::string& path, const Image2D& image) {
    auto f = open_out(path);
    f << "Pf\n" << image.width() << " " << image.height() << "\n";
    f << (kHostLittleEndian ? "-1.0" : "1.0") << "\n";
    std::vector<float> row(std::size_t(image.width()));
    for (int y = image.height() - 1; y >= 0; --y) {
        for (int x = 0; x < image.width(); ++x) row[std::size_t(x)] = float(image(y, x));
        f.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
    }
    if (!f) fail(path, "write failed");
}

LdrImage read_pgm(const std::string& path) {
    auto f = open_in(path);
    std::string magic = next_token(f);
    if (magic != "P5") fail(path, "not a binary PGM (magic '" + magic + "')");
    int w = parse_int(next_token(f), path, "width");
    int h = parse_int(next_token(f), path, "height");
    int maxval = parse_int(next_token(f), path, "maxval");
    if (w <= 0 || h <= 0) fail(path, "non-positive dimensions");
    if (maxval != 255 && maxval != 65535) fail(path, "unsupported maxval (want 255 or 65535)");
    const int depth = maxval == 255 ? 8 : 16;
    std::vector<double> data(std::size_t(w) * h);
    if (depth == 8) {
        std::vector<uint8_t> buf(data.size());
        f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
        if (!f) fail(path, "truncated pixel data");
        for (std::size_t i = 0; i < data.size(); ++i) data[i] = double(buf[i]);
    } else {
        std::vector<uint8_t> buf(data.size() * 2);
        f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
        if (!f) fail(path, "truncated pixel data");
        for (std::size_t i = 0; i < data.size(); ++i)
            data[i] = double((uint16_t(buf[2 * i]) << 8) | buf[2 * i + 1]);  // big-endian
    }
    return LdrImage(Image2D(w, h, std::move(data)), depth);
}

void write_pgm(const std::string& path, const LdrImage& image) {
    const int depth = image.bit_depth() <= 8 ? 8 : 16;
    const int maxval = depth == 8 ? 255 : 65535;
    auto f = open_out(path);
    f << "P5\n" << image.width() << " " << image.height() << "\n" << maxval << "\n";
    const auto& img = image.image();
    if (depth == 8) {
        std::vector<uint8_t> buf(img.size());
        for (std::size_t i = 0; i < img.size(); ++i)
            buf[i] = uint8_t(clip(std::round(img.at_index(i)), 255.0));
        f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    } else {
        std::vector<uint8_t> buf(img.size() * 2);
        for (std::size_t i = 0; i < img.size(); ++i) {
            auto v = uint16_t(clip(std::round(img.at_index(i)), 65535.0));
            buf[2 * i] = uint8_t(v >> 8);
            buf[2 * i + 1] = uint8_t(v & 0xFF);
        }
        f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    }
    if (!f) fail(path, "write failed");
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

LdrImage read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail(path, "cannot open for reading");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "png_create_info_struct failed");
    }
    std::vector<std::vector<uint8_t>> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "libpng error while reading");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int depth = png_get_bit_depth(png, info);
    int color = png_get_color_type(png, info);

    // Normalize everything to 8/16-bit grayscale.
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);
    depth = png_get_bit_depth(png, info);

    rows.assign(h, std::vector<uint8_t>(png_get_rowbytes(png, info)));
    std::vector<png_bytep> row_ptrs(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = rows[y].data();
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<double> data(std::size_t(w) * h);
    for (png_uint_32 y = 0; y < h; ++y) {
        const uint8_t* row = rows[y].data();
        for (png_uint_32 x = 0; x < w; ++x) {
            double v = depth == 16 ? double((uint16_t(row[2 * x]) << 8) | row[2 * x + 1])
                                   : double(row[x]);  // PNG 16-bit is big-endian
            data[std::size_t(y) * w + x] = v;
        }
    }
    return LdrImage(Image2D(int(w), int(h), std::move(data)), depth == 16 ? 16 : 8);
}

void write_png(const std::string& path, const LdrImage& image) {
    const int depth = image.bit_depth() <= 8 ? 8 : 16;
    const double maxval = depth == 8 ? 255.0 : 65535.0;

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(path, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "libpng error while writing");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(image.width()), png_uint_32(image.height()), depth,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const auto& img = image.image();
    const std::size_t rowbytes = std::size_t(image.width()) * (depth / 8);
    std::vector<uint8_t> row(rowbytes);
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            double v = clip(std::round(img(y, x)), maxval);
            if (depth == 8) {
                row[std::size_t(x)] = uint8_t(v);
            } else {
                auto u = uint16_t(v);
                row[std::size_t(2 * x)] = uint8_t(u >> 8);
                row[std::size_t(2 * x) + 1] = uint8_t(u & 0xFF);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

namespace {

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() &&
           std::equal(suf.rbegin(), suf.rend(), s.rbegin(),
                      [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

}  // namespace

LdrImage read_ldr(const std::string& path) {
    if (has_suffix(path, ".pgm")) return read_pgm(path);
    if (has_suffix(path, ".png")) return read_png(path);
    fail(path, "unsupported LDR format (want .png or .pgm)");
}

void write_ldr(const std::string& path, const LdrImage& image) {
    if (has_suffix(path, ".pgm")) return write_pgm(path, image);
    if (has_suffix(path, ".png")) return write_png(path, image);
    fail(path, "unsupported LDR format (want .png or .pgm)");
}

std::string hash_file(const std::string& path) {
    auto f = open_in(path);
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= uint64_t(uint8_t(buf[i]));
            h *= 0x100000001b3ull;
        }
        if (!f) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

}  // namespace polhdr
