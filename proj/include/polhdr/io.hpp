#pragma once

#include <string>

#include "polhdr/image.hpp"

namespace polhdr {

/// Portable Float Map, grayscale ("Pf"). Raw 32-bit floats, rows stored
/// bottom-to-top; the sign of the scale line encodes endianness.
Image2D read_pfm(const std::string& path);
void write_pfm(const std::string& path, const Image2D& image);

/// Binary PGM (P5), maxval 255 or 65535 (16-bit samples big-endian).
/// Values are rounded to integer codes on write.
LdrImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const LdrImage& image);

/// 8- or 16-bit grayscale PNG. Values are rounded to integer codes on
/// write; bit depths other than 8/16 are promoted to the nearest container
/// and the stored max reflects the original depth.
LdrImage read_png(const std::string& path);
void write_png(const std::string& path, const LdrImage& image);

/// Dispatch on file extension: .pgm -> PGM, .png -> PNG.
LdrImage read_ldr(const std::string& path);
void write_ldr(const std::string& path, const LdrImage& image);

/// FNV-1a 64-bit over a file's bytes, hex string. Used for report provenance.
std::string hash_file(const std::string& path);

}  // namespace polhdr
