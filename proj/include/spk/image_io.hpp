#pragma once

#include <filesystem>

#include "spk/image.hpp"

namespace spk {

/// Raw-float image file:
///   64-byte ASCII header "SPKIMG1\n" "w=<int>\n" "h=<int>\n" "pitch=<decimal>\n"
///   space-padded to 64 bytes, then w*h little-endian IEEE-754 doubles, row-major.
inline constexpr std::size_t kImageHeaderSize = 64;

ImageGrid read_image(const std::filesystem::path& path);
void write_image(const ImageGrid& img, const std::filesystem::path& path);

/// 16-bit binary PGM (P5, maxval 65535), min-max normalized. A constant
/// image exports as all zeros.
void write_pgm(const ImageGrid& img, const std::filesystem::path& path);

/// Reads an 8- or 16-bit binary PGM; samples are promoted to double
/// without rescaling.
ImageGrid read_pgm(const std::filesystem::path& path, double pitch);

}  // namespace spk
