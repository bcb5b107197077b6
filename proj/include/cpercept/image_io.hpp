#pragma once

#include <filesystem>

#include "cpercept/image.hpp"

namespace cpercept {

// 8-bit grayscale output, byte = round(255 v), no transfer curve.
void write_png(const std::filesystem::path& path, const ImageBuffer& img);
void write_pgm(const std::filesystem::path& path, const ImageBuffer& img);

/// Reads gray, gray+alpha, RGB or RGBA PNGs (8 or 16 bit). Colour is reduced
/// to luminance with Rec. 709 weights on the stored values; alpha is dropped.
ImageBuffer read_png(const std::filesystem::path& path);
/// Binary P5 with maxval up to 65535.
ImageBuffer read_pgm(const std::filesystem::path& path);

/// Dispatches on the file extension (.png, .pgm).
ImageBuffer read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ImageBuffer& img);

}  // namespace cpercept
