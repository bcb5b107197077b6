#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cpercept {

/// Grayscale raster of display-referred luminance in [0,1], row-major.
class ImageBuffer {
 public:
  /// Throws DomainError for a zero dimension or a fill value outside [0,1].
  ImageBuffer(int width, int height, double fill = 0.0);
  /// Throws DomainError on a size mismatch or any value outside [0,1].
  ImageBuffer(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  double at(int x, int y) const { return data_[index(x, y)]; }
  double& at(int x, int y) { return data_[index(x, y)]; }

  std::span<const double> row(int y) const { return {data_.data() + index(0, y), std::size_t(width_)}; }
  std::span<double> row(int y) { return {data_.data() + index(0, y), std::size_t(width_)}; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept { return std::size_t(y) * std::size_t(width_) + std::size_t(x); }

  int width_;
  int height_;
  std::vector<double> data_;
};

/// round(255 v) per pixel, after clamping v to [0,1].
std::uint8_t to_byte(double v) noexcept;
std::vector<std::uint8_t> quantize(const ImageBuffer& img);

double mean(const ImageBuffer& img) noexcept;

}  // namespace cpercept
