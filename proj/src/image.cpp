#include "cpercept/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cpercept/errors.hpp"

namespace cpercept {
namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw DomainError("image dimensions " + std::to_string(width) + "x" + std::to_string(height) + " are empty");
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, double fill) : width_(width), height_(height) {
  check_dims(width, height);
  if (!(fill >= 0.0 && fill <= 1.0)) throw DomainError("fill value is outside [0,1]");
  data_.assign(std::size_t(width) * std::size_t(height), fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != std::size_t(width) * std::size_t(height)) {
    throw DomainError("pixel count does not match " + std::to_string(width) + "x" + std::to_string(height));
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0 && v <= 1.0; })) {
    throw DomainError("pixel value outside [0,1]");
  }
}

std::uint8_t to_byte(double v) noexcept {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

std::vector<std::uint8_t> quantize(const ImageBuffer& img) {
  std::vector<std::uint8_t> out(img.size());
  std::transform(img.data().begin(), img.data().end(), out.begin(), to_byte);
  return out;
}

double mean(const ImageBuffer& img) noexcept {
  return std::accumulate(img.data().begin(), img.data().end(), 0.0) / double(img.size());
}

}  // namespace cpercept
