#include "cpercept/background.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpercept/errors.hpp"

namespace cpercept {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Continuous ramp value of a column; a one-column ramp is black.
double ramp(int width, int column, bool flipped) {
  if (width == 1) return 0.0;
  const int x = flipped ? width - 1 - column : column;
  return double(x) / double(width - 1);
}

double band_value(const DiscreteScale& scale, int width, int column) {
  const int x = scale.flipped ? width - 1 - column : column;
  const long long k = scale.bands;
  const int band = int(std::min<long long>(k - 1, (static_cast<long long>(x) * k) / width));
  if (scale.levels == BandLevels::Midpoints) return (double(band) + 0.5) / double(k);
  return double(band) / double(k - 1);
}

void check_kind(const BackgroundKind& kind) {
  if (const auto* scale = std::get_if<DiscreteScale>(&kind); scale && scale->bands < 2) {
    throw DomainError("a discrete scale needs at least 2 bands");
  }
  if (const auto* photo = std::get_if<PhotoBackground>(&kind); photo && !photo->source) {
    throw DomainError("photo background has no source image");
  }
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = int(std::ceil(3.0 * sigma));
  std::vector<double> kernel(std::size_t(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-double(i) * double(i) / (2.0 * sigma * sigma));
    kernel[std::size_t(i + radius)] = w;
    total += w;
  }
  for (double& w : kernel) w /= total;
  return kernel;
}

}  // namespace

std::string label(const BackgroundKind& kind) {
  return std::visit(Overloaded{
                        [](const WhiteBackground&) { return std::string("white"); },
                        [](const DiscreteScale& d) { return "bands" + std::to_string(d.bands); },
                        [](const ContinuousScale&) { return std::string("continuous"); },
                        [](const PhotoBackground&) { return std::string("photo"); },
                    },
                    kind);
}

ImageBuffer generate(const BackgroundKind& kind, int width, int height) {
  check_kind(kind);
  ImageBuffer img(width, height, 1.0);
  std::visit(Overloaded{
                 [](const WhiteBackground&) {},
                 [&](const DiscreteScale& scale) {
                   for (int x = 0; x < width; ++x) img.at(x, 0) = band_value(scale, width, x);
                 },
                 [&](const ContinuousScale& scale) {
                   for (int x = 0; x < width; ++x) img.at(x, 0) = ramp(width, x, scale.flipped);
                 },
                 [&](const PhotoBackground& photo) {
                   const ImageBuffer& src = *photo.source;
                   for (int y = 0; y < height; ++y) {
                     const int sy = int((std::int64_t(2 * y + 1) * src.height()) / (2 * std::int64_t(height)));
                     for (int x = 0; x < width; ++x) {
                       const int sx = int((std::int64_t(2 * x + 1) * src.width()) / (2 * std::int64_t(width)));
                       img.at(x, y) = src.at(sx, sy);
                     }
                   }
                 },
             },
             kind);
  if (!std::holds_alternative<PhotoBackground>(kind)) {
    const auto first = img.row(0);
    for (int y = 1; y < height; ++y) std::copy(first.begin(), first.end(), img.row(y).begin());
  }
  return img;
}

ImageBuffer blur(const ImageBuffer& img, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("blur sigma must be positive");
  const auto kernel = gaussian_kernel(sigma);
  const int radius = int(kernel.size() / 2);
  const int width = img.width();
  const int height = img.height();

  // Horizontal pass over an edge-replicated copy of each row.
  std::vector<double> horizontal(img.size());
  std::vector<double> padded(std::size_t(width + 2 * radius));
  for (int y = 0; y < height; ++y) {
    const auto src = img.row(y);
    std::fill(padded.begin(), padded.begin() + radius, src.front());
    std::copy(src.begin(), src.end(), padded.begin() + radius);
    std::fill(padded.begin() + radius + width, padded.end(), src.back());
    double* dst = horizontal.data() + std::size_t(y) * std::size_t(width);
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      const double* window = padded.data() + x;
      for (std::size_t k = 0; k < kernel.size(); ++k) acc += kernel[k] * window[k];
      dst[x] = acc;
    }
  }

  // Vertical pass: accumulate whole rows.
  ImageBuffer out(width, height, 0.0);
  for (int y = 0; y < height; ++y) {
    auto dst = out.row(y);
    for (int k = -radius; k <= radius; ++k) {
      const int sy = std::clamp(y + k, 0, height - 1);
      const double w = kernel[std::size_t(k + radius)];
      const double* src = horizontal.data() + std::size_t(sy) * std::size_t(width);
      for (int x = 0; x < width; ++x) dst[std::size_t(x)] += w * src[x];
    }
    for (double& v : dst) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

double illumination_at(const BackgroundKind& kind, int width, int column) {
  check_kind(kind);
  if (width < 1 || column < 0 || column >= width) {
    throw DomainError("column " + std::to_string(column) + " is outside a width of " + std::to_string(width));
  }
  return std::visit(Overloaded{
                        [](const WhiteBackground&) { return 1.0; },
                        [&](const DiscreteScale& scale) { return ramp(width, column, scale.flipped); },
                        [&](const ContinuousScale& scale) { return ramp(width, column, scale.flipped); },
                        [](const PhotoBackground&) -> double {
                          throw DomainError("photo backgrounds have no analytic illumination; blur them");
                        },
                    },
                    kind);
}

ImageBuffer illumination_map(const BackgroundKind& kind, int width, int height, std::optional<double> photo_sigma) {
  if (std::holds_alternative<PhotoBackground>(kind)) {
    if (!photo_sigma) throw DomainError("photo background needs a blur sigma");
    return blur(generate(kind, width, height), *photo_sigma);
  }
  ImageBuffer map(width, height, 0.0);
  for (int x = 0; x < width; ++x) map.at(x, 0) = illumination_at(kind, width, x);
  const auto first = map.row(0);
  for (int y = 1; y < height; ++y) std::copy(first.begin(), first.end(), map.row(y).begin());
  return map;
}

double default_photo_sigma(int width, int height) noexcept { return 0.05 * std::hypot(double(width), double(height)); }

}  // namespace cpercept
