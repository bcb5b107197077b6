#pragma once

// Procedural backgrounds and the average-illumination maps derived from them.

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "cpercept/image.hpp"

namespace cpercept {

struct WhiteBackground {};

/// How band i of k is assigned a luminance.
enum class BandLevels {
  Endpoints,  ///< i / (k - 1): first band black, last band white
  Midpoints,  ///< (i + 0.5) / k
};

/// k equal-width vertical bands, dark to light left to right unless flipped.
struct DiscreteScale {
  int bands = 10;
  bool flipped = false;
  BandLevels levels = BandLevels::Endpoints;
};

/// Linear ramp x / (width - 1), dark to light left to right unless flipped.
struct ContinuousScale {
  bool flipped = false;
};

/// An arbitrary image; resampled (nearest neighbour) to the requested size.
struct PhotoBackground {
  std::shared_ptr<const ImageBuffer> source;
};

using BackgroundKind = std::variant<WhiteBackground, DiscreteScale, ContinuousScale, PhotoBackground>;

/// Short stable name: "white", "bands10", "continuous", "photo".
std::string label(const BackgroundKind& kind);

/// Throws DomainError for a zero dimension, fewer than 2 bands, or a photo without a source.
ImageBuffer generate(const BackgroundKind& kind, int width, int height);

/// Separable Gaussian, kernel truncated at 3 sigma and renormalized,
/// clamp-to-edge borders. Throws DomainError unless sigma > 0.
ImageBuffer blur(const ImageBuffer& img, double sigma);

/// Analytic average illumination for a column: 1 for white, the continuous
/// ramp for both scale kinds. Throws DomainError for photos (blur them instead)
/// or an out-of-range column.
double illumination_at(const BackgroundKind& kind, int width, int column);

/// Full illumination map: analytic for procedural kinds, blur(generate(...))
/// for photos. Throws DomainError for a photo without `photo_sigma`.
ImageBuffer illumination_map(const BackgroundKind& kind, int width, int height,
                             std::optional<double> photo_sigma = std::nullopt);

/// 5% of the image diagonal.
double default_photo_sigma(int width, int height) noexcept;

}  // namespace cpercept
