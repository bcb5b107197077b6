#pragma once

// Foreground band rendering over a background.
//
// The foreground is a full-width horizontal band, vertically centred, whose
// height is round(s * height) rows, so its area fraction is s.

#include <array>
#include <optional>
#include <string>

#include "cpercept/background.hpp"
#include "cpercept/image.hpp"
#include "cpercept/opacity.hpp"

namespace cpercept {

enum class CompositeMode {
  ConstantColor,       ///< uniform L_P (the uncorrected control)
  ConstantPerception,  ///< L_P blended with the local illumination at opacity y(s)
  PhotoOverlay,        ///< opaque centre line, opacity y at the band edges
};

std::string to_string(CompositeMode mode);

struct CompositeSpec {
  BackgroundKind background = ContinuousScale{};
  double s = 0.1;
  double l_p = 0.5;
  CompositeMode mode = CompositeMode::ConstantPerception;
  OpacityModel model = default_power_model();
  /// Put weight (1 - y) on L_P instead of y.
  bool swap_weights = false;
  /// Exponent p of the overlay ramp y + (1 - y) d^p.
  double edge_profile = 2.0;
  /// Blur radius for photo backgrounds; required when the background is a photo.
  std::optional<double> blur_sigma;
};

struct BandRows {
  int top;
  int height;

  bool contains(int row) const noexcept { return row >= top && row < top + height; }
};

/// Rows covered by the band. Throws DomainError when round(s * height) is 0 or s is outside (0,1].
BandRows band_rows(double s, int height);

/// Normalized distance d in [0,1] of a band row from the nearer band edge:
/// 0 on the outermost rows, 1 on the centre row(s).
double overlay_depth(const BandRows& band, int row);

/// Throws DomainError on an invalid spec (see band_rows, blend, illumination_map).
ImageBuffer composite(const CompositeSpec& spec, int width, int height);

struct Panel {
  BackgroundKind background;
  CompositeMode mode;
  ImageBuffer image;
};

struct PanelOptions {
  int bands = 10;
  bool flipped = false;
  BandLevels levels = BandLevels::Endpoints;
  bool swap_weights = false;
};

/// Six panels: {white, k bands, continuous} x {constant colour, constant
/// perception}, constant-colour row first.
std::array<Panel, 6> panel_grid(double s, double l_p, const OpacityModel& model, int width, int height,
                                const PanelOptions& options = {});

/// Three columns by two rows with `gutter` pixels of mid gray between panels.
ImageBuffer montage(const std::array<Panel, 6>& panels, int gutter = 8);

}  // namespace cpercept
