#include "cpercept/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpercept/blend.hpp"
#include "cpercept/errors.hpp"

namespace cpercept {

std::string to_string(CompositeMode mode) {
  switch (mode) {
    case CompositeMode::ConstantColor:
      return "color";
    case CompositeMode::ConstantPerception:
      return "perception";
    case CompositeMode::PhotoOverlay:
      return "overlay";
  }
  return "unknown";
}

BandRows band_rows(double s, int height) {
  if (!(s > 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << "relative size s = " << s << " is outside (0,1]";
    throw DomainError(msg.str());
  }
  if (height < 1) throw DomainError("image height must be positive");
  const int rows = int(std::lround(s * double(height)));
  if (rows < 1) {
    std::ostringstream msg;
    msg << "s = " << s << " gives an empty band at height " << height;
    throw DomainError(msg.str());
  }
  return {(height - rows) / 2, rows};
}

double overlay_depth(const BandRows& band, int row) {
  const int from_edge = std::min(row - band.top, band.top + band.height - 1 - row);
  const int deepest = (band.height - 1) / 2;
  if (deepest == 0) return 1.0;
  return std::clamp(double(from_edge) / double(deepest), 0.0, 1.0);
}

ImageBuffer composite(const CompositeSpec& spec, int width, int height) {
  if (!(spec.l_p >= 0.0 && spec.l_p <= 1.0)) throw DomainError("l_p is outside [0,1]");
  const BandRows band = band_rows(spec.s, height);
  ImageBuffer out = generate(spec.background, width, height);

  if (spec.mode == CompositeMode::ConstantColor) {
    for (int y = band.top; y < band.top + band.height; ++y) {
      std::fill(out.row(y).begin(), out.row(y).end(), spec.l_p);
    }
    return out;
  }

  if (spec.mode == CompositeMode::PhotoOverlay && !(spec.edge_profile > 0.0)) {
    throw DomainError("overlay edge profile exponent must be positive");
  }

  const double y_size = opacity(spec.model, spec.s);
  const ImageBuffer illumination = illumination_map(spec.background, width, height, spec.blur_sigma);

  for (int row = band.top; row < band.top + band.height; ++row) {
    double weight = y_size;
    if (spec.mode == CompositeMode::ConstantPerception) {
      if (spec.swap_weights) weight = 1.0 - y_size;
    } else {
      const double depth = overlay_depth(band, row);
      weight = depth >= 1.0 ? 1.0 : y_size + (1.0 - y_size) * std::pow(depth, spec.edge_profile);
    }
    const auto i_a = illumination.row(row);
    auto dst = out.row(row);
    for (int x = 0; x < width; ++x) {
      dst[std::size_t(x)] = std::clamp(forward(spec.l_p, i_a[std::size_t(x)], weight), 0.0, 1.0);
    }
  }
  return out;
}

std::array<Panel, 6> panel_grid(double s, double l_p, const OpacityModel& model, int width, int height,
                                const PanelOptions& options) {
  const std::array<BackgroundKind, 3> backgrounds{
      WhiteBackground{},
      DiscreteScale{options.bands, options.flipped, options.levels},
      ContinuousScale{options.flipped},
  };
  const std::array<CompositeMode, 2> modes{CompositeMode::ConstantColor, CompositeMode::ConstantPerception};

  auto make = [&](std::size_t i) {
    CompositeSpec spec;
    spec.background = backgrounds[i % 3];
    spec.s = s;
    spec.l_p = l_p;
    spec.mode = modes[i / 3];
    spec.model = model;
    spec.swap_weights = options.swap_weights;
    return Panel{spec.background, spec.mode, composite(spec, width, height)};
  };
  return {make(0), make(1), make(2), make(3), make(4), make(5)};
}

ImageBuffer montage(const std::array<Panel, 6>& panels, int gutter) {
  const int w = panels[0].image.width();
  const int h = panels[0].image.height();
  for (const auto& p : panels) {
    if (p.image.width() != w || p.image.height() != h) throw DomainError("montage panels differ in size");
  }
  if (gutter < 0) throw DomainError("negative gutter");
  ImageBuffer out(3 * w + 2 * gutter, 2 * h + gutter, 0.5);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int x0 = int(i % 3) * (w + gutter);
    const int y0 = int(i / 3) * (h + gutter);
    for (int y = 0; y < h; ++y) {
      const auto src = panels[i].image.row(y);
      std::copy(src.begin(), src.end(), out.row(y0 + y).begin() + x0);
    }
  }
  return out;
}

}  // namespace cpercept
