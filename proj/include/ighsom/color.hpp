#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ighsom/matrix.hpp"

namespace ighsom {

/// Top-3 principal axes of the feature space.
struct PcaBasis {
  std::vector<double> mean;
  std::array<std::vector<double>, 3> components;  // orthonormal unless dim < 3 (then zero-padded)
  std::array<double, 3> eigenvalues{};             // descending, >= 0
  bool degenerate = false;                         // rank < 3
};

PcaBasis fit_pca(const Matrix& features);

struct RgbColor {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const RgbColor&) const = default;
};

/// Lowercase "#rrggbb".
std::string to_hex(RgbColor c);

struct ChannelRange {
  double min = 0.0;
  double max = 0.0;
};
using ChannelRanges = std::array<ChannelRange, 3>;

std::array<double, 3> project(std::span<const double> weight, const PcaBasis& basis);

/// Projection, min-max scaled per channel to 0..255 with half-up rounding; a flat channel is 128.
RgbColor unit_color(std::span<const double> weight, const PcaBasis& basis, const ChannelRanges& ranges);

/// Colors for one rendering pass: channel ranges are taken over all `weights` rows.
std::vector<RgbColor> render_colors(const Matrix& weights, const PcaBasis& basis);
ChannelRanges channel_ranges(const Matrix& weights, const PcaBasis& basis);

/// Hue angle in degrees, [0, 360): atan2(sqrt(3)(G-B), 2R-G-B). Achromatic colors map to 0.
double hue(RgbColor c);

}  // namespace ighsom
