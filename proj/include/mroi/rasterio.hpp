#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mroi/raster.hpp"

namespace mroi {

/// Reads an 8-bit PNG or binary PGM (P5) / PPM (P6) file. Grayscale files
/// yield 1 channel; RGB, RGBA and palette files yield 3 (alpha dropped).
/// Throws Error with io, unsupported_format, unsupported_bit_depth or
/// malformed.
RasterImage load_image(const std::filesystem::path& path);

/// Writes PNG for a ".png" extension, PGM/PPM for ".pgm"/".ppm" (the
/// latter requires 3 channels). The file is written via temp + rename.
void save_image(const RasterImage& img, const std::filesystem::path& path);

/// Masks are written as 8-bit grayscale holding only 0 and 255.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);
void save_plane(const ChannelPlane& plane, const std::filesystem::path& path);

/// Red, green and blue planes; a 1-channel image is replicated three times.
std::array<ChannelPlane, 3> split_channels(const RasterImage& img);

/// Inverse of split_channels for 3-channel images.
RasterImage interleave_channels(const std::array<ChannelPlane, 3>& planes);

RasterImage to_rgb(const RasterImage& img);

using Rgb = std::array<std::uint8_t, 3>;

struct OverlayBox {
  Rect rect;
  Rgb color{255, 0, 0};
};

struct OverlaySpec {
  RasterImage base;
  std::vector<OverlayBox> boxes;
  std::optional<BinaryMask> mask;
  Rgb tint{0, 255, 0};
};

/// Renders the overlay in memory: the base converted to RGB, foreground
/// mask pixels blended 50/50 with the tint, then a 1-pixel border drawn
/// for each box. Boxes outside the base bounds are a malformed spec.
RasterImage rasterize_overlay(const OverlaySpec& spec);

/// rasterize_overlay followed by an RGB PNG write.
void render_overlay(const OverlaySpec& spec, const std::filesystem::path& path);

/// Writes bytes to `path` through a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace mroi
