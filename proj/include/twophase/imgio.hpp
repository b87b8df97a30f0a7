#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "twophase/field.hpp"

namespace twophase {

enum class ImageFormat { pgm, png };

/// What read_image() found in a file. The format comes from magic bytes, never the extension.
struct ImageSource {
  std::filesystem::path path;
  ImageFormat format = ImageFormat::pgm;
  int bit_depth = 8;  ///< 8 or 16 (PGM maxval above 255 counts as 16).
  int channels = 1;   ///< 1 (gray) or 3 (RGB; alpha is dropped).
  int width = 0;
  int height = 0;
};

struct LoadedImage {
  ImageSource source;
  ScalarField pixels;  ///< Intensities in [0, 1].
};

/// Reads P2/P5 PGM or grayscale/RGB PNG, normalised by the format's max value.
/// RGB is reduced with Rec. 601 weights (0.299, 0.587, 0.114).
///
/// Throws IoError (cannot open/read), UnsupportedFormatError (unknown magic or
/// malformed header), EmptyImageError (zero width or height).
LoadedImage load_image(const std::filesystem::path& path);

ScalarField read_image(const std::filesystem::path& path);

/// 8-bit mask file, foreground 255 and background 0. ".pgm"/".pnm" write binary PGM,
/// anything else writes PNG.
void write_mask(const Mask& mask, const std::filesystem::path& path);

/// 16-bit grayscale PNG with value round(u * 65535). Throws ContractError if any u is
/// outside [0, 1] or not finite.
void write_field(const ScalarField& u, const std::filesystem::path& path);

/// "iteration,energy" CSV, LF endings, 17 significant digits.
void write_energy_csv(std::span<const double> trace, const std::filesystem::path& path);

std::vector<double> read_energy_csv(const std::filesystem::path& path);

/// Mask from a field read back from disk: v >= 0.5 is foreground.
Mask to_mask(const ScalarField& f);

}  // namespace twophase
