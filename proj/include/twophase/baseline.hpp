#pragma once

#include <array>
#include <cstdint>

#include "twophase/field.hpp"

namespace twophase {

/// 256-bin intensity histogram of an image normalised to [0, 1].
/// A value v falls in bin round(255 v), so 8-bit sources map one level per bin.
struct Histogram {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;
};

int histogram_bin(double v) noexcept;

Histogram build_histogram(const ScalarField& f);

/// Otsu split index k in [1, 255]: bins < k are background, bins >= k foreground.
/// Maximises between-class variance; the lowest k wins ties.
/// Throws DegenerateInputError when fewer than two bins are occupied.
int otsu_split(const Histogram& hist);

/// Intensity threshold equivalent to otsu_split(): v >= t exactly when bin(v) >= k.
double otsu_threshold(const ScalarField& f);

/// f >= otsu_threshold(f).
Mask otsu_segment(const ScalarField& f);

}  // namespace twophase
