#pragma once

#include <cstdint>
#include <string_view>

#include "twophase/field.hpp"

namespace twophase {

enum class SyntheticKind { disk, bars };

/// Test image with its noise-free ground truth.
struct SyntheticImage {
  ScalarField image;  ///< Foreground 0.9, background 0.1, plus clipped Gaussian noise.
  Mask truth;
};

inline constexpr double kSyntheticForeground = 0.9;
inline constexpr double kSyntheticBackground = 0.1;

/// disk: centred disk of radius size/4 (pixel centres at i + 0.5).
/// bars: vertical stripes of width size/8, the first stripe background.
/// Noise is N(0, noise_std) from a mt19937_64 seeded with `seed`, then clipped to [0, 1].
/// Throws ParameterError for size < 16 or negative noise.
SyntheticImage make_synthetic(SyntheticKind kind, int size, double noise_std, std::uint64_t seed);

SyntheticKind parse_synthetic_kind(std::string_view name);

/// Fraction of pixels on which two masks agree.
double agreement(const Mask& a, const Mask& b);

/// Number of horizontally or vertically adjacent pixel pairs with different labels.
std::size_t boundary_transitions(const Mask& mask);

}  // namespace twophase
