#include "twophase/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "twophase/error.hpp"

namespace twophase {

SyntheticImage make_synthetic(SyntheticKind kind, int size, double noise_std, std::uint64_t seed) {
  if (size < 16) throw ParameterError("synthetic size must be at least 16, got " + std::to_string(size));
  if (!(noise_std >= 0.0)) throw ParameterError("synthetic noise must be non-negative");

  SyntheticImage out{ScalarField(size, size), Mask(size, size)};
  const double centre = size / 2.0;
  const double radius = size / 4.0;
  const int stripe = std::max(1, size / 8);

  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      bool inside = false;
      if (kind == SyntheticKind::disk) {
        const double dx = i + 0.5 - centre;
        const double dy = j + 0.5 - centre;
        inside = dx * dx + dy * dy <= radius * radius;
      } else {
        inside = (i / stripe) % 2 == 1;
      }
      out.truth(i, j) = inside ? 1 : 0;
      out.image(i, j) = inside ? kSyntheticForeground : kSyntheticBackground;
    }
  }

  if (noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_std);
    for (double& v : out.image) v = std::clamp(v + noise(rng), 0.0, 1.0);
  }
  return out;
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "disk") return SyntheticKind::disk;
  if (name == "bars") return SyntheticKind::bars;
  throw ParameterError("unknown synthetic image '" + std::string(name) + "' (expected disk or bars)");
}

double agreement(const Mask& a, const Mask& b) {
  if (!a.same_shape(b)) throw ContractError("agreement: mask shapes differ");
  if (a.empty()) return 1.0;
  std::size_t same = 0;
  for (std::size_t k = 0; k < a.size(); ++k) same += (a[k] != 0) == (b[k] != 0);
  return static_cast<double>(same) / static_cast<double>(a.size());
}

std::size_t boundary_transitions(const Mask& mask) {
  std::size_t count = 0;
  for (int j = 0; j < mask.height(); ++j) {
    for (int i = 0; i < mask.width(); ++i) {
      if (i + 1 < mask.width() && (mask(i, j) != 0) != (mask(i + 1, j) != 0)) ++count;
      if (j + 1 < mask.height() && (mask(i, j) != 0) != (mask(i, j + 1) != 0)) ++count;
    }
  }
  return count;
}

}  // namespace twophase
