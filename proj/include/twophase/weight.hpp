#pragma once

#include <vector>

#include "twophase/field.hpp"

namespace twophase {

/// Edge-stopping weight g = 1 / (1 + |grad(G_sigma * f)|^2 / rho^2).
struct WeightParams {
  double sigma = 2.0;  ///< Gaussian std-dev in pixels.
  double rho = 0.1;    ///< Gradient scale, for intensities in [0, 1].
  bool uniform = false;  ///< g == 1 everywhere (plain TV).

  /// Throws ParameterError unless sigma > 0 and rho > 0.
  void validate() const;
};

enum class Axis { x, y };

/// Sampled 1-D Gaussian of radius ceil(3 sigma), renormalised to unit sum.
/// Entry k corresponds to offset k - radius.
std::vector<double> gaussian_kernel(double sigma);

/// 1-D convolution along one axis with clamp-to-edge boundaries.
ScalarField convolve(const ScalarField& f, const std::vector<double>& kernel, Axis axis);

ScalarField edge_weight(const ScalarField& f, const WeightParams& params);

}  // namespace twophase
