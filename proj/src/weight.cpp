#include "twophase/weight.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twophase/error.hpp"
#include "twophase/grid.hpp"
#include "twophase/parallel.hpp"

namespace twophase {

void WeightParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("sigma must be positive, got " + std::to_string(sigma));
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw ParameterError("rho must be positive, got " + std::to_string(rho));
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("gaussian_kernel: sigma must be positive, got " + std::to_string(sigma));
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  const double denom = 2.0 * sigma * sigma;
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-static_cast<double>(k * k) / denom);
    kernel[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (double& v : kernel) v /= sum;
  return kernel;
}

ScalarField convolve(const ScalarField& f, const std::vector<double>& kernel, Axis axis) {
  const int w = f.width();
  const int h = f.height();
  const int radius = static_cast<int>(kernel.size() / 2);
  ScalarField out(w, h);
  for_rows(h, f.size(), [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
      for (int i = 0; i < w; ++i) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const double c = kernel[static_cast<std::size_t>(k + radius)];
          if (axis == Axis::x)
            acc += c * f(std::clamp(i + k, 0, w - 1), j);
          else
            acc += c * f(i, std::clamp(j + k, 0, h - 1));
        }
        out(i, j) = acc;
      }
    }
  });
  return out;
}

ScalarField edge_weight(const ScalarField& f, const WeightParams& params) {
  if (params.uniform) return ScalarField(f.width(), f.height(), 1.0);
  params.validate();

  const auto kernel = gaussian_kernel(params.sigma);
  const ScalarField smooth = convolve(convolve(f, kernel, Axis::x), kernel, Axis::y);
  const VectorField grad = gradient(smooth);

  const double inv_rho2 = 1.0 / (params.rho * params.rho);
  ScalarField g(f.width(), f.height());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double mag2 = grad.x[k] * grad.x[k] + grad.y[k] * grad.y[k];
    g[k] = 1.0 / (1.0 + mag2 * inv_rho2);
  }
  return g;
}

}  // namespace twophase
