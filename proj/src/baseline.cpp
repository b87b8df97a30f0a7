#include "twophase/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "twophase/error.hpp"

namespace twophase {

int histogram_bin(double v) noexcept {
  return static_cast<int>(std::clamp(std::lround(v * 255.0), 0L, 255L));
}

Histogram build_histogram(const ScalarField& f) {
  Histogram hist;
  for (double v : f) ++hist.bins[static_cast<std::size_t>(histogram_bin(v))];
  hist.total = f.size();
  return hist;
}

int otsu_split(const Histogram& hist) {
  // Cumulative count and intensity sum of bins below the split, kept in integers.
  std::int64_t total_sum = 0;
  for (std::size_t b = 0; b < hist.bins.size(); ++b)
    total_sum += static_cast<std::int64_t>(b) * static_cast<std::int64_t>(hist.bins[b]);
  const auto total = static_cast<std::int64_t>(hist.total);

  std::int64_t n0 = 0;
  std::int64_t s0 = 0;
  int best_k = -1;
  double best = -1.0;
  for (int k = 1; k < 256; ++k) {
    const auto count = static_cast<std::int64_t>(hist.bins[static_cast<std::size_t>(k - 1)]);
    n0 += count;
    s0 += static_cast<std::int64_t>(k - 1) * count;
    const std::int64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const std::int64_t s1 = total_sum - s0;
    // N^2 * w0 w1 (mu0 - mu1)^2 = (s0 n1 - s1 n0)^2 / (n0 n1)
    const double num = static_cast<double>(s0 * n1 - s1 * n0);
    const double score = num * num / (static_cast<double>(n0) * static_cast<double>(n1));
    if (score > best) {
      best = score;
      best_k = k;
    }
  }
  if (best_k < 0) throw DegenerateInputError("otsu: histogram has a single occupied bin");
  return best_k;
}

double otsu_threshold(const ScalarField& f) {
  if (f.empty()) throw ContractError("otsu: empty image");
  const int k = otsu_split(build_histogram(f));
  return (static_cast<double>(k) - 0.5) / 255.0;
}

Mask otsu_segment(const ScalarField& f) {
  const double t = otsu_threshold(f);
  Mask mask(f.width(), f.height());
  for (std::size_t k = 0; k < f.size(); ++k) mask[k] = f[k] >= t ? 1 : 0;
  return mask;
}

}  // namespace twophase
