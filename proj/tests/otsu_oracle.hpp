#pragma once

#include <array>
#include <cstdint>

namespace twophase::test {

/// Exhaustive Otsu: for every split k, recompute both class weights and means from
/// the raw histogram and keep the first maximiser of w0 w1 (mu0 - mu1)^2.
/// Returns -1 when no split has two non-empty classes.
inline int exhaustive_otsu(const std::array<std::uint64_t, 256>& bins) {
  long double total = 0;
  for (auto c : bins) total += static_cast<long double>(c);
  int best_k = -1;
  long double best = -1;
  for (int k = 1; k < 256; ++k) {
    long double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (int b = 0; b < 256; ++b) {
      const auto c = static_cast<long double>(bins[static_cast<std::size_t>(b)]);
      if (b < k) {
        n0 += c;
        s0 += c * b;
      } else {
        n1 += c;
        s1 += c * b;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const long double mu0 = s0 / n0;
    const long double mu1 = s1 / n1;
    const long double between = (n0 / total) * (n1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace twophase::test
