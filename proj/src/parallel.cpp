#include "twophase/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace twophase {

namespace {
// Below this many pixels thread start-up costs more than the loop.
constexpr std::size_t kMinParallelPixels = 1 << 16;
}  // namespace

int worker_count() {
  static const int count = [] {
    int requested = 0;
    if (const char* env = std::getenv("TWOPHASE_THREADS")) {
      try {
        requested = std::stoi(env);
      } catch (...) {
        requested = 0;
      }
    }
    if (requested > 0) return requested;
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  }();
  return count;
}

void for_rows(int rows, std::size_t pixels, const std::function<void(int, int)>& body) {
  const int workers = std::min(worker_count(), rows);
  if (workers <= 1 || pixels < kMinParallelPixels) {
    body(0, rows);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  const int band = (rows + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const int begin = w * band;
    const int end = std::min(rows, begin + band);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(rows, band));
}

}  // namespace twophase
