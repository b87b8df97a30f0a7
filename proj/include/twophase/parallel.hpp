#pragma once

#include <cstddef>
#include <functional>

namespace twophase {

/// Worker count for per-pixel loops. Reads TWOPHASE_THREADS (0 or unset = hardware concurrency).
int worker_count();

/// Runs body(row_begin, row_end) over disjoint row bands covering [0, rows).
/// Each output pixel must depend only on inputs, so results do not depend on the split.
void for_rows(int rows, std::size_t pixels, const std::function<void(int, int)>& body);

}  // namespace twophase
