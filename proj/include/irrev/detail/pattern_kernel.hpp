#pragma once

// Inner loop shared by extract_pattern and the histogram kernels.

#include <array>
#include <cstdint>

#include "irrev/ordinal.hpp"

namespace irrev::detail {

/// Packed pattern of `values[0..m)`. Values must be finite; m in [2, 16].
inline PatternKey pattern_key(const double* values, int m, TieScheme scheme,
                              double tie_epsilon) noexcept {
  std::array<std::uint8_t, kMaxDimension> order;
  for (int k = 0; k < m; ++k) order[k] = static_cast<std::uint8_t>(k);

  // Stable insertion sort of positions by value; m is small.
  for (int k = 1; k < m; ++k) {
    const std::uint8_t pos = order[k];
    const double v = values[pos];
    int j = k - 1;
    while (j >= 0 && values[order[j]] > v) {
      order[j + 1] = order[j];
      --j;
    }
    order[j + 1] = pos;
  }

  PatternKey key = 0;
  int start = 0;
  while (start < m) {
    int end = start + 1;
    while (end < m && values[order[end]] - values[order[end - 1]] <= tie_epsilon) ++end;

    if (scheme == TieScheme::equal_value) {
      std::uint8_t lowest = order[start];
      for (int j = start + 1; j < end; ++j)
        if (order[j] < lowest) lowest = order[j];
      for (int j = start; j < end; ++j) key = (key << 4) | lowest;
    } else {
      // Ties are listed by occurrence. With epsilon > 0 a group can be out of
      // position order after the value sort.
      if (tie_epsilon > 0.0) {
        for (int a = start + 1; a < end; ++a) {
          const std::uint8_t pos = order[a];
          int b = a - 1;
          while (b >= start && order[b] > pos) {
            order[b + 1] = order[b];
            --b;
          }
          order[b + 1] = pos;
        }
      }
      for (int j = start; j < end; ++j) key = (key << 4) | order[j];
    }
    start = end;
  }
  return key;
}

}  // namespace irrev::detail
