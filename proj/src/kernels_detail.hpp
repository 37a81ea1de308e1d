#pragma once

#include <bit>
#include <cstdint>
#include <span>

namespace qsnet::kernels::detail {

// Inserts a zero at each (ascending) position of `sorted_bits`.
inline std::uint64_t insert_zero_bits(std::uint64_t i, std::span<const std::size_t> sorted_bits) {
  for (std::size_t p : sorted_bits) {
    const std::uint64_t low = i & ((std::uint64_t{1} << p) - 1);
    i = ((i >> p) << (p + 1)) | low;
  }
  return i;
}

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

}  // namespace qsnet::kernels::detail
