#include "rto/sobol.hpp"

namespace rto {

Sobol2D::Sobol2D() {
  // Dimension 0: van der Corput, v_k = 2^(31-k).
  for (int k = 0; k < bits; ++k) dir_[0][k] = 1u << (31 - k);
  // Dimension 1: primitive polynomial x + 1 (degree 1), m_1 = 1,
  // recurrence v_k = v_{k-1} ^ (v_{k-1} >> 1).
  dir_[1][0] = 1u << 31;
  for (int k = 1; k < bits; ++k)
    dir_[1][k] = dir_[1][k - 1] ^ (dir_[1][k - 1] >> 1);
}

std::array<double, 2> Sobol2D::point(std::uint64_t index) const {
  const std::uint64_t gray = index ^ (index >> 1);
  std::uint32_t x0 = 0, x1 = 0;
  for (int k = 0; k < bits; ++k) {
    if (gray & (1ull << k)) {
      x0 ^= dir_[0][k];
      x1 ^= dir_[1][k];
    }
  }
  constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
  return {x0 * scale, x1 * scale};
}

}  // namespace rto
