#ifndef RTO_SOBOL_HPP
#define RTO_SOBOL_HPP

#include <array>
#include <cstdint>

namespace rto {

// Two-dimensional unscrambled Sobol sequence with standard direction
// numbers (dimension 0 is the van der Corput sequence in base 2). Points
// are addressable by index through the Gray-code construction, so
// skip/stride access costs the same as sequential access.
class Sobol2D {
 public:
  Sobol2D();

  // Point with the given index, components in [0, 1).
  std::array<double, 2> point(std::uint64_t index) const;

 private:
  static constexpr int bits = 32;
  std::uint32_t dir_[2][bits];
};

}  // namespace rto

#endif
