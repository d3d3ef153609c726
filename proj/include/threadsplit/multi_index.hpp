#pragma once

#include <array>
#include <cstdint>

namespace threadsplit {

inline constexpr int kDim = 4;       // coordinates x0..x3
inline constexpr int kMaxOrder = 3;  // jet order cap
inline constexpr int kJetSize = 35;  // multi-indices with |alpha| <= 3 in 4 variables

// Number of stored coefficients for a jet of the given order: 1, 5, 15, 35.
inline constexpr std::array<int, kMaxOrder + 1> kSizeForOrder{1, 5, 15, 35};

struct MultiIndex {
  std::array<std::uint8_t, kDim> exponents{};

  constexpr int order() const {
    return exponents[0] + exponents[1] + exponents[2] + exponents[3];
  }
  constexpr bool operator==(const MultiIndex&) const = default;

  static constexpr MultiIndex unit(int coord, int times = 1) {
    MultiIndex m;
    m.exponents[static_cast<std::size_t>(coord)] = static_cast<std::uint8_t>(times);
    return m;
  }
  constexpr MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex m;
    for (int a = 0; a < kDim; ++a) {
      m.exponents[a] = static_cast<std::uint8_t>(exponents[a] + o.exponents[a]);
    }
    return m;
  }
};

// Graded-lexicographic enumeration of all multi-indices of order <= 3.
// Slot 0 is the value, slots 1..4 the first partials d0..d3, and so on; every
// order-n prefix of the table is closed, which lets lower-order jets use a
// prefix of the dense storage.
class MultiIndexTable {
 public:
  static const MultiIndexTable& instance();

  const MultiIndex& at(int slot) const { return indices_[slot]; }
  // Slot of the given multi-index; -1 if its order exceeds kMaxOrder.
  int slot(const MultiIndex& m) const;
  // Slot of (alpha + e_coord), or -1 if that exceeds kMaxOrder.
  int raise(int slot, int coord) const { return raise_[slot][coord]; }

 private:
  MultiIndexTable();
  std::array<MultiIndex, kJetSize> indices_{};
  std::array<std::array<int, kDim>, kJetSize> raise_{};
};

}  // namespace threadsplit
