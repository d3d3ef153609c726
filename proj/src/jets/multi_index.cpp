#include "threadsplit/multi_index.hpp"

namespace threadsplit {

const MultiIndexTable& MultiIndexTable::instance() {
  static const MultiIndexTable table;
  return table;
}

MultiIndexTable::MultiIndexTable() {
  int slot = 0;
  for (int order = 0; order <= kMaxOrder; ++order) {
    // lexicographic with x0 exponent descending: d0 before d1 before ...
    for (int e0 = order; e0 >= 0; --e0) {
      for (int e1 = order - e0; e1 >= 0; --e1) {
        for (int e2 = order - e0 - e1; e2 >= 0; --e2) {
          const int e3 = order - e0 - e1 - e2;
          MultiIndex m;
          m.exponents = {static_cast<std::uint8_t>(e0), static_cast<std::uint8_t>(e1),
                         static_cast<std::uint8_t>(e2), static_cast<std::uint8_t>(e3)};
          indices_[slot++] = m;
        }
      }
    }
  }
  for (int s = 0; s < kJetSize; ++s) {
    for (int a = 0; a < kDim; ++a) {
      raise_[s][a] = this->slot(indices_[s] + MultiIndex::unit(a));
    }
  }
}

int MultiIndexTable::slot(const MultiIndex& m) const {
  if (m.order() > kMaxOrder) return -1;
  for (int s = 0; s < kJetSize; ++s) {
    if (indices_[s] == m) return s;
  }
  return -1;
}

}  // namespace threadsplit
