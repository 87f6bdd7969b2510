#include "catlogic/oracles.hpp"

namespace catlogic {

// Filters straight from the order: non-empty, up-closed, and closed under
// binary meets (computed as the greatest common lower bound each time).
std::vector<std::uint32_t> filter_oracle(const std::vector<std::vector<bool>>& leq) {
  const int n = static_cast<int>(leq.size());
  if (n > 31) throw error("filter_oracle: poset too large");
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) {
      if (!((mask >> x) & 1)) continue;
      for (int y = 0; y < n && ok; ++y) {
        if (leq[x][y] && !((mask >> y) & 1)) ok = false;
        if (!((mask >> y) & 1)) continue;
        // meet of x and y must exist and lie in the filter
        int meet = -1;
        for (int z = 0; z < n; ++z) {
          if (!(leq[z][x] && leq[z][y])) continue;
          if (meet == -1 || leq[meet][z]) meet = z;
        }
        bool greatest = meet != -1;
        for (int z = 0; z < n && greatest; ++z)
          if (leq[z][x] && leq[z][y] && !leq[z][meet]) greatest = false;
        if (!greatest || !((mask >> meet) & 1)) ok = false;
      }
    }
    if (ok) out.push_back(mask);
  }
  return out;
}

} // namespace catlogic
