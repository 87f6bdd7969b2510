#include "catlogic/oracles.hpp"

#include <algorithm>
#include <set>

namespace catlogic {

// Straight from the satisfaction clause: try every assignment of module
// elements to the free and bound slots and test the equations by table
// lookups.  Exponential, but independent of the linear-algebra path.
std::vector<std::vector<int>> pp_sweep_oracle(const FiniteModule& m,
                                              const LinearPp& phi) {
  int k = phi.n + phi.m;
  std::set<std::vector<int>> found;
  std::vector<int> tup(k, 0);
  while (true) {
    bool sat = true;
    for (const auto& row : phi.rows) {
      if ((int)row.size() != k) throw error("pp formula: bad row length");
      int acc = m.zero();
      for (int j = 0; j < k; ++j) acc = m.add(acc, m.act(row[j], tup[j]));
      if (acc != m.zero()) {
        sat = false;
        break;
      }
    }
    if (sat) found.insert(std::vector<int>(tup.begin(), tup.begin() + phi.n));
    int i = k - 1;
    while (i >= 0 && ++tup[i] == m.size()) tup[i--] = 0;
    if (i < 0) break;
  }
  return {found.begin(), found.end()};
}

bool pp_implies_sweep_oracle(const FiniteRing& r, const LinearPp& phi,
                             const LinearPp& psi, int max_size) {
  if (phi.n != psi.n) throw error("pp_implies: free arity mismatch");
  for (const auto& m : module_corpus(r, max_size)) {
    auto a = pp_sweep_oracle(m, phi);
    auto b = pp_sweep_oracle(m, psi);
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

} // namespace catlogic
